#include "procrastimate/cli/bot.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "procrastimate/service/session_service.hpp"

namespace procrastimate::cli {

namespace {

constexpr std::array<std::string_view, 3> kPolicyNames = {"perfect", "random", "cause-only"};

std::vector<int> cards_of(const std::set<int>& cards, Cause cause) {
  std::vector<int> out;
  for (int id : cards) {
    if (is_valid_card_id(id) && cause_of_card(id) == cause) out.push_back(id);
  }
  return out;
}

std::optional<int> first_affordable(const GameState& state, const StoryPack& pack,
                                    const std::function<bool(int)>& wanted) {
  for (const auto& listing : rules::shop_listings(state, pack)) {
    if (listing.cost_points <= state.points_available() && wanted(listing.card_id)) return listing.card_id;
  }
  return std::nullopt;
}

// Winning move for a pending case using cards the player already holds.
std::optional<rules::Action> winning_move(const GameState& state, const Case& c) {
  if (c.level == CaseLevel::L0) return rules::L0Choice{c.case_id, *c.major_cause};
  if (c.level == CaseLevel::L1) {
    const auto owned = cards_of(state.owned_cards, *c.major_cause);
    if (owned.empty()) return std::nullopt;
    // Spread the handbook over distinct cards when possible.
    for (int id : owned) {
      if (!state.handbook.contains_card(id)) return rules::PlayCard{c.case_id, id};
    }
    return rules::PlayCard{c.case_id, owned.front()};
  }
  const auto hand = rules::playable_cards(state);
  const auto a = cards_of(hand, c.cause_pair->first());
  const auto b = cards_of(hand, c.cause_pair->second());
  if (a.empty() || b.empty()) return std::nullopt;
  return rules::PlayPair{c.case_id, a.front(), b.front()};
}

bool any_winnable(const GameState& state, const StoryPack& pack) {
  for (const Case* c : rules::pending_cases(state, pack)) {
    if (winning_move(state, *c)) return true;
    if (c->level == CaseLevel::L1) {
      const Cause need = *c->major_cause;
      if (first_affordable(state, pack, [&](int id) { return cause_of_card(id) == need; })) return true;
    }
  }
  return false;
}

int random_of(const std::set<int>& cards, Rng& rng) {
  auto it = cards.begin();
  std::advance(it, static_cast<long>(rng.below(cards.size())));
  return *it;
}

}  // namespace

std::string_view to_string(BotPolicy policy) { return kPolicyNames[static_cast<std::size_t>(policy)]; }

std::optional<BotPolicy> parse_bot_policy(std::string_view name) {
  for (std::size_t i = 0; i < kPolicyNames.size(); ++i) {
    if (kPolicyNames[i] == name) return static_cast<BotPolicy>(i);
  }
  return std::nullopt;
}

Bot::Bot(BotPolicy policy, std::uint64_t seed) : policy_(policy), rng_(mix_seed(seed, 0xB07)) {}

std::optional<rules::Action> Bot::next_action(const GameState& state, const StoryPack& pack) {
  if (state.current_level == Level::Completed) return std::nullopt;
  const auto pending = rules::pending_cases(state, pack);
  if (pending.empty()) throw DeadlockError("no pending cases at level " + std::string(to_string(state.current_level)));

  if (policy_ == BotPolicy::Perfect) {
    if (auto buy = first_affordable(state, pack, [](int) { return true; })) return rules::BuyCard{*buy};
    for (const Case* c : pending) {
      if (auto move = winning_move(state, *c)) return move;
    }
    throw DeadlockError("no pending case can be won with the owned cards");
  }

  if (!any_winnable(state, pack)) throw DeadlockError("no pending case can be won with owned or affordable cards");
  const Case& target = *rules::current_case(state, pack);

  if (state.current_level == Level::L0) {
    const Cause cause = policy_ == BotPolicy::CauseOnly ? *target.major_cause : kAllCauses[rng_.below(4)];
    return rules::L0Choice{target.case_id, cause};
  }
  if (state.current_level == Level::L1) {
    const bool stuck = !winning_move(state, target);
    if (policy_ == BotPolicy::Random && !stuck && rng_.below(8) == 0) {
      if (auto buy = first_affordable(state, pack, [](int) { return true; })) return rules::BuyCard{*buy};
    }
    if (stuck) {
      // Move on to a case the hand can answer, else buy a card some case needs.
      for (const Case* c : pending) {
        if (winning_move(state, *c)) return rules::AdvanceCase{c->case_id};
      }
      for (const Case* c : pending) {
        const Cause need = *c->major_cause;
        if (auto buy = first_affordable(state, pack, [&](int id) { return cause_of_card(id) == need; })) {
          return rules::BuyCard{*buy};
        }
      }
    }
    return rules::PlayCard{target.case_id, random_of(state.owned_cards, rng_)};
  }
  if (!winning_move(state, target)) {
    for (const Case* c : pending) {
      if (winning_move(state, *c)) return rules::AdvanceCase{c->case_id};
    }
  }
  const auto hand = rules::playable_cards(state);
  const int a = random_of(hand, rng_);
  int b = random_of(hand, rng_);
  while (b == a) b = random_of(hand, rng_);
  return rules::PlayPair{target.case_id, a, b};
}

std::string describe_action(const rules::Action& action) {
  return std::visit(
      [](const auto& a) -> std::string {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, rules::L0Choice>) {
          return "L0Choice " + a.case_id + " " + std::string(to_string(a.cause));
        } else if constexpr (std::is_same_v<T, rules::PlayCard>) {
          return "PlayCard " + a.case_id + " " + std::to_string(a.card_id);
        } else if constexpr (std::is_same_v<T, rules::PlayPair>) {
          return "PlayPair " + a.case_id + " " + std::to_string(a.card_a) + "+" + std::to_string(a.card_b);
        } else if constexpr (std::is_same_v<T, rules::BuyCard>) {
          return "BuyCard " + std::to_string(a.card_id);
        } else if constexpr (std::is_same_v<T, rules::AdvanceCase>) {
          return "AdvanceCase " + a.case_id;
        } else {
          return "GrantLetter " + std::string(to_string(a.chapter));
        }
      },
      action);
}

std::string describe_state(const GameState& state, const StoryPack& pack) {
  std::size_t l1_total = 0;
  for (Cause cause : kAllCauses) l1_total += pack.l1_chapter(cause).size();
  std::ostringstream out;
  out << "level: " << to_string(state.current_level) << "\n"
      << "solved: L0 " << state.solved_l0.size() << "/" << pack.l0_cases.size() << ", L1 " << state.solved_l1.size()
      << "/" << l1_total << ", L2 " << state.solved_l2.size() << "/" << pack.l2_cases.size() << "\n"
      << "owned cards: " << state.owned_cards.size() << "\n"
      << "points: earned " << state.points_earned << ", spent " << state.points_spent << ", available "
      << state.points_available() << "\n"
      << "handbook:";
  for (Cause cause : kAllCauses) {
    out << " " << to_string(cause) << "=" << state.handbook.chapter(cause).size() << "/" << kChapterCapacity;
  }
  out << "\nletters: " << state.letters_received.size() << ", merged cards: " << state.merged_cards.size()
      << ", actions: " << state.action_log.size() << "\n";
  return out.str();
}

GameState mask_generated(GameState state) {
  for (auto& letter : state.letters_received) letter.text.clear();
  for (auto& merged : state.merged_cards) {
    merged.generated_title.clear();
    merged.generated_text.clear();
  }
  for (auto& record : state.action_log) {
    for (auto& text : record.generated) text.clear();
  }
  return state;
}

PlayReport play_bot(const StoryPack& pack, BotPolicy policy, std::uint64_t seed, const PlayOptions& options) {
  PlayReport report;
  Bot bot(policy, seed);
  GameState state = rules::new_game(pack, options.session_id, seed);
  auto emit = [&](std::string line) {
    if (options.on_line) options.on_line(line);
    report.transcript.push_back(std::move(line));
  };

  for (std::size_t step = 1;; ++step) {
    std::optional<rules::Action> action;
    try {
      action = bot.next_action(state, pack);
    } catch (const DeadlockError& e) {
      report.deadlocked = true;
      report.deadlock_reason = e.what();
      emit("deadlock: " + report.deadlock_reason);
      break;
    }
    if (!action) {
      report.completed = true;
      break;
    }
    if (report.actions >= options.action_cap) {
      report.capped = true;
      emit("action cap of " + std::to_string(options.action_cap) + " reached");
      break;
    }

    const std::uint64_t dseed = rules::dialogue_seed(state);
    rules::PlainNarrator plain;
    std::optional<dialogue::DialogueNarrator> narrator;
    rules::Narrator* active = &plain;
    if (options.dialogue != nullptr) active = &narrator.emplace(*options.dialogue);

    char prefix[16];
    std::snprintf(prefix, sizeof prefix, "%04zu", step);
    const std::string level(to_string(state.current_level));
    rules::ApplyResult applied;
    try {
      applied = rules::apply(state, pack, *action, {static_cast<std::int64_t>(step), active});
    } catch (const Error& e) {
      emit(std::string(prefix) + " " + level + " " + describe_action(*action) + " => rejected " + e.code());
      continue;
    }
    ++report.actions;
    state = std::move(applied.state);

    std::string line = std::string(prefix) + " " + level + " " + describe_action(*action);
    if (applied.outcome) {
      ++report.adjudications;
      applied.outcome->win() ? ++report.wins : ++report.losses;
      line += " => " + std::string(rules::to_string(applied.outcome->result));
    }
    emit(line);

    std::vector<dialogue::DialogueResponse> responses;
    if (options.dialogue != nullptr) {
      if (applied.outcome) {
        auto feedback = service::adjudication_feedback(*options.dialogue, pack, *action, applied.outcome->result, dseed);
        if (feedback) {
          if (feedback->tone != rules::tone_for(applied.outcome->result)) ++report.tone_mismatches;
          responses.push_back(std::move(*feedback));
        }
      }
      for (const auto& r : narrator->responses()) responses.push_back(r);
    }
    for (const auto& r : responses) {
      std::string text = r.text;
      std::replace(text.begin(), text.end(), '\n', ' ');
      emit("     [" + std::string(dialogue::to_string(r.purpose)) + "/" + std::string(rules::to_string(r.tone)) +
           "] " + r.speaker + ": " + text);
      report.dialogue.push_back(r);
    }
    for (const auto& letter : applied.outcome ? applied.outcome->delta.letters : std::vector<std::string>{}) {
      emit("     letter " + letter);
    }
    if (applied.outcome && applied.outcome->delta.level_advanced_to) {
      emit("     level -> " + std::string(to_string(*applied.outcome->delta.level_advanced_to)));
    }

    if (options.record_trajectory) report.trajectory.push_back(state);
    if (options.on_state) options.on_state(state);
  }
  report.final_state = std::move(state);
  return report;
}

}  // namespace procrastimate::cli
