#include "procrastimate/rules/engine.hpp"

#include <algorithm>

#include "procrastimate/domain/card.hpp"
#include "procrastimate/errors.hpp"
#include "procrastimate/util/rng.hpp"

namespace procrastimate::rules {

namespace {

// Forwards to the configured narrator and keeps every string it produced so
// the action-log entry can carry them.
class CapturingNarrator final : public Narrator {
 public:
  explicit CapturingNarrator(Narrator* inner) : inner_(inner ? inner : &plain_) {}

  std::string letter_text(const LetterRequest& request) override {
    captured_.push_back(inner_->letter_text(request));
    return captured_.back();
  }

  MergedText merged_text(const MergeRequest& request) override {
    MergedText text = inner_->merged_text(request);
    captured_.push_back(text.title);
    captured_.push_back(text.text);
    return text;
  }

  std::vector<std::string> take() { return std::move(captured_); }

 private:
  PlainNarrator plain_;
  Narrator* inner_;
  std::vector<std::string> captured_;
};

CaseLevel case_level_for(Level level) {
  switch (level) {
    case Level::L0: return CaseLevel::L0;
    case Level::L1: return CaseLevel::L1;
    default: return CaseLevel::L2;
  }
}

void require_level(const GameState& state, Level expected) {
  if (state.current_level != expected) {
    throw StateError("WRONG_LEVEL", "action requires level " + std::string(to_string(expected)) +
                                        " but the session is at " +
                                        std::string(to_string(state.current_level)));
  }
}

const Case& require_case(const StoryPack& pack, const std::string& case_id, CaseLevel level) {
  const Case* found = pack.find_case(case_id);
  if (found == nullptr) {
    throw StateError("UNKNOWN_CASE", "no case '" + case_id + "' in pack " + pack.pack_id);
  }
  if (found->level != level) {
    throw StateError("WRONG_LEVEL", "case '" + case_id + "' belongs to level " +
                                        std::string(to_string(found->level)));
  }
  return *found;
}

void require_unsolved(const GameState& state, const Case& c) {
  if (is_solved(state, c)) {
    throw StateError("ALREADY_SOLVED", "case '" + c.case_id + "' is already solved");
  }
}

void append_log(GameState& state, const ActionContext& ctx, ActionKind kind, std::string case_id,
                std::vector<int> cards, std::optional<Cause> cause, std::optional<bool> win,
                std::vector<std::string> generated) {
  ActionRecord record;
  record.seq = state.action_log.size() + 1;
  record.timestamp_ms = ctx.timestamp_ms;
  record.kind = kind;
  record.case_id = std::move(case_id);
  record.cards = std::move(cards);
  record.cause = cause;
  record.win = win;
  record.generated = std::move(generated);
  state.action_log.push_back(std::move(record));
}

void advance_level(GameState& state, StateDelta& delta) {
  const Level next = progression(state);
  if (next != state.current_level) {
    state.current_level = next;
    delta.level_advanced_to = next;
  }
}

Outcome make_outcome(Result result) {
  Outcome outcome;
  outcome.result = result;
  outcome.feedback_tone = tone_for(result);
  return outcome;
}

// Applies a scheduled letter to `state` (no logging, no precondition checks
// beyond the schedule lookup). Returns the granted cards.
std::vector<int> deliver_letter(GameState& state, const StoryPack& pack, Cause chapter,
                                const Case* sender, Narrator& narrator, std::uint64_t seed) {
  const LetterGrant* grant = pack.letter_for(chapter);
  if (grant == nullptr) return {};

  LetterRequest request;
  request.chapter = chapter;
  request.cards = grant->cards;
  request.template_id = grant->template_id;
  request.sender_case = sender;
  request.seed = seed;

  LetterRecord letter;
  letter.milestone = chapter_milestone(chapter);
  letter.granted_cards = grant->cards;
  letter.sender_npc_id = sender ? sender->npc.npc_id : std::string();
  letter.text = narrator.letter_text(request);

  std::vector<int> gained;
  for (int id : grant->cards) {
    if (state.owned_cards.insert(id).second) gained.push_back(id);
  }
  state.letters_received.push_back(std::move(letter));
  return gained;
}

const Case* last_case_of_chapter(const GameState& state, const StoryPack& pack, Cause chapter) {
  const auto& entries = state.handbook.chapter(chapter);
  return entries.empty() ? nullptr : pack.find_case(entries.back().case_id);
}

}  // namespace

std::string_view to_string(Result result) { return result == Result::Win ? "Win" : "Lose"; }

std::string_view to_string(Tone tone) { return tone == Tone::Positive ? "Positive" : "Critical"; }

Result judge_level0(const Case& c, Cause choice) {
  return c.major_cause == choice ? Result::Win : Result::Lose;
}

Result judge_level1(const Case& c, int card_id) {
  return c.major_cause == cause_of_card(card_id) ? Result::Win : Result::Lose;
}

Result judge_level2(const Case& c, int card_a, int card_b) {
  if (!c.cause_pair) return Result::Lose;
  const Cause a = cause_of_card(card_a);
  const Cause b = cause_of_card(card_b);
  // Set equality: a pair of same-cause cards is a one-element set and can
  // never equal a two-element cause pair.
  if (a == b || !c.cause_pair->is_distinct()) return Result::Lose;
  return CausePair(a, b) == *c.cause_pair ? Result::Win : Result::Lose;
}

GameState new_game(const StoryPack& pack, std::string session_id, std::uint64_t rng_seed) {
  GameState state;
  state.session_id = std::move(session_id);
  state.pack_id = pack.pack_id;
  state.current_level = Level::L0;
  state.owned_cards.insert(pack.starting_hand.begin(), pack.starting_hand.end());
  state.rng_seed = rng_seed;
  return state;
}

Level progression(const GameState& state) {
  if (state.solved_l0.size() < kLevel0CaseCount) return Level::L0;
  if (!state.handbook.is_complete()) return Level::L1;
  if (state.solved_l2.size() < kLevel2CaseCount) return Level::L2;
  return Level::Completed;
}

bool is_solved(const GameState& state, const Case& c) {
  switch (c.level) {
    case CaseLevel::L0: return state.solved_l0.contains(c.case_id);
    case CaseLevel::L1: return state.solved_l1.contains(c.case_id);
    case CaseLevel::L2: return state.solved_l2.contains(c.case_id);
  }
  return false;
}

Transition adjudicate_level0(const GameState& state, const StoryPack& pack,
                             const std::string& case_id, Cause choice, const ActionContext& ctx) {
  require_level(state, Level::L0);
  const Case& c = require_case(pack, case_id, CaseLevel::L0);
  require_unsolved(state, c);

  Transition t{state, make_outcome(judge_level0(c, choice))};
  if (t.outcome.win()) {
    t.state.solved_l0.insert(c.case_id);
    advance_level(t.state, t.outcome.delta);
  }
  append_log(t.state, ctx, ActionKind::L0Choice, c.case_id, {}, choice, t.outcome.win(), {});
  return t;
}

Transition adjudicate_level1(const GameState& state, const StoryPack& pack,
                             const std::string& case_id, int card_id, const ActionContext& ctx) {
  require_level(state, Level::L1);
  const Case& c = require_case(pack, case_id, CaseLevel::L1);
  require_unsolved(state, c);
  cause_of_card(card_id);
  if (!state.owned_cards.contains(card_id)) {
    throw StateError("CARD_NOT_OWNED", "card " + std::to_string(card_id) + " is not in the hand");
  }

  const std::uint64_t seed = dialogue_seed(state);
  CapturingNarrator narrator(ctx.narrator);
  Transition t{state, make_outcome(judge_level1(c, card_id))};
  if (t.outcome.win()) {
    const Cause chapter = *c.major_cause;
    HandbookEntry entry{c.case_id, card_id};
    t.state.handbook.append(chapter, entry);
    t.state.solved_l1.insert(c.case_id);
    t.state.points_earned += 1;

    StateDelta& delta = t.outcome.delta;
    delta.handbook_chapter = chapter;
    delta.handbook_entry = entry;
    delta.points_awarded = 1;

    const std::string milestone = chapter_milestone(chapter);
    if (t.state.handbook.is_chapter_complete(chapter) && !t.state.has_letter(milestone) &&
        pack.letter_for(chapter) != nullptr) {
      delta.cards_gained = deliver_letter(t.state, pack, chapter, &c, narrator, seed);
      delta.letters.push_back(milestone);
    }
    advance_level(t.state, delta);
  }
  append_log(t.state, ctx, ActionKind::PlayCard, c.case_id, {card_id}, std::nullopt,
             t.outcome.win(), narrator.take());
  return t;
}

Transition adjudicate_level2(const GameState& state, const StoryPack& pack,
                             const std::string& case_id, int card_a, int card_b,
                             const ActionContext& ctx) {
  require_level(state, Level::L2);
  const Case& c = require_case(pack, case_id, CaseLevel::L2);
  require_unsolved(state, c);
  cause_of_card(card_a);
  cause_of_card(card_b);
  if (card_a == card_b) {
    throw StateError("IDENTICAL_CARDS", "a merge needs two different cards");
  }
  for (int id : {card_a, card_b}) {
    if (!state.handbook.contains_card(id)) {
      throw StateError("CARD_NOT_IN_HANDBOOK",
                       "card " + std::to_string(id) + " is not in the Management Handbook");
    }
  }

  const std::uint64_t seed = dialogue_seed(state);
  CapturingNarrator narrator(ctx.narrator);
  Transition t{state, make_outcome(judge_level2(c, card_a, card_b))};
  if (t.outcome.win()) {
    MergeRequest request{card_a, card_b, &c, seed};
    MergedText text = narrator.merged_text(request);
    MergedCard merged;
    merged.source_low = std::min(card_a, card_b);
    merged.source_high = std::max(card_a, card_b);
    merged.generated_title = std::move(text.title);
    merged.generated_text = std::move(text.text);
    merged.case_id = c.case_id;

    t.state.merged_cards.push_back(merged);
    t.state.solved_l2.insert(c.case_id);
    t.outcome.delta.merged = std::move(merged);
    advance_level(t.state, t.outcome.delta);
  }
  append_log(t.state, ctx, ActionKind::PlayPair, c.case_id, {card_a, card_b}, std::nullopt,
             t.outcome.win(), narrator.take());
  return t;
}

GameState buy_card(const GameState& state, const StoryPack& pack, int card_id,
                   const ActionContext& ctx) {
  cause_of_card(card_id);
  if (state.owned_cards.contains(card_id)) {
    throw EconomyError("ALREADY_OWNED", "card " + std::to_string(card_id) + " is already owned");
  }
  const ShopListing* listing = pack.listing(card_id);
  if (listing == nullptr) {
    throw EconomyError("NOT_LISTED", "card " + std::to_string(card_id) + " is not sold in the shop");
  }
  if (state.points_available() < listing->cost_points) {
    throw EconomyError("INSUFFICIENT_POINTS",
                       "card " + std::to_string(card_id) + " costs " +
                           std::to_string(listing->cost_points) + " Privilege Point(s), " +
                           std::to_string(state.points_available()) + " available");
  }
  GameState next = state;
  next.owned_cards.insert(card_id);
  next.points_spent += listing->cost_points;
  append_log(next, ctx, ActionKind::BuyCard, {}, {card_id}, std::nullopt, std::nullopt, {});
  return next;
}

GameState grant_letter(const GameState& state, const StoryPack& pack, Cause chapter,
                       const ActionContext& ctx) {
  const std::string milestone = chapter_milestone(chapter);
  if (!state.handbook.is_chapter_complete(chapter)) {
    throw StateError("MILESTONE_NOT_REACHED",
                     "chapter " + std::string(chapter_title(chapter)) + " is not complete");
  }
  if (state.has_letter(milestone)) {
    throw StateError("DUPLICATE_MILESTONE", "letter for " + milestone + " was already granted");
  }
  if (pack.letter_for(chapter) == nullptr) {
    throw StateError("NO_LETTER_SCHEDULED", "pack schedules no letter for " + milestone);
  }
  const std::uint64_t seed = dialogue_seed(state);
  CapturingNarrator narrator(ctx.narrator);
  GameState next = state;
  deliver_letter(next, pack, chapter, last_case_of_chapter(state, pack, chapter), narrator, seed);
  append_log(next, ctx, ActionKind::GrantLetter, {}, {}, chapter, std::nullopt, narrator.take());
  return next;
}

GameState advance_case(const GameState& state, const StoryPack& pack, const std::string& case_id,
                       const ActionContext& ctx) {
  if (state.current_level == Level::Completed) {
    throw StateError("WRONG_LEVEL", "the game is already completed");
  }
  const Case& c = require_case(pack, case_id, case_level_for(state.current_level));
  require_unsolved(state, c);
  GameState next = state;
  append_log(next, ctx, ActionKind::AdvanceCase, c.case_id, {}, std::nullopt, std::nullopt, {});
  return next;
}

std::vector<ShopListing> shop_listings(const GameState& state, const StoryPack& pack) {
  std::vector<ShopListing> out;
  for (const auto& listing : pack.shop) {
    if (!state.owned_cards.contains(listing.card_id)) out.push_back(listing);
  }
  return out;
}

std::vector<const Case*> pending_cases(const GameState& state, const StoryPack& pack) {
  std::vector<const Case*> out;
  auto collect = [&](const std::vector<Case>& cases) {
    for (const auto& c : cases) {
      if (!is_solved(state, c)) out.push_back(&c);
    }
  };
  switch (state.current_level) {
    case Level::L0: collect(pack.l0_cases); break;
    case Level::L1:
      for (Cause cause : kAllCauses) collect(pack.l1_chapter(cause));
      break;
    case Level::L2: collect(pack.l2_cases); break;
    case Level::Completed: break;
  }
  return out;
}

const Case* current_case(const GameState& state, const StoryPack& pack) {
  const auto pending = pending_cases(state, pack);
  if (pending.empty()) return nullptr;
  for (auto it = state.action_log.rbegin(); it != state.action_log.rend(); ++it) {
    if (it->kind != ActionKind::AdvanceCase) continue;
    for (const Case* c : pending) {
      if (c->case_id == it->case_id) return c;
    }
    break;
  }
  return pending.front();
}

std::set<int> playable_cards(const GameState& state) {
  switch (state.current_level) {
    case Level::L1: return state.owned_cards;
    case Level::L2: return state.handbook.card_ids();
    default: return {};
  }
}

std::vector<std::string> check_invariants(const GameState& state, const StoryPack& pack) {
  std::vector<std::string> out = state.problems();
  if (state.pack_id != pack.pack_id) out.emplace_back("state belongs to another pack");
  if (state.current_level != progression(state)) {
    out.push_back("current_level " + std::string(to_string(state.current_level)) +
                  " disagrees with progression " + std::string(to_string(progression(state))));
  }

  auto check_solved = [&](const std::set<std::string>& solved, CaseLevel level) {
    for (const auto& id : solved) {
      const Case* c = pack.find_case(id);
      if (c == nullptr || c->level != level) {
        out.push_back("solved case " + id + " is not a " + std::string(to_string(level)) +
                      " case of the pack");
      }
    }
  };
  check_solved(state.solved_l0, CaseLevel::L0);
  check_solved(state.solved_l1, CaseLevel::L1);
  check_solved(state.solved_l2, CaseLevel::L2);

  std::set<std::string> merged_cases;
  for (const auto& merged : state.merged_cards) merged_cases.insert(merged.case_id);
  if (merged_cases != state.solved_l2 || state.merged_cards.size() != state.solved_l2.size()) {
    out.emplace_back("merged cards do not match solved Level-2 cases");
  }

  std::set<int> letter_cards;
  for (const auto& letter : state.letters_received) {
    const auto chapter = milestone_chapter(letter.milestone);
    if (!chapter || !state.handbook.is_chapter_complete(*chapter)) {
      out.push_back("letter for " + letter.milestone + " without a completed chapter");
    }
    letter_cards.insert(letter.granted_cards.begin(), letter.granted_cards.end());
  }

  int spent = 0;
  for (int id : state.owned_cards) {
    const bool starting =
        std::find(pack.starting_hand.begin(), pack.starting_hand.end(), id) != pack.starting_hand.end();
    const ShopListing* listing = pack.listing(id);
    if (listing != nullptr) spent += listing->cost_points;
    if (!starting && listing == nullptr && !letter_cards.contains(id)) {
      out.push_back("owned card " + std::to_string(id) + " has no acquisition source");
    }
  }
  for (int id : pack.starting_hand) {
    if (!state.owned_cards.contains(id)) {
      out.push_back("starting card " + std::to_string(id) + " is missing");
    }
  }
  for (int id : letter_cards) {
    if (!state.owned_cards.contains(id)) {
      out.push_back("letter card " + std::to_string(id) + " is missing");
    }
  }
  if (spent != state.points_spent) {
    out.push_back("points_spent (" + std::to_string(state.points_spent) +
                  ") differs from the cost of purchased cards (" + std::to_string(spent) + ")");
  }
  return out;
}

ApplyResult apply(const GameState& state, const StoryPack& pack, const Action& action,
                  const ActionContext& ctx) {
  return std::visit(
      [&](const auto& a) -> ApplyResult {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, L0Choice>) {
          auto t = adjudicate_level0(state, pack, a.case_id, a.cause, ctx);
          return {std::move(t.state), std::move(t.outcome)};
        } else if constexpr (std::is_same_v<T, PlayCard>) {
          auto t = adjudicate_level1(state, pack, a.case_id, a.card_id, ctx);
          return {std::move(t.state), std::move(t.outcome)};
        } else if constexpr (std::is_same_v<T, PlayPair>) {
          auto t = adjudicate_level2(state, pack, a.case_id, a.card_a, a.card_b, ctx);
          return {std::move(t.state), std::move(t.outcome)};
        } else if constexpr (std::is_same_v<T, BuyCard>) {
          return {buy_card(state, pack, a.card_id, ctx), std::nullopt};
        } else if constexpr (std::is_same_v<T, AdvanceCase>) {
          return {advance_case(state, pack, a.case_id, ctx), std::nullopt};
        } else {
          return {grant_letter(state, pack, a.chapter, ctx), std::nullopt};
        }
      },
      action);
}

Action action_from_record(const ActionRecord& record) {
  auto card = [&](std::size_t i) {
    if (record.cards.size() <= i) {
      throw StateError("REPLAY_MISMATCH", "action log entry " + std::to_string(record.seq) +
                                              " is missing card ids");
    }
    return record.cards[i];
  };
  auto cause = [&] {
    if (!record.cause) {
      throw StateError("REPLAY_MISMATCH",
                       "action log entry " + std::to_string(record.seq) + " is missing a cause");
    }
    return *record.cause;
  };
  switch (record.kind) {
    case ActionKind::L0Choice: return L0Choice{record.case_id, cause()};
    case ActionKind::PlayCard: return PlayCard{record.case_id, card(0)};
    case ActionKind::PlayPair: return PlayPair{record.case_id, card(0), card(1)};
    case ActionKind::BuyCard: return BuyCard{card(0)};
    case ActionKind::AdvanceCase: return AdvanceCase{record.case_id};
    case ActionKind::GrantLetter: return GrantLetter{cause()};
  }
  throw StateError("REPLAY_MISMATCH", "unknown action kind");
}

GameState replay(const StoryPack& pack, const std::string& session_id, std::uint64_t rng_seed,
                 const std::vector<ActionRecord>& log) {
  GameState state = new_game(pack, session_id, rng_seed);
  for (const auto& record : log) {
    RecordedNarrator narrator(record.generated);
    ActionContext ctx{record.timestamp_ms, &narrator};
    ApplyResult result = apply(state, pack, action_from_record(record), ctx);
    const std::optional<bool> win =
        result.outcome ? std::optional<bool>(result.outcome->win()) : std::nullopt;
    if (win != record.win) {
      throw StateError("REPLAY_MISMATCH", "action log entry " + std::to_string(record.seq) +
                                              " adjudicated differently on replay");
    }
    state = std::move(result.state);
  }
  return state;
}

std::uint64_t dialogue_seed(const GameState& state) {
  return mix_seed(state.rng_seed, state.action_log.size() + 1);
}

}  // namespace procrastimate::rules
