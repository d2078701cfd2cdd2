#include "doctest.h"

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "procrastimate/domain/card.hpp"
#include "procrastimate/pack/pack_io.hpp"
#include "procrastimate/rules/engine.hpp"

using namespace procrastimate;
using namespace procrastimate::rules;
using procrastimate::testing::solve_level0;
using procrastimate::testing::solve_level1;

namespace {

const StoryPack& pack() { return reference_pack(); }

GameState fresh() { return new_game(pack(), "s-1", 7); }

Case l1_case(Cause cause) {
  Case c;
  c.case_id = "m";
  c.level = CaseLevel::L1;
  c.major_cause = cause;
  return c;
}

Case l2_case(Cause a, Cause b) {
  Case c;
  c.case_id = "m2";
  c.level = CaseLevel::L2;
  c.cause_pair = CausePair(a, b);
  return c;
}

const Case& l2_with_pair(Cause a, Cause b) {
  for (const auto& c : pack().l2_cases) {
    if (*c.cause_pair == CausePair(a, b)) return c;
  }
  throw std::logic_error("reference pack lacks the pair");
}

}  // namespace

TEST_CASE("new game starts at L0 with the 16-card starting hand") {
  const GameState state = fresh();
  CHECK(state.current_level == Level::L0);
  CHECK(progression(state) == Level::L0);
  CHECK(state.owned_cards.size() == 16);
  CHECK(state.points_earned == 0);
  CHECK(check_invariants(state, pack()).empty());
}

TEST_CASE("level 0 adjudication") {
  GameState state = fresh();
  const Case& impulsive = pack().l0_cases[2];
  REQUIRE(impulsive.major_cause == Cause::Impulsiveness);

  auto lose = adjudicate_level0(state, pack(), impulsive.case_id, Cause::TaskValue);
  CHECK(lose.outcome.result == Result::Lose);
  CHECK(lose.outcome.feedback_tone == Tone::Critical);
  CHECK(lose.state.solved_l0.empty());
  CHECK(lose.state.action_log.size() == 1);

  auto win = adjudicate_level0(lose.state, pack(), impulsive.case_id, Cause::Impulsiveness);
  CHECK(win.outcome.result == Result::Win);
  CHECK(win.outcome.feedback_tone == Tone::Positive);
  CHECK(win.state.solved_l0.contains(impulsive.case_id));
  CHECK(win.state.points_earned == 0);
  CHECK(win.state.owned_cards == state.owned_cards);

  CHECK_THROWS_WITH_AS(adjudicate_level0(win.state, pack(), impulsive.case_id, Cause::Impulsiveness),
                       doctest::Contains("already solved"), StateError);
  const Case& l1 = pack().l1_chapter(Cause::SelfEfficacy).front();
  CHECK_THROWS_AS(adjudicate_level0(state, pack(), l1.case_id, Cause::SelfEfficacy), StateError);
}

TEST_CASE("eight level 0 wins unlock level 1") {
  GameState state = fresh();
  for (std::size_t i = 0; i < pack().l0_cases.size(); ++i) {
    CHECK(state.current_level == Level::L0);
    const auto& c = pack().l0_cases[i];
    auto t = adjudicate_level0(state, pack(), c.case_id, *c.major_cause);
    if (i + 1 == pack().l0_cases.size()) {
      CHECK(t.outcome.delta.level_advanced_to == Level::L1);
    }
    state = t.state;
  }
  CHECK(state.current_level == Level::L1);
}

TEST_CASE("level 1 adjudication") {
  GameState state = solve_level0(fresh(), pack());
  const Case& se = pack().l1_chapter(Cause::SelfEfficacy).front();

  SUBCASE("card 7 wins a self-efficacy case and lands in its chapter") {
    state.owned_cards.insert(7);  // as if bought
    auto t = adjudicate_level1(state, pack(), se.case_id, 7);
    CHECK(t.outcome.result == Result::Win);
    CHECK(t.outcome.feedback_tone == Tone::Positive);
    REQUIRE(t.state.handbook.chapter(Cause::SelfEfficacy).size() == 1);
    CHECK(t.state.handbook.chapter(Cause::SelfEfficacy)[0] == HandbookEntry{se.case_id, 7});
    CHECK(t.state.points_earned == 1);
    CHECK(t.outcome.delta.points_awarded == 1);
  }

  SUBCASE("card 32 loses with critical tone and leaves state unchanged except the log") {
    auto t = adjudicate_level1(state, pack(), se.case_id, 32);
    CHECK(t.outcome.result == Result::Lose);
    CHECK(t.outcome.feedback_tone == Tone::Critical);
    GameState expected = state;
    expected.action_log = t.state.action_log;
    CHECK(t.state == expected);
    CHECK(t.state.action_log.size() == state.action_log.size() + 1);
    // unlimited retries
    auto retry = adjudicate_level1(t.state, pack(), se.case_id, 1);
    CHECK(retry.outcome.win());
  }

  SUBCASE("errors") {
    CHECK_THROWS_WITH_AS(adjudicate_level1(state, pack(), se.case_id, 7), doctest::Contains("not in the hand"),
                         StateError);
    CHECK_THROWS_AS(adjudicate_level1(state, pack(), se.case_id, 41), DomainError);
    CHECK_THROWS_AS(adjudicate_level1(state, pack(), "nope", 1), StateError);
    auto won = adjudicate_level1(state, pack(), se.case_id, 1).state;
    try {
      adjudicate_level1(won, pack(), se.case_id, 2);
      FAIL("expected StateError");
    } catch (const StateError& e) {
      CHECK(e.code() == "ALREADY_SOLVED");
    }
    try {
      adjudicate_level1(fresh(), pack(), se.case_id, 1);
      FAIL("expected StateError");
    } catch (const StateError& e) {
      CHECK(e.code() == "WRONG_LEVEL");
    }
  }
}

TEST_CASE("level 1 win predicate matches the id-range oracle on all 160 combinations") {
  int wins_per_label[4] = {0, 0, 0, 0};
  for (Cause label : kAllCauses) {
    const Case c = l1_case(label);
    for (int card = 1; card <= 40; ++card) {
      const bool win = judge_level1(c, card) == Result::Win;
      CHECK(win == testing::oracle_level1_win(card, label));
      wins_per_label[index_of(label)] += win;
    }
  }
  for (int count : wins_per_label) CHECK(count == 10);
}

TEST_CASE("level 2 win predicate matches set equality on all 4680 combinations") {
  std::size_t checks = 0;
  for (std::size_t i = 0; i < kAllCauses.size(); ++i) {
    for (std::size_t j = i + 1; j < kAllCauses.size(); ++j) {
      const Case c = l2_case(kAllCauses[i], kAllCauses[j]);
      for (int a = 1; a <= 40; ++a) {
        for (int b = a + 1; b <= 40; ++b) {
          const bool expected = testing::oracle_level2_win(a, b, kAllCauses[i], kAllCauses[j]);
          CHECK((judge_level2(c, a, b) == Result::Win) == expected);
          CHECK((judge_level2(c, b, a) == Result::Win) == expected);
          ++checks;
        }
      }
    }
  }
  CHECK(checks == 4680);
}

TEST_CASE("level 2 adjudication") {
  GameState state = solve_level1(solve_level0(fresh(), pack()), pack());
  REQUIRE(state.current_level == Level::L2);
  // the bot above plays the lowest owned card per cause, so 1 and 11 are in
  // the handbook; add entries with 3 and 15 through a second state for the example.
  const Case& dual = l2_with_pair(Cause::SelfEfficacy, Cause::TaskValue);

  auto win = adjudicate_level2(state, pack(), dual.case_id, 1, 11);
  CHECK(win.outcome.result == Result::Win);
  REQUIRE(win.outcome.delta.merged.has_value());
  CHECK(win.outcome.delta.merged->source_low == 1);
  CHECK(win.outcome.delta.merged->source_high == 11);
  CHECK(win.state.merged_cards.size() == 1);
  CHECK(win.state.solved_l2.contains(dual.case_id));

  auto lose = adjudicate_level2(state, pack(), dual.case_id, 1, 21);
  CHECK(lose.outcome.result == Result::Lose);
  CHECK_FALSE(lose.outcome.delta.merged.has_value());
  CHECK(lose.state.merged_cards.empty());

  try {
    adjudicate_level2(state, pack(), dual.case_id, 1, 1);
    FAIL("expected StateError");
  } catch (const StateError& e) {
    CHECK(e.code() == "IDENTICAL_CARDS");
  }
  try {
    adjudicate_level2(state, pack(), dual.case_id, 1, 15);  // 15 owned? not in handbook
    FAIL("expected StateError");
  } catch (const StateError& e) {
    CHECK(e.code() == "CARD_NOT_IN_HANDBOOK");
  }
}

TEST_CASE("level 2 example with cards 3 and 15") {
  // Build a Level-1 run that files card 3 and card 15 into the handbook.
  GameState state = solve_level0(fresh(), pack());
  for (Cause cause : kAllCauses) {
    for (const auto& c : pack().l1_chapter(cause)) {
      int card = procrastimate::testing::first_owned_of(state, cause);
      if (cause == Cause::SelfEfficacy) card = 3;
      if (cause == Cause::TaskValue && state.points_available() > 0 && !state.owned_cards.contains(15)) {
        state = buy_card(state, pack(), 15);
      }
      if (cause == Cause::TaskValue && state.owned_cards.contains(15)) card = 15;
      state = adjudicate_level1(state, pack(), c.case_id, card).state;
    }
  }
  REQUIRE(state.current_level == Level::L2);
  REQUIRE(state.handbook.contains_card(3));
  REQUIRE(state.handbook.contains_card(15));
  const Case& dual = l2_with_pair(Cause::SelfEfficacy, Cause::TaskValue);
  CHECK(adjudicate_level2(state, pack(), dual.case_id, 3, 15).outcome.win());
  CHECK(adjudicate_level2(state, pack(), dual.case_id, 15, 3).outcome.win());
  CHECK_FALSE(adjudicate_level2(state, pack(), dual.case_id, 3, 21).outcome.win());
}

TEST_CASE("buy_card economy") {
  GameState state = solve_level0(fresh(), pack());
  CHECK_THROWS_WITH_AS(buy_card(state, pack(), 25), doctest::Contains("0 available"), EconomyError);

  const Case& c = pack().l1_chapter(Cause::Impulsiveness).front();
  state = adjudicate_level1(state, pack(), c.case_id, 21).state;
  REQUIRE(state.points_available() == 1);
  GameState bought = buy_card(state, pack(), 25);
  CHECK(bought.owned_cards.contains(25));
  CHECK(bought.points_available() == 0);
  CHECK(bought.points_spent == 1);
  const auto listings = shop_listings(bought, pack());
  CHECK(listings.size() == 15);
  CHECK(std::none_of(listings.begin(), listings.end(), [](const ShopListing& l) { return l.card_id == 25; }));

  auto code_of = [&](const GameState& s, int card) {
    try {
      buy_card(s, pack(), card);
    } catch (const EconomyError& e) {
      return e.code();
    }
    return std::string("none");
  };
  CHECK(code_of(bought, 25) == "ALREADY_OWNED");
  CHECK(code_of(state, 1) == "ALREADY_OWNED");
  CHECK(code_of(state, 9) == "NOT_LISTED");  // letter card
  CHECK(code_of(bought, 26) == "INSUFFICIENT_POINTS");
}

TEST_CASE("completing a chapter mails a letter with two scripted cards") {
  GameState state = solve_level0(fresh(), pack());
  const auto& chapter = pack().l1_chapter(Cause::SelfEfficacy);
  for (std::size_t i = 0; i < chapter.size(); ++i) {
    auto t = adjudicate_level1(state, pack(), chapter[i].case_id, 1 + static_cast<int>(i % 4));
    if (i + 1 < chapter.size()) {
      CHECK(t.outcome.delta.letters.empty());
    } else {
      CHECK(t.outcome.delta.letters == std::vector<std::string>{"chapter:SelfEfficacy"});
      CHECK(t.outcome.delta.cards_gained == std::vector<int>{9, 10});
    }
    state = t.state;
  }
  REQUIRE(state.letters_received.size() == 1);
  CHECK(state.letters_received[0].granted_cards == std::vector<int>{9, 10});
  CHECK(state.letters_received[0].sender_npc_id == chapter.back().npc.npc_id);
  CHECK(state.owned_cards.contains(9));
  CHECK(state.owned_cards.contains(10));

  try {
    grant_letter(state, pack(), Cause::SelfEfficacy);
    FAIL("expected StateError");
  } catch (const StateError& e) {
    CHECK(e.code() == "DUPLICATE_MILESTONE");
  }
  try {
    grant_letter(state, pack(), Cause::TaskValue);
    FAIL("expected StateError");
  } catch (const StateError& e) {
    CHECK(e.code() == "MILESTONE_NOT_REACHED");
  }
}

TEST_CASE("grant_letter on a pack without automatic delivery") {
  StoryPack no_letters = pack();
  const auto letters = no_letters.letters;
  no_letters.letters.clear();
  GameState state = solve_level1(solve_level0(new_game(no_letters, "s", 1), no_letters), no_letters);
  CHECK(state.letters_received.empty());
  CHECK_THROWS_AS(grant_letter(state, no_letters, Cause::TaskValue), StateError);

  StoryPack with_letters = no_letters;
  with_letters.letters = letters;
  GameState granted = grant_letter(state, with_letters, Cause::TaskValue);
  CHECK(granted.owned_cards.contains(19));
  CHECK(granted.owned_cards.contains(20));
  CHECK(granted.action_log.back().kind == ActionKind::GrantLetter);
  CHECK_THROWS_AS(grant_letter(granted, with_letters, Cause::TaskValue), StateError);
}

TEST_CASE("all four chapters yield eight letter cards") {
  GameState state = solve_level1(solve_level0(fresh(), pack()), pack());
  CHECK(state.letters_received.size() == 4);
  std::size_t granted = 0;
  for (const auto& letter : state.letters_received) granted += letter.granted_cards.size();
  CHECK(granted == 8);
  CHECK(state.owned_cards.size() == 24);
  CHECK(state.points_earned == 24);
  CHECK(state.handbook.total_entries() == 24);
}

TEST_CASE("progression gates") {
  GameState state = fresh();
  CHECK(progression(state) == Level::L0);
  state = solve_level1(solve_level0(state, pack()), pack());
  CHECK(progression(state) == Level::L2);
  for (const auto& c : pack().l2_cases) {
    const int a = procrastimate::testing::first_owned_of(state, c.cause_pair->first());
    const int b = procrastimate::testing::first_owned_of(state, c.cause_pair->second());
    state = adjudicate_level2(state, pack(), c.case_id, a, b).state;
  }
  CHECK(state.solved_l2.size() == 8);
  CHECK(progression(state) == Level::Completed);
  CHECK(state.current_level == Level::Completed);
  CHECK(check_invariants(state, pack()).empty());
}

TEST_CASE("card reuse within a chapter is allowed") {
  GameState state = solve_level0(fresh(), pack());
  for (const auto& c : pack().l1_chapter(Cause::DistantDelay)) {
    state = adjudicate_level1(state, pack(), c.case_id, 31).state;
  }
  CHECK(state.handbook.is_chapter_complete(Cause::DistantDelay));
  CHECK(state.handbook.card_ids() == std::set<int>{31});
}

TEST_CASE("advance_case focuses a pending case") {
  GameState state = fresh();
  CHECK(current_case(state, pack())->case_id == pack().l0_cases[0].case_id);
  state = advance_case(state, pack(), pack().l0_cases[3].case_id);
  CHECK(current_case(state, pack())->case_id == pack().l0_cases[3].case_id);
  state = adjudicate_level0(state, pack(), pack().l0_cases[3].case_id, *pack().l0_cases[3].major_cause).state;
  CHECK(current_case(state, pack())->case_id == pack().l0_cases[0].case_id);
  CHECK_THROWS_AS(advance_case(state, pack(), pack().l0_cases[3].case_id), StateError);
  CHECK_THROWS_AS(advance_case(state, pack(), pack().l2_cases[0].case_id), StateError);
  CHECK(pending_cases(state, pack()).size() == 7);
}

// Random action sequences, valid and invalid, through the uniform apply().
TEST_CASE("property: random action sequences keep invariants, monotonicity and replay") {
  std::mt19937_64 rng(20240601);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const auto all = pack().all_cases();

  for (int run = 0; run < 60; ++run) {
    GameState state = new_game(pack(), "prop-" + std::to_string(run), rng());
    // Bias toward progress so that later levels are reached in some runs.
    for (int step = 0; step < 400; ++step) {
      const GameState before = state;
      Action action;
      const Case* target = current_case(state, pack());
      const bool smart = pick(0, 3) != 0 && target != nullptr;
      switch (pick(0, 6)) {
        case 0: action = L0Choice{(smart ? target : all[pick(0, all.size() - 1)])->case_id, kAllCauses[pick(0, 3)]}; break;
        case 1:
        case 2: {
          const Case* c = smart ? target : all[pick(0, all.size() - 1)];
          int card = pick(0, 41);
          if (smart && c->major_cause && pick(0, 1)) {
            card = procrastimate::testing::first_owned_of(state, *c->major_cause);
          }
          action = PlayCard{c->case_id, card};
          break;
        }
        case 3: {
          const Case* c = smart ? target : all[pick(0, all.size() - 1)];
          int a = pick(1, 40), b = pick(1, 40);
          if (smart && c->cause_pair && pick(0, 1)) {
            a = procrastimate::testing::first_owned_of(state, c->cause_pair->first());
            b = procrastimate::testing::first_owned_of(state, c->cause_pair->second());
          }
          action = PlayPair{c->case_id, a, b};
          break;
        }
        case 4: action = BuyCard{pick(1, 40)}; break;
        case 5: action = AdvanceCase{all[pick(0, all.size() - 1)]->case_id}; break;
        default: action = GrantLetter{kAllCauses[pick(0, 3)]}; break;
      }
      if (smart && state.current_level == Level::L0 && pick(0, 1)) {
        action = L0Choice{target->case_id, *target->major_cause};
      }
      try {
        state = apply(state, pack(), action, {step}).state;
      } catch (const Error&) {
        CHECK(state == before);  // rejected actions leave no trace
        continue;
      }
      REQUIRE(check_invariants(state, pack()).empty());
      CHECK(std::includes(state.owned_cards.begin(), state.owned_cards.end(), before.owned_cards.begin(),
                          before.owned_cards.end()));
      CHECK(std::includes(state.solved_l0.begin(), state.solved_l0.end(), before.solved_l0.begin(),
                          before.solved_l0.end()));
      CHECK(std::includes(state.solved_l1.begin(), state.solved_l1.end(), before.solved_l1.begin(),
                          before.solved_l1.end()));
      CHECK(std::includes(state.solved_l2.begin(), state.solved_l2.end(), before.solved_l2.begin(),
                          before.solved_l2.end()));
      CHECK(state.points_earned >= before.points_earned);
      CHECK(state.action_log.size() == before.action_log.size() + 1);
    }
    CHECK(replay(pack(), state.session_id, state.rng_seed, state.action_log) == state);
  }
}

TEST_CASE("replay detects a tampered adjudication record") {
  GameState state = fresh();
  state = adjudicate_level0(state, pack(), pack().l0_cases[0].case_id, Cause::DistantDelay).state;
  auto log = state.action_log;
  log[0].win = true;
  CHECK_THROWS_AS(replay(pack(), state.session_id, state.rng_seed, log), StateError);
}

TEST_CASE("determinism: identical inputs give identical successors") {
  GameState a = solve_level0(fresh(), pack());
  GameState b = solve_level0(fresh(), pack());
  CHECK(a == b);
  const auto& c = pack().l1_chapter(Cause::TaskValue)[0];
  CHECK(adjudicate_level1(a, pack(), c.case_id, 12, {99}).state ==
        adjudicate_level1(b, pack(), c.case_id, 12, {99}).state);
}
