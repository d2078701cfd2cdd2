#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "procrastimate/pack/pack_io.hpp"
#include "procrastimate/rules/engine.hpp"
#include "procrastimate/util/bundled.hpp"

namespace procrastimate::testing {

inline nlohmann::json reference_pack_document() {
  return nlohmann::json::parse(bundled::reference_pack_json());
}

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("pm-test-" + std::to_string(rd()) + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Drives a state through Level 0 and Level 1 with cause-matching moves only,
// buying nothing. Written against the public engine API step by step so the
// tests do not depend on the bot implementation.
inline GameState solve_level0(GameState state, const StoryPack& pack) {
  for (const auto& c : pack.l0_cases) {
    state = rules::adjudicate_level0(state, pack, c.case_id, *c.major_cause).state;
  }
  return state;
}

inline int first_owned_of(const GameState& state, Cause cause) {
  for (int id : state.owned_cards) {
    if (id >= 1 && id <= 40 && (id - 1) / 10 == static_cast<int>(cause)) return id;
  }
  return 0;
}

inline GameState solve_level1(GameState state, const StoryPack& pack) {
  for (Cause cause : kAllCauses) {
    for (const auto& c : pack.l1_chapter(cause)) {
      state = rules::adjudicate_level1(state, pack, c.case_id, first_owned_of(state, cause)).state;
    }
  }
  return state;
}

// Walks the engine with a mix of sensible and arbitrary actions and keeps a
// snapshot every few accepted actions. Every snapshot is reachable by
// construction.
inline std::vector<GameState> random_reachable_states(const StoryPack& pack, std::uint64_t seed, int walks,
                                                      int snapshots_per_walk, rules::Narrator* narrator = nullptr) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return static_cast<int>(std::uniform_int_distribution<std::size_t>(lo, hi)(rng));
  };
  const auto all = pack.all_cases();
  std::vector<GameState> out;
  for (int walk = 0; walk < walks; ++walk) {
    GameState state = rules::new_game(pack, "walk-" + std::to_string(walk), rng());
    const int length = pick(0, 360);
    const int stride = std::max(1, length / std::max(1, snapshots_per_walk));
    int taken = 0;
    for (int step = 0; step < length || taken < snapshots_per_walk; ++step) {
      if (step % stride == 0 && taken < snapshots_per_walk) {
        out.push_back(state);
        ++taken;
      }
      const Case* target = rules::current_case(state, pack);
      const bool smart = target != nullptr && pick(0, 4) != 0;
      const Case* c = smart ? target : all[pick(0, all.size() - 1)];
      rules::Action action;
      if (pick(0, 9) == 0) {
        action = rules::BuyCard{pick(1, 40)};
      } else if (pick(0, 19) == 0) {
        action = rules::AdvanceCase{all[pick(0, all.size() - 1)]->case_id};
      } else if (c->level == CaseLevel::L0) {
        action = rules::L0Choice{c->case_id, smart && pick(0, 1) ? *c->major_cause : kAllCauses[pick(0, 3)]};
      } else if (c->level == CaseLevel::L1) {
        const int card = smart && pick(0, 2) != 0 ? first_owned_of(state, *c->major_cause) : pick(1, 40);
        action = rules::PlayCard{c->case_id, card};
      } else {
        int a = pick(1, 40), b = pick(1, 40);
        if (smart && pick(0, 2) != 0) {
          a = first_owned_of(state, c->cause_pair->first());
          b = first_owned_of(state, c->cause_pair->second());
        }
        action = rules::PlayPair{c->case_id, a, b};
      }
      try {
        state = rules::apply(state, pack, action, {1700000000000 + step, narrator}).state;
      } catch (const Error&) {
      }
    }
  }
  return out;
}

}  // namespace procrastimate::testing
