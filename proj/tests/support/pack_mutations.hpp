#pragma once

#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace procrastimate::testing {

// A broken variant of the reference pack and the diagnostic code it must raise.
struct PackMutation {
  std::string name;
  std::string expected_code;
  std::function<void(nlohmann::json&)> mutate;
};

inline std::vector<PackMutation> pack_mutations() {
  using nlohmann::json;
  return {
      {"task-value chapter with 5 cases", "CHAPTER_COUNT",
       [](json& d) { d["l1"]["TaskValue"].erase(d["l1"]["TaskValue"].begin()); }},
      {"level 0 with 7 cases", "L0_COUNT", [](json& d) { d["l0"].erase(d["l0"].begin()); }},
      {"level 2 with 9 cases", "L2_COUNT",
       [](json& d) {
         json extra = d["l2"][0];
         extra["case_id"] = "l2-extra";
         d["l2"].push_back(extra);
       }},
      {"level 2 cause pair repeats a cause", "DUPLICATE_CAUSE",
       [](json& d) { d["l2"][3]["cause_pair"] = {"TaskValue", "TaskValue"}; }},
      {"card 9 in starting hand and letters", "CARD_PARTITION",
       [](json& d) { d["starting_hand"][0] = 9; }},
      {"card 40 assigned nowhere", "CARD_PARTITION",
       [](json& d) { d["letters"][3]["cards"] = {39}; }},
      {"card 41 in the shop", "CARD_RANGE", [](json& d) { d["shop"][15]["card_id"] = 41; }},
      {"card 0 in the starting hand", "CARD_RANGE", [](json& d) { d["starting_hand"][0] = 0; }},
      {"starting hand without impulsiveness cards", "SOLVABILITY",
       [](json& d) {
         d["starting_hand"] = {1, 2, 3, 4, 11, 12, 13, 14, 5, 6, 15, 16, 31, 32, 33, 34};
         d["shop"] = json::array();
         for (int id : {7, 8, 17, 18, 21, 22, 23, 24, 25, 26, 27, 28, 35, 36, 37, 38}) {
           d["shop"].push_back({{"card_id", id}, {"cost", 1}});
         }
       }},
      {"duplicate case id", "DUPLICATE_CASE_ID",
       [](json& d) { d["l1"]["Impulsiveness"][2]["case_id"] = d["l0"][0]["case_id"]; }},
      {"zero-cost shop listing", "SHOP_COST", [](json& d) { d["shop"][0]["cost"] = 0; }},
      {"unsupported schema version", "UNSUPPORTED_VERSION", [](json& d) { d["schema_version"] = 2; }},
      {"level 2 case with a single cause", "SCHEMA", [](json& d) { d["l2"][0]["cause_pair"] = {"TaskValue"}; }},
  };
}

}  // namespace procrastimate::testing
