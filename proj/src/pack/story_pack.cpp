#include "procrastimate/pack/story_pack.hpp"

namespace procrastimate {

const Case* StoryPack::find_case(const std::string& case_id) const {
  for (const Case* c : all_cases()) {
    if (c->case_id == case_id) return c;
  }
  return nullptr;
}

const LetterGrant* StoryPack::letter_for(Cause chapter) const {
  for (const auto& grant : letters) {
    if (grant.chapter == chapter) return &grant;
  }
  return nullptr;
}

const ShopListing* StoryPack::listing(int card_id) const {
  for (const auto& item : shop) {
    if (item.card_id == card_id) return &item;
  }
  return nullptr;
}

std::vector<const Case*> StoryPack::all_cases() const {
  std::vector<const Case*> out;
  for (const auto& c : l0_cases) out.push_back(&c);
  for (const auto& chapter : l1_cases) {
    for (const auto& c : chapter) out.push_back(&c);
  }
  for (const auto& c : l2_cases) out.push_back(&c);
  return out;
}

}  // namespace procrastimate
