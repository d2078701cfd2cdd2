#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "procrastimate/pack/story_pack.hpp"

namespace procrastimate::service {

class PackRegistry {
 public:
  // Holds the bundled reference pack.
  static PackRegistry with_reference();

  void add(StoryPack pack);  // replaces a pack with the same id
  // Adds every *.json document with a pack_id in `dir`. Throws PackError on
  // the first invalid one.
  void load_dir(const std::filesystem::path& dir);

  const StoryPack* find(std::string_view pack_id) const;
  const StoryPack& get(std::string_view pack_id) const;  // NotFoundError
  std::vector<const StoryPack*> all() const;

 private:
  std::map<std::string, StoryPack, std::less<>> packs_;
};

}  // namespace procrastimate::service
