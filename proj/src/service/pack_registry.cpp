#include "procrastimate/service/pack_registry.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "procrastimate/errors.hpp"
#include "procrastimate/pack/pack_io.hpp"

namespace procrastimate::service {

PackRegistry PackRegistry::with_reference() {
  PackRegistry registry;
  registry.add(reference_pack());
  return registry;
}

void PackRegistry::add(StoryPack pack) {
  std::string id = pack.pack_id;
  packs_.insert_or_assign(std::move(id), std::move(pack));
}

void PackRegistry::load_dir(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream text;
    text << in.rdbuf();
    // Case pools and personal-story files may sit next to packs.
    const auto doc = nlohmann::json::parse(text.str(), nullptr, false);
    if (!doc.is_discarded() && !(doc.is_object() && doc.contains("pack_id"))) continue;
    add(parse_pack(text.str()));
  }
}

const StoryPack* PackRegistry::find(std::string_view pack_id) const {
  const auto it = packs_.find(pack_id);
  return it == packs_.end() ? nullptr : &it->second;
}

const StoryPack& PackRegistry::get(std::string_view pack_id) const {
  const StoryPack* pack = find(pack_id);
  if (pack == nullptr) throw NotFoundError("unknown pack '" + std::string(pack_id) + "'");
  return *pack;
}

std::vector<const StoryPack*> PackRegistry::all() const {
  std::vector<const StoryPack*> out;
  for (const auto& [id, pack] : packs_) out.push_back(&pack);
  return out;
}

}  // namespace procrastimate::service
