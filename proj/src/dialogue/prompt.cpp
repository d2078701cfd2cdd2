#include "procrastimate/dialogue/prompt.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "procrastimate/util/bundled.hpp"

namespace procrastimate::dialogue {

namespace {

bool is_name_char(char ch) {
  return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') || ch == '_';
}

// Walks the body once; calls on_text for literal runs and on_name for placeholders.
template <typename Text, typename Name>
void scan(std::string_view body, Text on_text, Name on_name) {
  std::size_t i = 0;
  while (i < body.size()) {
    const char ch = body[i];
    if (ch == '{' && i + 1 < body.size() && body[i + 1] == '{') {
      on_text(std::string_view("{"));
      i += 2;
    } else if (ch == '}' && i + 1 < body.size() && body[i + 1] == '}') {
      on_text(std::string_view("}"));
      i += 2;
    } else if (ch == '{') {
      std::size_t end = i + 1;
      while (end < body.size() && is_name_char(body[end])) ++end;
      if (end == i + 1 || end >= body.size() || body[end] != '}') {
        throw RenderError("TEMPLATE_SYNTAX", "unterminated placeholder at offset " + std::to_string(i));
      }
      on_name(body.substr(i + 1, end - i - 1));
      i = end + 1;
    } else if (ch == '}') {
      throw RenderError("TEMPLATE_SYNTAX", "stray '}' at offset " + std::to_string(i));
    } else {
      const std::size_t next = body.find_first_of("{}", i);
      const std::size_t stop = next == std::string_view::npos ? body.size() : next;
      on_text(body.substr(i, stop - i));
      i = stop;
    }
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("TEMPLATE_IO", "cannot read template " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

constexpr std::array<std::string_view, 5> kBundledIds = {
    "feedback", "letter", "merged_card", "dual_voice_motivational", "dual_voice_procrastinating"};

}  // namespace

std::string_view to_string(Purpose purpose) {
  switch (purpose) {
    case Purpose::Feedback: return "feedback";
    case Purpose::Letter: return "letter";
    case Purpose::MergedCard: return "merged_card";
    case Purpose::DualVoice: return "dual_voice";
  }
  return "feedback";
}

std::vector<std::string> placeholders(std::string_view body) {
  std::vector<std::string> names;
  scan(
      body, [](std::string_view) {},
      [&](std::string_view name) {
        if (std::find(names.begin(), names.end(), name) == names.end()) names.emplace_back(name);
      });
  return names;
}

std::string render_prompt(const PromptTemplate& tpl, const Bindings& context) {
  std::vector<std::string> missing;
  for (const auto& name : placeholders(tpl.body)) {
    if (context.find(name) == context.end()) missing.push_back(name);
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& name : missing) list += (list.empty() ? "" : ", ") + name;
    throw RenderError("UNBOUND_PLACEHOLDER",
                      "template " + tpl.template_id + " has unbound placeholder(s): " + list, missing);
  }
  std::string out;
  out.reserve(tpl.body.size() * 2);
  scan(
      tpl.body, [&](std::string_view text) { out += text; },
      [&](std::string_view name) { out += context.find(name)->second; });
  return out;
}

Purpose purpose_for_id(std::string_view template_id) {
  if (template_id.rfind("letter", 0) == 0) return Purpose::Letter;
  if (template_id.rfind("merged_card", 0) == 0) return Purpose::MergedCard;
  if (template_id.rfind("dual_voice", 0) == 0) return Purpose::DualVoice;
  return Purpose::Feedback;
}

TemplateSet TemplateSet::bundled() {
  TemplateSet set;
  for (const auto id : kBundledIds) {
    set.put({std::string(id), purpose_for_id(id), std::string(*bundled::template_text(id))});
  }
  return set;
}

TemplateSet TemplateSet::load_dir(const std::filesystem::path& dir) {
  TemplateSet set = bundled();
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw Error("TEMPLATE_IO", "template directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    const std::string id = path.stem().string();
    PromptTemplate tpl{id, purpose_for_id(id), read_file(path)};
    placeholders(tpl.body);  // reject malformed files at load time
    set.put(std::move(tpl));
  }
  return set;
}

bool TemplateSet::contains(std::string_view template_id) const {
  return templates_.find(template_id) != templates_.end();
}

const PromptTemplate& TemplateSet::get(std::string_view template_id) const {
  const auto it = templates_.find(template_id);
  if (it == templates_.end()) throw NotFoundError("no prompt template " + std::string(template_id));
  return it->second;
}

void TemplateSet::put(PromptTemplate tpl) {
  std::string id = tpl.template_id;
  templates_.insert_or_assign(std::move(id), std::move(tpl));
}

}  // namespace procrastimate::dialogue
