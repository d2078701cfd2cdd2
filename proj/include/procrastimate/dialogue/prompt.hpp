#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "procrastimate/errors.hpp"

namespace procrastimate::dialogue {

enum class Purpose : std::uint8_t { Feedback, Letter, MergedCard, DualVoice };

std::string_view to_string(Purpose purpose);

struct PromptTemplate {
  std::string template_id;
  Purpose purpose = Purpose::Feedback;
  std::string body;  // {name} placeholders; {{ and }} are literal braces
};

using Bindings = std::map<std::string, std::string, std::less<>>;

// UNBOUND_PLACEHOLDER names every missing binding; TEMPLATE_SYNTAX marks a
// stray or unterminated brace.
class RenderError : public Error {
 public:
  RenderError(std::string code, const std::string& message, std::vector<std::string> names = {})
      : Error(std::move(code), message), names_(std::move(names)) {}

  const std::vector<std::string>& placeholders() const noexcept { return names_; }

 private:
  std::vector<std::string> names_;
};

// Placeholder names in order of first appearance.
std::vector<std::string> placeholders(std::string_view body);

std::string render_prompt(const PromptTemplate& tpl, const Bindings& context);

// Purpose is inferred from the id prefix: feedback*, letter*, merged_card*, dual_voice*.
Purpose purpose_for_id(std::string_view template_id);

class TemplateSet {
 public:
  // feedback, letter, merged_card, dual_voice_motivational, dual_voice_procrastinating.
  static TemplateSet bundled();

  // Bundled set overlaid with every *.txt file in `dir`; the file stem is the id.
  static TemplateSet load_dir(const std::filesystem::path& dir);

  bool contains(std::string_view template_id) const;
  const PromptTemplate& get(std::string_view template_id) const;  // NotFoundError
  void put(PromptTemplate tpl);

 private:
  std::map<std::string, PromptTemplate, std::less<>> templates_;
};

}  // namespace procrastimate::dialogue
