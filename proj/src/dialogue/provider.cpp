#include "procrastimate/dialogue/provider.hpp"

#include <array>
#include <cctype>
#include <cstdlib>

#include "procrastimate/util/rng.hpp"

namespace procrastimate::dialogue {

namespace {

struct Variants {
  std::string_view id;
  std::vector<std::string_view> bodies;
};

// Stub phrasings. Feedback bodies always name the played strategy and the
// case causes; letters name every granted title.
const std::vector<Variants>& stub_variants() {
  static const std::vector<Variants> table = {
      {"feedback/Lose",
       {"{npc_name} frowns. \"{played} might help someone else, but it works on {played_causes}. What "
        "really holds me back is {case_causes}.\"",
        "\"I gave {played} a try,\" says {npc_name}, \"but it does nothing about my {case_causes}. It "
        "only touches {played_causes}.\"",
        "{npc_name} shakes their head. \"{played} misses the point. My problem is {case_causes}, not "
        "{played_causes}.\""}},
      {"feedback/Win",
       {"{npc_name} brightens. \"{played} is exactly what I needed. It goes straight at my "
        "{case_causes}.\"",
        "\"Thank you,\" says {npc_name}. \"{played} finally gives me a way to deal with {case_causes}.\"",
        "{npc_name} nods slowly. \"{played}. Yes, that answers my {case_causes}. I can start today.\""}},
      {"letter",
       {"Dear counselor,\nThanks to you the chapter \"{chapter_title}\" is finished. I am enclosing "
        "these strategy cards as a small gift: {granted_titles}.\nWith gratitude,\n{npc_name}",
        "Dear counselor,\nYou helped all of us with \"{chapter_title}\". Please accept {granted_titles}. "
        "I hope they help the next student too.\n{npc_name}"}},
      {"merged_card",
       {"TITLE: {card_a_title} + {card_b_title}\nTEXT: Pair \"{card_a_title}\" with \"{card_b_title}\" "
        "so each step also tackles {case_causes}. Use the first to get moving and the second to keep "
        "going.",
        "TITLE: {card_a_title} with {card_b_title}\nTEXT: Combine \"{card_a_title}\" and "
        "\"{card_b_title}\" into one routine aimed at {case_causes}. Repeat it until the task is done."}},
      {"dual_voice_motivational",
       {"Motivational mind: \"{card_title}\" is a real step. Motivation is at {motivation}%, keep going.",
        "Motivational mind: You chose \"{card_title}\" and gained {delta} points. Start now while it "
        "feels possible."}},
      {"dual_voice_procrastinating",
       {"Procrastinating mind: \"{card_title}\" sounds tiring. Maybe later, it is only {motivation}% "
        "anyway.",
        "Procrastinating mind: Blaming {declared_cause} is easy. \"{card_title}\" can wait until "
        "tomorrow."}},
  };
  return table;
}

std::uint64_t fnv1a(std::string_view text, std::uint64_t hash = 0xcbf29ce484222325ULL) {
  for (const unsigned char ch : text) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string variant_key(const ProviderRequest& request) {
  switch (request.purpose) {
    case Purpose::Feedback: {
      const auto it = request.context.find("result");
      const bool win = it != request.context.end() && it->second == "Win";
      return win ? "feedback/Win" : "feedback/Lose";
    }
    case Purpose::Letter: return "letter";
    case Purpose::MergedCard: return "merged_card";
    case Purpose::DualVoice:
      return request.template_id.find("procrastinating") != std::string::npos ? "dual_voice_procrastinating"
                                                                               : "dual_voice_motivational";
  }
  return "feedback/Lose";
}

std::string env_or_empty(const char* name) {
  const char* value = std::getenv(name);
  return value == nullptr ? std::string() : std::string(value);
}

}  // namespace

std::string StubProvider::complete(const ProviderRequest& request) {
  const std::string key = variant_key(request);
  const Variants* variants = nullptr;
  for (const auto& entry : stub_variants()) {
    if (entry.id == key) variants = &entry;
  }
  std::uint64_t hash = fnv1a(request.template_id);
  for (const auto& [name, value] : request.context) {
    hash = fnv1a(value, fnv1a(name, hash) ^ 0x1f);
  }
  Rng rng(mix_seed(request.seed, hash));
  const auto body = variants->bodies[rng.below(variants->bodies.size())];
  return render_prompt({key, request.purpose, std::string(body)}, request.context);
}

std::optional<RemoteConfig> remote_config_from_env() {
  RemoteConfig config;
  config.url = env_or_empty("PROCRASTIMATE_LLM_URL");
  if (config.url.empty()) return std::nullopt;
  config.api_key = env_or_empty("PROCRASTIMATE_LLM_KEY");
  config.model = env_or_empty("PROCRASTIMATE_LLM_MODEL");
  if (config.model.empty()) config.model = "gpt-4o-mini";
  return config;
}

std::shared_ptr<Provider> make_provider(std::string_view name, LogSink log) {
  if (name == "stub") return std::make_shared<StubProvider>();
  if (name == "remote") {
    auto config = remote_config_from_env();
    if (!config) throw ProviderError("PROVIDER_CONFIG", "PROCRASTIMATE_LLM_URL is not set");
    return std::make_shared<RemoteProvider>(std::move(*config), std::move(log));
  }
  throw ProviderError("PROVIDER_CONFIG", "unknown provider '" + std::string(name) + "' (stub, remote)");
}

std::string strip_markup(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool line_start = true;
  bool in_tag = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (in_tag) {
      if (ch == '>') in_tag = false;
      continue;
    }
    if (ch == '<' && i + 1 < text.size() && (std::isalpha(static_cast<unsigned char>(text[i + 1])) ||
                                              text[i + 1] == '/' || text[i + 1] == '!')) {
      in_tag = true;
      continue;
    }
    if (ch == '`' || ch == '*') continue;
    if (line_start && (ch == '#' || ch == '>')) continue;
    if (ch == '\r') continue;
    if (ch == '\n') {
      while (!out.empty() && out.back() == ' ') out.pop_back();
      if (!out.empty() && out.back() != '\n') out += '\n';
      line_start = true;
      continue;
    }
    const bool blank = ch == ' ' || ch == '\t';
    if (blank && (line_start || (!out.empty() && out.back() == ' '))) continue;
    out += blank ? ' ' : ch;
    line_start = false;
  }
  while (!out.empty() && (out.back() == ' ' || out.back() == '\n')) out.pop_back();
  return out;
}

std::string cap_length(std::string text, std::size_t max_chars) {
  if (text.size() <= max_chars) return text;
  std::size_t cut = text.rfind(' ', max_chars);
  if (cut == std::string::npos || cut == 0) {
    cut = max_chars;
    while (cut > 0 && (static_cast<unsigned char>(text[cut]) & 0xC0) == 0x80) --cut;
  }
  text.resize(cut);
  return text + "...";
}

std::string redact(std::string text, std::string_view secret) {
  if (secret.empty()) return text;
  for (std::size_t pos = text.find(secret); pos != std::string::npos; pos = text.find(secret, pos + 3)) {
    text.replace(pos, secret.size(), "***");
  }
  return text;
}

}  // namespace procrastimate::dialogue
