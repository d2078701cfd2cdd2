#include "procrastimate/service/api_router.hpp"

#include <charconv>
#include <vector>

#include "procrastimate/errors.hpp"
#include "procrastimate/persistence/save_file.hpp"

namespace procrastimate::service {

using nlohmann::json;

namespace {

std::vector<std::string_view> split_path(std::string_view target) {
  const auto query = target.find('?');
  if (query != std::string_view::npos) target = target.substr(0, query);
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (start < target.size()) {
    const auto slash = target.find('/', start);
    const auto end = slash == std::string_view::npos ? target.size() : slash;
    if (end > start) parts.push_back(target.substr(start, end - start));
    start = end + 1;
  }
  return parts;
}

json parse_body(std::string_view body) {
  if (body.empty()) return json::object();
  json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded()) throw DomainError("BAD_JSON", "request body is not valid JSON");
  return doc;
}

std::optional<std::uint64_t> seed_field(const json& doc) {
  const auto it = doc.find("seed");
  if (it == doc.end() || it->is_null()) return std::nullopt;
  if (it->is_number_unsigned()) return it->get<std::uint64_t>();
  if (it->is_string()) {
    const std::string text = it->get<std::string>();
    std::uint64_t value = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec == std::errc() && end == text.data() + text.size()) return value;
  }
  throw DomainError("BAD_REQUEST", "'seed' must be a non-negative integer or a decimal string");
}

ApiResponse method_not_allowed() { return {405, error_body("METHOD_NOT_ALLOWED", "method not allowed")}; }

}  // namespace

json error_body(std::string_view code, std::string_view message) {
  return {{"error", {{"code", code}, {"message", message}}}};
}

std::optional<std::string> ApiRouter::events_session(std::string_view target) {
  const auto parts = split_path(target);
  if (parts.size() == 4 && parts[0] == "api" && parts[1] == "sessions" && parts[3] == "events") {
    return std::string(parts[2]);
  }
  return std::nullopt;
}

ApiResponse ApiRouter::handle(std::string_view method, std::string_view target, std::string_view body) {
  const auto parts = split_path(target);
  try {
    if (parts.size() < 2 || parts[0] != "api") return {404, error_body("NOT_FOUND", "no such endpoint")};

    if (parts[1] == "packs" && parts.size() == 2) {
      if (method != "GET") return method_not_allowed();
      json out = json::array();
      for (const StoryPack* pack : service_.packs().all()) out.push_back(pack_summary(*pack));
      return {200, out};
    }
    if (parts[1] == "deck" && parts.size() == 2) {
      if (method != "GET") return method_not_allowed();
      return {200, deck_json(service_.dialogue().deck())};
    }
    if (parts[1] == "sessions") {
      if (parts.size() == 2) {
        if (method != "POST") return method_not_allowed();
        const json doc = parse_body(body);
        if (!doc.is_object()) throw DomainError("BAD_REQUEST", "body must be a JSON object");
        const std::string pack_id = doc.value("pack_id", std::string("reference"));
        auto created = service_.create_session(pack_id, seed_field(doc));
        return {201, {{"session_id", created.session_id}, {"view", std::move(created.view)}}};
      }
      const std::string id(parts[2]);
      if (parts.size() == 3) {
        if (method != "GET") return method_not_allowed();
        return {200, service_.get_view(id)};
      }
      if (parts.size() == 4 && parts[3] == "actions") {
        if (method != "POST") return method_not_allowed();
        auto result = service_.submit_action_json(id, parse_body(body));
        json out = {{"view", std::move(result.view)}, {"dialogue", json::array()}};
        out["outcome"] = result.outcome ? outcome_to_json(*result.outcome) : json(nullptr);
        for (const auto& entry : result.dialogue) out["dialogue"].push_back(dialogue_to_json(entry));
        return {200, std::move(out)};
      }
    }
    return {404, error_body("NOT_FOUND", "no such endpoint")};
  } catch (const NotFoundError& e) {
    return {404, error_body(e.code(), e.what())};
  } catch (const StateError& e) {
    return {409, error_body(e.code(), e.what())};
  } catch (const EconomyError& e) {
    return {409, error_body(e.code(), e.what())};
  } catch (const persist::PersistError& e) {
    return {500, error_body(e.code(), e.what())};
  } catch (const Error& e) {
    return {400, error_body(e.code(), e.what())};
  } catch (const std::exception& e) {
    return {500, error_body("INTERNAL", e.what())};
  }
}

}  // namespace procrastimate::service
