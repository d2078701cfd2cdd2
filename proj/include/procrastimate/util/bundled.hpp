#pragma once

#include <optional>
#include <string_view>

// Content files compiled into the binary at configure time (see cmake/Bundle.cmake).
namespace procrastimate::bundled {

std::string_view cards_json();
std::string_view reference_pack_json();
std::string_view shared_pool_json();
// Prompt template body by id (file stem under data/templates), if bundled.
std::optional<std::string_view> template_text(std::string_view template_id);

}  // namespace procrastimate::bundled
