#include "procrastimate/domain/card.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "procrastimate/util/bundled.hpp"

namespace procrastimate {

namespace {

std::string join_ids(const std::vector<int>& ids) {
  std::ostringstream out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out << (i == 0 ? "" : ", ") << ids[i];
  }
  return out.str();
}

}  // namespace

Cause cause_of_card(int card_id) {
  if (!is_valid_card_id(card_id)) {
    throw DomainError("CARD_RANGE",
                      "card id " + std::to_string(card_id) + " is outside [1, 40]");
  }
  return static_cast<Cause>((card_id - 1) / kCardsPerCause);
}

Deck::Deck(std::vector<StrategyCard> cards) : cards_(std::move(cards)) {
  if (cards_.size() != static_cast<std::size_t>(kDeckSize)) {
    throw DeckError("DECK_SCHEMA", "deck must hold exactly 40 cards", {});
  }
  for (int i = 0; i < kDeckSize; ++i) {
    if (cards_[i].id != i + 1) {
      throw DeckError("DECK_SCHEMA", "deck cards must be ordered by id 1..40", {cards_[i].id});
    }
  }
}

const StrategyCard& Deck::card(int card_id) const {
  cause_of_card(card_id);  // range check
  return cards_[card_id - 1];
}

Deck load_deck(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DeckError("DECK_SYNTAX", std::string("card deck is not valid JSON: ") + e.what(), {});
  }
  if (!doc.is_array()) {
    throw DeckError("DECK_SCHEMA", "card deck must be a JSON array", {});
  }

  std::map<int, StrategyCard> by_id;
  std::vector<int> out_of_range;
  std::vector<int> duplicates;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& entry = doc[i];
    const auto where = "card entry #" + std::to_string(i);
    if (!entry.is_object() || !entry.contains("id") || !entry["id"].is_number_integer()) {
      throw DeckError("DECK_SCHEMA", where + " needs an integer 'id'", {});
    }
    StrategyCard card;
    card.id = entry["id"].get<int>();
    for (const char* field : {"title", "explanation", "utility"}) {
      if (!entry.contains(field) || !entry[field].is_string()) {
        throw DeckError("DECK_SCHEMA", where + " needs a string '" + field + "'", {card.id});
      }
    }
    card.title = entry["title"].get<std::string>();
    card.explanation = entry["explanation"].get<std::string>();
    card.utility = entry["utility"].get<std::string>();

    if (!is_valid_card_id(card.id)) {
      out_of_range.push_back(card.id);
    } else if (!by_id.emplace(card.id, std::move(card)).second) {
      duplicates.push_back(entry["id"].get<int>());
    }
  }

  if (!out_of_range.empty()) {
    throw DeckError("DECK_ID_RANGE", "card ids outside [1, 40]: " + join_ids(out_of_range),
                    out_of_range);
  }
  if (!duplicates.empty()) {
    throw DeckError("DECK_DUPLICATE_ID", "duplicate card ids: " + join_ids(duplicates),
                    duplicates);
  }
  std::vector<int> missing;
  for (int id = 1; id <= kDeckSize; ++id) {
    if (!by_id.contains(id)) missing.push_back(id);
  }
  if (!missing.empty()) {
    throw DeckError("DECK_MISSING_ID", "missing card ids: " + join_ids(missing), missing);
  }

  std::vector<StrategyCard> cards;
  cards.reserve(kDeckSize);
  for (auto& [id, card] : by_id) cards.push_back(std::move(card));
  return Deck(std::move(cards));
}

Deck load_deck_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DeckError("DECK_IO", "cannot read card deck " + path.string(), {});
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_deck(buffer.str());
}

const Deck& bundled_deck() {
  static const Deck deck = load_deck(bundled::cards_json());
  return deck;
}

}  // namespace procrastimate
