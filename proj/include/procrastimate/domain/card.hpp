#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "procrastimate/domain/cause.hpp"
#include "procrastimate/errors.hpp"

namespace procrastimate {

inline constexpr int kDeckSize = 40;
inline constexpr int kCardsPerCause = 10;

constexpr bool is_valid_card_id(int card_id) { return card_id >= 1 && card_id <= kDeckSize; }

// Cause bucket by id range: 1-10, 11-20, 21-30, 31-40.
// Throws DomainError for ids outside [1, 40].
Cause cause_of_card(int card_id);

struct StrategyCard {
  int id = 0;
  std::string title;
  std::string explanation;
  std::string utility;

  Cause cause() const { return cause_of_card(id); }

  bool operator==(const StrategyCard&) const = default;
};

// Raised by load_deck. The offending ids are kept for callers that want to
// report them individually.
class DeckError : public Error {
 public:
  DeckError(std::string code, const std::string& message, std::vector<int> offending_ids)
      : Error(std::move(code), message), offending_ids_(std::move(offending_ids)) {}

  const std::vector<int>& offending_ids() const noexcept { return offending_ids_; }

 private:
  std::vector<int> offending_ids_;
};

class Deck {
 public:
  // Cards must be exactly ids 1..40, in id order.
  explicit Deck(std::vector<StrategyCard> cards);

  const StrategyCard& card(int card_id) const;
  const std::vector<StrategyCard>& cards() const noexcept { return cards_; }

  bool operator==(const Deck&) const = default;

 private:
  std::vector<StrategyCard> cards_;
};

// Parses a card-definition document: a JSON array of {id, title, explanation, utility}.
// Errors: DECK_SYNTAX, DECK_SCHEMA, DECK_ID_RANGE, DECK_DUPLICATE_ID, DECK_MISSING_ID.
Deck load_deck(std::string_view json_text);
Deck load_deck_file(const std::filesystem::path& path);

// The translated strategy deck compiled into the binary.
const Deck& bundled_deck();

}  // namespace procrastimate
