#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace procrastimate {

// Every error raised by the library carries a stable machine-readable code
// (e.g. WRONG_LEVEL, INSUFFICIENT_POINTS) next to the human message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// Value outside the static domain (card id out of range, unknown enum name).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Action not legal in the current game state.
class StateError : public Error {
 public:
  using Error::Error;
};

// Privilege Point economy violations.
class EconomyError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  explicit NotFoundError(const std::string& message) : Error("NOT_FOUND", message) {}
};

}  // namespace procrastimate
