#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace relpres {

// Three-valued answer used by oracles and budgeted decision procedures.
// Unknown is an honest "ran out of budget / outside the ball", never a guess.
enum class TriState : uint8_t { False = 0, True = 1, Unknown = 2 };

inline const char* to_string(TriState t) {
  switch (t) {
    case TriState::False: return "false";
    case TriState::True: return "true";
    default: return "unknown";
  }
}

inline TriState tri_and(TriState a, TriState b) {
  if (a == TriState::False || b == TriState::False) return TriState::False;
  if (a == TriState::Unknown || b == TriState::Unknown) return TriState::Unknown;
  return TriState::True;
}

inline TriState tri_not(TriState a) {
  if (a == TriState::Unknown) return TriState::Unknown;
  return a == TriState::True ? TriState::False : TriState::True;
}

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& m) : std::runtime_error(m) {}
};

struct SchemaError : std::runtime_error {
  explicit SchemaError(const std::string& m) : std::runtime_error(m) {}
};

// Structural violation in a diagram or presentation (invariant broken).
struct InvariantError : std::runtime_error {
  explicit InvariantError(const std::string& m) : std::runtime_error(m) {}
};

// Raised when a budgeted operation cannot finish and has no partial answer.
struct BudgetError : std::runtime_error {
  explicit BudgetError(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace relpres
