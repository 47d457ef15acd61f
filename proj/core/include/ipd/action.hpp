#pragma once

#include <cstdint>
#include <string>

#include "ipd/error.hpp"

namespace ipd {

/// The two IPD moves. The integer coding C=0, D=1 is fixed and used by every
/// encoder and learner downstream.
enum class Action : std::uint8_t { C = 0, D = 1 };

inline constexpr int kNumActions = 2;

constexpr int action_code(Action a) { return static_cast<int>(a); }

constexpr Action action_from_code(int code) {
  return code == 0 ? Action::C : Action::D;
}

constexpr char action_char(Action a) { return a == Action::C ? 'C' : 'D'; }

inline std::string action_str(Action a) { return std::string(1, action_char(a)); }

/// Parses a C/D token. Throws DataError("ActionCodeError") on anything else.
inline Action parse_action(const std::string& token, int line = 0, int column = 0) {
  if (token == "C") return Action::C;
  if (token == "D") return Action::D;
  throw DataError("ActionCodeError", "expected C or D, got \"" + token + "\"", line, column);
}

}  // namespace ipd
