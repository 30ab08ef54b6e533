#pragma once

#include <cstdint>
#include <string>

#include "htmr/error.hpp"

namespace htmr {

enum class Bit : std::uint8_t { Zero = 0, One = 1 };

[[nodiscard]] constexpr bool to_bool(Bit b) noexcept { return b == Bit::One; }
[[nodiscard]] constexpr Bit to_bit(bool v) noexcept { return v ? Bit::One : Bit::Zero; }
[[nodiscard]] constexpr int to_int(Bit b) noexcept { return static_cast<int>(b); }
[[nodiscard]] constexpr Bit operator~(Bit b) noexcept { return to_bit(!to_bool(b)); }

/// Checked conversion from an integer; anything but 0 or 1 is a RangeError.
[[nodiscard]] inline Bit make_bit(int v) {
  if (v != 0 && v != 1) throw RangeError("binary digit must be 0 or 1, got " + std::to_string(v));
  return static_cast<Bit>(v);
}

struct TripleInput {
  Bit y1 = Bit::Zero;
  Bit y2 = Bit::Zero;
  Bit y3 = Bit::Zero;

  friend constexpr bool operator==(const TripleInput&, const TripleInput&) = default;
};

struct VoteOutcome {
  Bit value = Bit::Zero;
  Bit alarm = Bit::Zero;

  friend constexpr bool operator==(const VoteOutcome&, const VoteOutcome&) = default;
};

/// Sum-of-products majority: y1 y2 ~y3 + y1 ~y2 y3 + ~y1 y2 y3 + y1 y2 y3.
[[nodiscard]] constexpr Bit majority_vote(TripleInput t) noexcept {
  const bool a = to_bool(t.y1);
  const bool b = to_bool(t.y2);
  const bool c = to_bool(t.y3);
  return to_bit((a && b && !c) || (a && !b && c) || (!a && b && c) || (a && b && c));
}

/// (y1 + y2 + y3) (~y1 + ~y2 + ~y3): high unless the three inputs agree.
[[nodiscard]] constexpr Bit alarm_signal(TripleInput t) noexcept {
  const bool a = to_bool(t.y1);
  const bool b = to_bool(t.y2);
  const bool c = to_bool(t.y3);
  return to_bit((a || b || c) && (!a || !b || !c));
}

[[nodiscard]] constexpr VoteOutcome vote_with_alarm(TripleInput t) noexcept {
  return {majority_vote(t), alarm_signal(t)};
}

/// Register element of a TMR flip-flop. Resets to 0.
struct TmrRegister {
  Bit stored = Bit::Zero;
  bool loaded = false;

  friend constexpr bool operator==(const TmrRegister&, const TmrRegister&) = default;
};

struct FlipFlopStep {
  TmrRegister reg;
  VoteOutcome outcome;
};

/// One clock edge: vote and alarm are combinational on the inputs, the voted
/// value is latched into the register.
[[nodiscard]] constexpr FlipFlopStep flipflop_step(TmrRegister /*reg*/, TripleInput t) noexcept {
  const VoteOutcome outcome = vote_with_alarm(t);
  return {TmrRegister{outcome.value, true}, outcome};
}

}  // namespace htmr
