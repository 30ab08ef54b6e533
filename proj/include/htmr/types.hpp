#pragma once

#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include "htmr/error.hpp"

namespace htmr {

/// A real number in the closed unit interval. Construction from an
/// out-of-range or NaN value throws RangeError.
class Probability {
 public:
  constexpr Probability() = default;

  explicit Probability(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0)) {
      throw RangeError("probability out of range [0,1]: " + std::to_string(value));
    }
  }

  [[nodiscard]] constexpr double value() const noexcept { return value_; }

  friend constexpr auto operator<=>(Probability, Probability) = default;

 private:
  double value_ = 0.0;
};

/// Clamps rounding noise back into [0,1]; only for results of formulas that
/// are mathematically closed on the unit interval.
[[nodiscard]] inline Probability clamped_probability(double value) {
  if (value < 0.0) return Probability(0.0);
  if (value > 1.0) return Probability(1.0);
  return Probability(value);
}

inline constexpr unsigned kDefaultMaxOrder = 16;

/// Hierarchy depth of a TMR network. Order 0 is the bare, unprotected module.
class TmrOrder {
 public:
  explicit TmrOrder(unsigned j, unsigned max_order = kDefaultMaxOrder) : j_(j) {
    if (j > max_order) {
      throw DepthError("TMR order " + std::to_string(j) + " exceeds maximum " +
                       std::to_string(max_order));
    }
  }

  [[nodiscard]] constexpr unsigned value() const noexcept { return j_; }

  /// 3^j
  [[nodiscard]] std::uint64_t module_count() const noexcept {
    std::uint64_t n = 1;
    for (unsigned i = 0; i < j_; ++i) n *= 3;
    return n;
  }

  /// (3^j - 1) / 2
  [[nodiscard]] std::uint64_t voter_count() const noexcept { return (module_count() - 1) / 2; }

  friend constexpr auto operator<=>(TmrOrder, TmrOrder) = default;

 private:
  unsigned j_ = 0;
};

/// Error-probability reduction in decades (log10 of a probability ratio).
/// A perfectly masked output has an infinite reduction.
class ReductionRate {
 public:
  explicit constexpr ReductionRate(double decades) : decades_(decades) {}

  static constexpr ReductionRate infinite() {
    return ReductionRate(std::numeric_limits<double>::infinity());
  }

  [[nodiscard]] constexpr double decades() const noexcept { return decades_; }
  [[nodiscard]] bool is_infinite() const noexcept { return std::isinf(decades_); }

 private:
  double decades_;
};

/// Fault-free (N) / faulty (F) module patterns of a first-order triple.
enum class ScenarioKind : std::uint8_t { NNF, NFF, FFF };

inline constexpr std::array<ScenarioKind, 3> kAllScenarios = {ScenarioKind::NNF, ScenarioKind::NFF,
                                                              ScenarioKind::FFF};

[[nodiscard]] inline std::string_view to_string(ScenarioKind s) {
  switch (s) {
    case ScenarioKind::NNF:
      return "NNF";
    case ScenarioKind::NFF:
      return "NFF";
    case ScenarioKind::FFF:
      return "FFF";
  }
  return "?";
}

[[nodiscard]] inline ScenarioKind parse_scenario(std::string_view text) {
  for (auto s : kAllScenarios) {
    if (to_string(s) == text) return s;
  }
  throw ConfigError("unknown scenario '" + std::string(text) + "' (expected NNF, NFF or FFF)");
}

/// Position pattern of a scenario: true where the module is faulty.
[[nodiscard]] constexpr std::array<bool, 3> faulty_positions(ScenarioKind s) {
  switch (s) {
    case ScenarioKind::NNF:
      return {false, false, true};
    case ScenarioKind::NFF:
      return {false, true, true};
    case ScenarioKind::FFF:
      return {true, true, true};
  }
  return {false, false, false};
}

}  // namespace htmr
