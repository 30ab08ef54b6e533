#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>

#include "htmr/tmr_logic.hpp"
#include "htmr/types.hpp"

namespace htmr {

/// SplitMix64 finaliser.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of stream `index` under `master`. Distinct indices give unrelated
/// seeds; derivation nests (point -> order -> block).
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix64(mix64(master) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

/// Deterministic uniform stream: a 64-bit Mersenne Twister (whose output
/// sequence is fixed by the C++ standard) seeded with a 64-bit value, mapped
/// to [0,1) from the top 53 bits. std::uniform_real_distribution is avoided
/// because its output is implementation-defined.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  [[nodiscard]] static RandomSource derive(std::uint64_t master, std::uint64_t index) {
    return RandomSource(derive_seed(master, index));
  }

  [[nodiscard]] double uniform() {
    ++draws_;
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] std::uint64_t draws() const noexcept { return draws_; }

 private:
  std::uint64_t seed_;
  std::uint64_t draws_ = 0;
  std::mt19937_64 engine_;
};

/// A redundant module: either fault-free (N) or faulty (F) with a bit
/// inversion rate.
class ModuleKind {
 public:
  [[nodiscard]] static ModuleKind fault_free() { return ModuleKind(); }
  [[nodiscard]] static ModuleKind faulty(Probability rate) { return ModuleKind(rate); }

  [[nodiscard]] bool is_faulty() const noexcept { return rate_.has_value(); }
  /// 0 for a fault-free module.
  [[nodiscard]] Probability rate() const noexcept { return rate_.value_or(Probability()); }

  friend bool operator==(const ModuleKind&, const ModuleKind&) = default;

 private:
  ModuleKind() = default;
  explicit ModuleKind(Probability rate) : rate_(rate) {}

  std::optional<Probability> rate_;
};

/// Module kinds at positions y1, y2, y3.
using Scenario = std::array<ModuleKind, 3>;

[[nodiscard]] inline Scenario make_scenario(ScenarioKind kind, Probability rate) {
  const auto pattern = faulty_positions(kind);
  Scenario s{ModuleKind::fault_free(), ModuleKind::fault_free(), ModuleKind::fault_free()};
  for (std::size_t i = 0; i < 3; ++i) {
    if (pattern[i]) s[i] = ModuleKind::faulty(rate);
  }
  return s;
}

/// Inverts `bit` with probability `rate`. Always consumes exactly one draw.
[[nodiscard]] inline Bit ber_corrupt(Bit bit, Probability rate, RandomSource& rng) {
  return rng.uniform() < rate.value() ? ~bit : bit;
}

/// Fault-free modules reproduce the reference and draw nothing; faulty ones
/// pass it through the inversion block.
[[nodiscard]] inline Bit module_output(const ModuleKind& kind, Bit reference_bit, RandomSource& rng) {
  if (!kind.is_faulty()) return reference_bit;
  return ber_corrupt(reference_bit, kind.rate(), rng);
}

}  // namespace htmr
