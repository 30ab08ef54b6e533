#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "htmr/fault_model.hpp"

using namespace htmr;

TEST(RandomSource, EngineSequenceIsStandardMandated) {
  // The standard fixes the 10000th output of a default-seeded mt19937_64.
  std::mt19937_64 reference;
  reference.discard(9999);
  EXPECT_EQ(reference(), 9981545732273789042ULL);

  RandomSource a(std::mt19937_64::default_seed);
  std::mt19937_64 b(std::mt19937_64::default_seed);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.uniform(), static_cast<double>(b() >> 11) * 0x1.0p-53);
}

TEST(RandomSource, UniformInHalfOpenUnitInterval) {
  RandomSource rng(123);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
  EXPECT_EQ(rng.draws(), 100000u);
}

TEST(RandomSource, SameSeedSameStream) {
  RandomSource a(42), b(42);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(ber_corrupt(Bit::Zero, Probability(0.3), a),
                                          ber_corrupt(Bit::Zero, Probability(0.3), b));
}

TEST(RandomSource, DerivedSeedsAreDistinct) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t master : {0ULL, 1ULL, 42ULL}) {
    for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(master, i));
  }
  EXPECT_EQ(seen.size(), 3000u);
  EXPECT_EQ(RandomSource::derive(9, 3).seed(), derive_seed(9, 3));
}

TEST(RandomSource, DerivedStreamsAreUncorrelated) {
  RandomSource a = RandomSource::derive(5, 0);
  RandomSource b = RandomSource::derive(5, 1);
  const int n = 200000;
  double sa = 0, sb = 0, sab = 0;
  for (int i = 0; i < n; ++i) {
    const double x = a.uniform() - 0.5;
    const double y = b.uniform() - 0.5;
    sa += x * x;
    sb += y * y;
    sab += x * y;
  }
  const double corr = sab / std::sqrt(sa * sb);
  EXPECT_LT(std::abs(corr), 4.0 / std::sqrt(n));
}

TEST(BerCorrupt, DegenerateRates) {
  RandomSource rng(1);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_EQ(ber_corrupt(Bit::One, Probability(0), rng), Bit::One);
    EXPECT_EQ(ber_corrupt(Bit::Zero, Probability(0), rng), Bit::Zero);
    EXPECT_EQ(ber_corrupt(Bit::One, Probability(1), rng), Bit::Zero);
    EXPECT_EQ(ber_corrupt(Bit::Zero, Probability(1), rng), Bit::One);
  }
  EXPECT_EQ(rng.draws(), 4000u);
}

TEST(BerCorrupt, StatisticalCalibration) {
  const int n = 1000000;
  for (double p : {0.1, 0.3, 0.5, 0.9}) {
    RandomSource rng(derive_seed(2024, static_cast<std::uint64_t>(p * 10)));
    int flips = 0;
    for (int i = 0; i < n; ++i) flips += ber_corrupt(Bit::Zero, Probability(p), rng) == Bit::One;
    const double freq = static_cast<double>(flips) / n;
    EXPECT_LE(std::abs(freq - p), 4.0 * std::sqrt(p * (1 - p) / n)) << p;
  }
}

TEST(ModuleOutput, Examples) {
  RandomSource rng(3);
  EXPECT_EQ(module_output(ModuleKind::fault_free(), Bit::One, rng), Bit::One);
  EXPECT_EQ(module_output(ModuleKind::faulty(Probability(0)), Bit::One, rng), Bit::One);
  EXPECT_EQ(module_output(ModuleKind::faulty(Probability(1)), Bit::Zero, rng), Bit::One);
}

TEST(ModuleOutput, DrawDiscipline) {
  RandomSource rng(3);
  for (int i = 0; i < 10; ++i) (void)module_output(ModuleKind::fault_free(), Bit::Zero, rng);
  EXPECT_EQ(rng.draws(), 0u);
  for (int i = 0; i < 10; ++i) (void)module_output(ModuleKind::faulty(Probability(0.2)), Bit::Zero, rng);
  EXPECT_EQ(rng.draws(), 10u);
}

TEST(ModuleKindType, Accessors) {
  EXPECT_FALSE(ModuleKind::fault_free().is_faulty());
  EXPECT_EQ(ModuleKind::fault_free().rate().value(), 0.0);
  const auto f = ModuleKind::faulty(Probability(0.25));
  EXPECT_TRUE(f.is_faulty());
  EXPECT_EQ(f.rate().value(), 0.25);
  EXPECT_THROW((void)ModuleKind::faulty(Probability(1.2)), RangeError);
}

TEST(ScenarioType, Patterns) {
  const auto s = make_scenario(ScenarioKind::NFF, Probability(0.2));
  EXPECT_FALSE(s[0].is_faulty());
  EXPECT_TRUE(s[1].is_faulty());
  EXPECT_TRUE(s[2].is_faulty());
  EXPECT_EQ(parse_scenario("NNF"), ScenarioKind::NNF);
  EXPECT_EQ(to_string(ScenarioKind::FFF), "FFF");
  EXPECT_THROW((void)parse_scenario("FNN"), ConfigError);
}
