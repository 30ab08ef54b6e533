#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "htmr/network.hpp"
#include "htmr/reliability.hpp"

using namespace htmr;

namespace {

Probability P(double v) { return Probability(v); }

HtmrNetwork uniform(unsigned order, double pf, double pfmb = 0.0) {
  return build_network(TmrOrder(order), ModuleKind::faulty(P(pf)), P(pfmb));
}

}  // namespace

TEST(BuildNetwork, Counts) {
  const auto n1 = uniform(1, 0.1);
  EXPECT_EQ(n1.leaf_count(), 3u);
  EXPECT_EQ(n1.voter_count(), 1u);
  const auto n2 = uniform(2, 0.1);
  EXPECT_EQ(n2.leaf_count(), 9u);
  EXPECT_EQ(n2.voter_count(), 4u);
  const auto n3 = uniform(3, 0.1);
  EXPECT_EQ(n3.leaf_count(), 27u);
  EXPECT_EQ(n3.voter_count(), 13u);
}

TEST(BuildNetwork, TreeIsCompleteAndEvaluatedBottomUp) {
  const auto net = uniform(3, 0.1);
  const std::size_t nodes = net.voter_count() + net.leaf_count();
  std::vector<int> parents(nodes, 0);
  for (std::size_t v = 0; v < net.voter_count(); ++v) {
    for (std::size_t c : HtmrNetwork::children(v)) {
      ASSERT_LT(c, nodes);
      ++parents[c];
    }
  }
  EXPECT_EQ(parents[0], 0);
  for (std::size_t i = 1; i < nodes; ++i) EXPECT_EQ(parents[i], 1) << i;

  const auto order = net.evaluation_order();
  ASSERT_EQ(order.size(), net.voter_count());
  const std::vector<std::size_t> expected{4, 5, 6, 7, 8, 9, 10, 11, 12, 1, 2, 3, 0};
  EXPECT_EQ(std::vector<std::size_t>(order.begin(), order.end()), expected);
}

TEST(BuildNetwork, Errors) {
  EXPECT_THROW((void)build_network(TmrOrder(2), std::vector<ModuleKind>(8, ModuleKind::fault_free()), P(0)),
               ConfigError);
  EXPECT_THROW((void)uniform(0, 0.1), ConfigError);
  EXPECT_THROW((void)uniform(kMaxNetworkOrder + 1, 0.1), ConfigError);
}

TEST(BuildNetwork, ScenarioReplicatedPerTriple) {
  const auto net = build_network(TmrOrder(2), ScenarioKind::NNF, P(0.3), P(0));
  for (std::size_t i = 0; i < 9; ++i) EXPECT_EQ(net.leaves()[i].is_faulty(), i % 3 == 2) << i;
}

TEST(SimulateBit, FaultFreeNetwork) {
  const auto net = build_network(TmrOrder(2), ModuleKind::fault_free(), P(0));
  RandomSource rng(1);
  for (Bit ref : {Bit::Zero, Bit::One}) {
    const auto r = simulate_bit(net, ref, rng);
    EXPECT_EQ(r.output, ref);
    for (Bit a : r.alarms) EXPECT_EQ(a, Bit::Zero);
  }
  EXPECT_EQ(rng.draws(), 0u);
}

TEST(SimulateBit, SingleDissenterOutvoted) {
  const auto net = build_network(TmrOrder(1), ScenarioKind::NNF, P(1), P(0));
  RandomSource rng(1);
  const auto r = simulate_bit(net, Bit::Zero, rng);
  EXPECT_EQ(r.output, Bit::Zero);
  EXPECT_EQ(r.alarms.at(0), Bit::One);
}

TEST(SimulateBit, AllFaultyIsUndetectable) {
  const auto net = build_network(TmrOrder(1), ScenarioKind::FFF, P(1), P(0));
  RandomSource rng(1);
  const auto r = simulate_bit(net, Bit::Zero, rng);
  EXPECT_EQ(r.output, Bit::One);
  EXPECT_EQ(r.alarms.at(0), Bit::Zero);
}

TEST(SimulateBit, DrawOrderDiscipline) {
  RandomSource rng(1);
  (void)simulate_bit(uniform(1, 0.3), Bit::Zero, rng);
  EXPECT_EQ(rng.draws(), 3u);
  (void)simulate_bit(uniform(1, 0.3, 0.2), Bit::Zero, rng);
  EXPECT_EQ(rng.draws(), 3u + 4u);
  (void)simulate_bit(build_network(TmrOrder(2), ScenarioKind::NNF, P(0.3), P(0)), Bit::Zero, rng);
  EXPECT_EQ(rng.draws(), 3u + 4u + 3u);
}

TEST(SimulateBit, FailedVoterForwardsFirstChild) {
  // Leaf 0 always inverts, the others never; a voter that always fails
  // forwards leaf 0 and still raises its alarm.
  std::vector<ModuleKind> leaves{ModuleKind::faulty(P(1)), ModuleKind::fault_free(), ModuleKind::fault_free()};
  const auto net = build_network(TmrOrder(1), leaves, P(1));
  RandomSource rng(1);
  const auto r = simulate_bit(net, Bit::Zero, rng);
  EXPECT_EQ(r.output, Bit::One);
  EXPECT_EQ(r.alarms.at(0), Bit::One);
}

TEST(RunTrials, SingleFaultIsAlwaysMasked) {
  for (double p : {0.1, 0.5, 1.0}) {
    for (std::size_t pos = 0; pos < 3; ++pos) {
      std::vector<ModuleKind> leaves(3, ModuleKind::fault_free());
      leaves[pos] = ModuleKind::faulty(P(p));
      const auto net = build_network(TmrOrder(1), leaves, P(0));
      const auto r = run_trials(net, 200000, {}, 11);
      EXPECT_EQ(r.estimate.errors, 0u) << p << " " << pos;
    }
  }
}

TEST(RunTrials, FirstOrderMatchesAnalytic) {
  const auto r = run_trials(uniform(1, 0.1), 1000000, {}, 17);
  EXPECT_TRUE(r.estimate.agrees_with(0.028)) << r.estimate.pe_hat();
}

TEST(RunTrials, SecondOrderMatchesAnalytic) {
  const auto r = run_trials(uniform(2, 0.1), 1000000, {}, 19);
  EXPECT_TRUE(r.estimate.agrees_with(0.002308096)) << r.estimate.pe_hat();
}

TEST(RunTrials, AgreementAcrossGrid) {
  for (int i = 0; i <= 10; ++i) {
    const double p = i / 10.0;
    const auto r1 = run_trials(uniform(1, p), 50000, {}, derive_seed(23, i));
    EXPECT_TRUE(r1.estimate.agrees_with(pe_first(p))) << p << " " << r1.estimate.pe_hat();
    const auto r2 = run_trials(uniform(2, p), 50000, {}, derive_seed(29, i));
    EXPECT_TRUE(r2.estimate.agrees_with(pe_order(TmrOrder(2), P(p)).value())) << p << " " << r2.estimate.pe_hat();
  }
}

TEST(RunTrials, VoterFaultsFollowMixture) {
  const auto r = run_trials(uniform(1, 0.1, 0.1), 1000000, {}, 31);
  EXPECT_TRUE(r.estimate.agrees_with(pem_first(P(0.1), P(0.1)).value())) << r.estimate.pe_hat();
  const auto always = run_trials(uniform(1, 0.2, 1.0), 200000, {}, 37);
  EXPECT_TRUE(always.estimate.agrees_with(0.2));
}

TEST(RunTrials, SecondOrderVoterFaultsFollowStructuralRecursion) {
  // With pass-through voters the root sees three first-order outputs that err
  // with Pem_1, not Pe_1.
  const double p = 0.1, m = 0.1;
  const double pem1 = pem_first(P(p), P(m)).value();
  const double structural = pem1 * m + pe_first(pem1) * (1 - m);
  const auto r = run_trials(uniform(2, p, m), 1000000, {}, 41);
  EXPECT_TRUE(r.estimate.agrees_with(structural)) << r.estimate.pe_hat();
}

TEST(RunTrials, ReferencePayloadDoesNotMatter) {
  for (auto pattern : {ReferencePattern::Zeros, ReferencePattern::Ones, ReferencePattern::Alternating}) {
    const auto r = run_trials(uniform(1, 0.3), 200000, {pattern}, 43);
    EXPECT_TRUE(r.estimate.agrees_with(pe_first(0.3)));
  }
}

TEST(RunTrials, DeterministicAcrossWorkerCounts) {
  const auto net = uniform(2, 0.2, 0.05);
  const auto one = run_trials(net, 300001, {}, 99, 1);
  for (unsigned w : {2U, 3U, 8U}) EXPECT_EQ(run_trials(net, 300001, {}, 99, w), one) << w;
  EXPECT_EQ(one.estimate.trials, 300001u);
  EXPECT_NE(run_trials(net, 300001, {}, 100, 1), one);
}

TEST(RunTrials, AlarmAccounting) {
  const auto clean = run_trials(build_network(TmrOrder(2), ModuleKind::fault_free(), P(0)), 10000, {}, 1);
  EXPECT_EQ(clean.alarms.trials_with_alarm, 0u);
  for (auto c : clean.alarms.voter_alarms) EXPECT_EQ(c, 0u);

  const auto noisy = run_trials(uniform(2, 0.3), 10000, {}, 2);
  ASSERT_EQ(noisy.alarms.voter_alarms.size(), 4u);
  std::uint64_t max_voter = 0;
  for (auto c : noisy.alarms.voter_alarms) {
    EXPECT_LE(c, noisy.alarms.trials);
    max_voter = std::max(max_voter, c);
  }
  EXPECT_GE(noisy.alarms.trials_with_alarm, max_voter);
  EXPECT_LE(noisy.alarms.trials_with_alarm, noisy.alarms.trials);
  EXPECT_THROW((void)run_trials(uniform(1, 0.1), 0, {}, 1), ConfigError);
}

TEST(RunModuleTrials, BareModule) {
  const auto e = run_module_trials(ModuleKind::faulty(P(0.25)), 400000, {}, 5, 3);
  EXPECT_TRUE(e.agrees_with(0.25));
  EXPECT_EQ(run_module_trials(ModuleKind::faulty(P(0.25)), 400000, {}, 5, 1), e);
}

TEST(HealthReport, NoAlarms) {
  FaultStatusCounter c;
  c.voter_alarms = {0, 0, 0, 0};
  c.trials = 100;
  const auto h = health_report(c);
  for (double f : h.voter_alarm_frequency) EXPECT_EQ(f, 0.0);
  EXPECT_TRUE(h.flagged_voters.empty());
  EXPECT_EQ(h.aggregate_alarm_rate, 0.0);
  EXPECT_THROW((void)health_report(FaultStatusCounter{}), ConfigError);
}

TEST(HealthReport, SingleFaultyModuleAlarmRate) {
  const double p = 0.3;
  const std::uint64_t n = 200000;
  const auto r = run_trials(build_network(TmrOrder(1), ScenarioKind::NNF, P(p), P(0)), n, {}, 8);
  const auto h = health_report(r.alarms, 0.2);
  EXPECT_LE(std::abs(h.voter_alarm_frequency[0] - p), 4 * binomial_standard_error(p, n));
  ASSERT_EQ(h.flagged_voters.size(), 1u);
  EXPECT_EQ(h.flagged_voters[0], 0u);
}

TEST(HealthReport, AllFaultyNeverAlarms) {
  const auto r = run_trials(build_network(TmrOrder(1), ScenarioKind::FFF, P(1), P(0)), 10000, {}, 8);
  EXPECT_EQ(r.estimate.errors, 10000u);
  EXPECT_EQ(health_report(r.alarms).voter_alarm_frequency[0], 0.0);
}

TEST(EmpiricalEstimateType, StandardError) {
  EmpiricalEstimate e{10000, 280};
  EXPECT_DOUBLE_EQ(e.pe_hat(), 0.028);
  EXPECT_NEAR(e.std_err(), std::sqrt(0.028 * 0.972 / 10000), 1e-15);
  EXPECT_TRUE((EmpiricalEstimate{100, 0}).agrees_with(0.0));
  EXPECT_FALSE((EmpiricalEstimate{100, 1}).agrees_with(0.0));
}
