#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "htmr/error.hpp"
#include "htmr/fault_model.hpp"
#include "htmr/tmr_logic.hpp"
#include "htmr/types.hpp"

namespace htmr {

/// Largest order a structural network may have (3^10 = 59049 leaves).
inline constexpr unsigned kMaxNetworkOrder = 10;

/// Trials are simulated in fixed-size blocks, each with its own derived
/// stream, so results do not depend on how blocks are spread over workers.
inline constexpr std::uint64_t kTrialBlockSize = std::uint64_t{1} << 16;

enum class ReferencePattern : std::uint8_t { Zeros, Ones, Alternating };

/// Payload carried by the simulated data path. Voter and error model are
/// symmetric under inversion, so error statistics do not depend on it.
struct ReferenceStream {
  ReferencePattern pattern = ReferencePattern::Alternating;

  [[nodiscard]] constexpr Bit at(std::uint64_t trial) const noexcept {
    switch (pattern) {
      case ReferencePattern::Zeros:
        return Bit::Zero;
      case ReferencePattern::Ones:
        return Bit::One;
      case ReferencePattern::Alternating:
        return to_bit((trial & 1U) != 0);
    }
    return Bit::Zero;
  }
};

/// Complete ternary voter tree of order j.
///
/// Nodes are numbered breadth-first from the root: voter k has children
/// 3k+1, 3k+2, 3k+3; node ids at or above voter_count() are leaves, leaf
/// index = id - voter_count(). Immutable after construction.
class HtmrNetwork {
 public:
  [[nodiscard]] TmrOrder order() const noexcept { return order_; }
  [[nodiscard]] std::span<const ModuleKind> leaves() const noexcept { return leaves_; }
  [[nodiscard]] Probability voter_fault_rate() const noexcept { return voter_fault_rate_; }
  [[nodiscard]] std::size_t leaf_count() const noexcept { return leaves_.size(); }
  [[nodiscard]] std::size_t voter_count() const noexcept { return (leaves_.size() - 1) / 2; }

  /// Children of voter k; always exactly three.
  [[nodiscard]] static constexpr std::array<std::size_t, 3> children(std::size_t voter) noexcept {
    return {3 * voter + 1, 3 * voter + 2, 3 * voter + 3};
  }

  /// Voter ids in evaluation order: deepest level first, left to right.
  [[nodiscard]] std::span<const std::size_t> evaluation_order() const noexcept { return eval_order_; }

 private:
  HtmrNetwork(TmrOrder order, std::vector<ModuleKind> leaves, Probability voter_fault_rate)
      : order_(order), leaves_(std::move(leaves)), voter_fault_rate_(voter_fault_rate) {
    std::size_t level_begin = voter_count();
    std::size_t level_size = leaves_.size() / 3;
    while (level_size > 0) {
      level_begin -= level_size;
      for (std::size_t v = 0; v < level_size; ++v) eval_order_.push_back(level_begin + v);
      level_size /= 3;
    }
  }

  friend HtmrNetwork build_network(TmrOrder, std::vector<ModuleKind>, Probability);

  TmrOrder order_;
  std::vector<ModuleKind> leaves_;
  Probability voter_fault_rate_;
  std::vector<std::size_t> eval_order_;
};

[[nodiscard]] inline HtmrNetwork build_network(TmrOrder order, std::vector<ModuleKind> leaves,
                                               Probability voter_fault_rate) {
  if (order.value() < 1 || order.value() > kMaxNetworkOrder) {
    throw ConfigError("network order must be in [1, " + std::to_string(kMaxNetworkOrder) + "], got " +
                      std::to_string(order.value()));
  }
  if (leaves.size() != order.module_count()) {
    throw ConfigError("order " + std::to_string(order.value()) + " network needs " +
                      std::to_string(order.module_count()) + " leaves, got " + std::to_string(leaves.size()));
  }
  return HtmrNetwork(order, std::move(leaves), voter_fault_rate);
}

/// Every leaf of the same kind.
[[nodiscard]] inline HtmrNetwork build_network(TmrOrder order, const ModuleKind& uniform,
                                               Probability voter_fault_rate) {
  if (order.value() < 1 || order.value() > kMaxNetworkOrder) {
    return build_network(order, std::vector<ModuleKind>{}, voter_fault_rate);  // throws
  }
  return build_network(order, std::vector<ModuleKind>(order.module_count(), uniform), voter_fault_rate);
}

/// The scenario pattern repeated over every first-order leaf triple.
[[nodiscard]] inline HtmrNetwork build_network(TmrOrder order, ScenarioKind scenario, Probability rate,
                                               Probability voter_fault_rate) {
  if (order.value() < 1 || order.value() > kMaxNetworkOrder) {
    return build_network(order, std::vector<ModuleKind>{}, voter_fault_rate);  // throws
  }
  const Scenario triple = make_scenario(scenario, rate);
  std::vector<ModuleKind> leaves;
  leaves.reserve(order.module_count());
  for (std::uint64_t i = 0; i < order.module_count(); ++i) leaves.push_back(triple[i % 3]);
  return build_network(order, std::move(leaves), voter_fault_rate);
}

/// Reusable per-thread evaluation state for one network.
///
/// Draw order per bit: faulty leaves left to right, then (only when the voter
/// fault rate is non-zero) one draw per voter in evaluation order. A failed
/// voter forwards its first child un-voted; its alarm is still computed from
/// all three children.
class NetworkSimulator {
 public:
  explicit NetworkSimulator(const HtmrNetwork& net)
      : net_(&net), node_(net.voter_count() + net.leaf_count()), alarms_(net.voter_count()) {}

  Bit step(Bit reference, RandomSource& rng) {
    const std::size_t voters = net_->voter_count();
    const auto leaves = net_->leaves();
    for (std::size_t i = 0; i < leaves.size(); ++i) node_[voters + i] = module_output(leaves[i], reference, rng);

    const double voter_rate = net_->voter_fault_rate().value();
    for (std::size_t v : net_->evaluation_order()) {
      const auto c = HtmrNetwork::children(v);
      const TripleInput in{node_[c[0]], node_[c[1]], node_[c[2]]};
      const VoteOutcome out = vote_with_alarm(in);
      alarms_[v] = out.alarm;
      const bool failed = voter_rate > 0.0 && rng.uniform() < voter_rate;
      node_[v] = failed ? in.y1 : out.value;
    }
    return node_[0];
  }

  [[nodiscard]] std::span<const Bit> alarms() const noexcept { return alarms_; }

 private:
  const HtmrNetwork* net_;
  std::vector<Bit> node_;
  std::vector<Bit> alarms_;
};

struct BitResult {
  Bit output = Bit::Zero;
  std::vector<Bit> alarms;  // indexed by voter id
};

[[nodiscard]] inline BitResult simulate_bit(const HtmrNetwork& net, Bit reference_bit, RandomSource& rng) {
  NetworkSimulator sim(net);
  BitResult r;
  r.output = sim.step(reference_bit, rng);
  r.alarms.assign(sim.alarms().begin(), sim.alarms().end());
  return r;
}

[[nodiscard]] inline double binomial_standard_error(double p, std::uint64_t trials) {
  if (trials == 0) return 0.0;
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

struct EmpiricalEstimate {
  std::uint64_t trials = 0;
  std::uint64_t errors = 0;

  [[nodiscard]] double pe_hat() const noexcept {
    return trials == 0 ? 0.0 : static_cast<double>(errors) / static_cast<double>(trials);
  }
  [[nodiscard]] double std_err() const { return binomial_standard_error(pe_hat(), trials); }

  /// |pe_hat - expected| <= k standard errors, the standard error taken at the
  /// expected value (so expected 0 or 1 demands an exact count).
  [[nodiscard]] bool agrees_with(double expected, double k = 4.0) const {
    return std::abs(pe_hat() - expected) <= k * binomial_standard_error(expected, trials);
  }

  friend bool operator==(const EmpiricalEstimate&, const EmpiricalEstimate&) = default;
};

/// Alarm accumulator over a run of trials.
struct FaultStatusCounter {
  std::vector<std::uint64_t> voter_alarms;  // indexed by voter id
  std::uint64_t trials = 0;
  std::uint64_t trials_with_alarm = 0;

  void merge(const FaultStatusCounter& other) {
    if (voter_alarms.size() < other.voter_alarms.size()) voter_alarms.resize(other.voter_alarms.size(), 0);
    for (std::size_t i = 0; i < other.voter_alarms.size(); ++i) voter_alarms[i] += other.voter_alarms[i];
    trials += other.trials;
    trials_with_alarm += other.trials_with_alarm;
  }

  friend bool operator==(const FaultStatusCounter&, const FaultStatusCounter&) = default;
};

struct TrialResult {
  EmpiricalEstimate estimate;
  FaultStatusCounter alarms;

  friend bool operator==(const TrialResult&, const TrialResult&) = default;
};

namespace detail {

/// Runs `block_fn(first_trial, count, rng)` over fixed-size blocks in
/// parallel and merges block results in block order.
template <class BlockFn>
TrialResult run_blocks(std::uint64_t n, std::uint64_t seed, unsigned workers, BlockFn block_fn) {
  const std::uint64_t blocks = (n + kTrialBlockSize - 1) / kTrialBlockSize;
  std::vector<TrialResult> partial(blocks);

  auto run_block = [&](std::uint64_t b) {
    const std::uint64_t first = b * kTrialBlockSize;
    const std::uint64_t count = std::min(kTrialBlockSize, n - first);
    RandomSource rng = RandomSource::derive(seed, b);
    partial[b] = block_fn(first, count, rng);
  };

  const unsigned threads = static_cast<unsigned>(std::min<std::uint64_t>(std::max(workers, 1U), blocks));
  if (threads <= 1) {
    for (std::uint64_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::uint64_t b = next++; b < blocks; b = next++) run_block(b);
      });
    }
  }

  TrialResult total;
  for (const TrialResult& r : partial) {
    total.estimate.trials += r.estimate.trials;
    total.estimate.errors += r.estimate.errors;
    total.alarms.merge(r.alarms);
  }
  return total;
}

}  // namespace detail

/// Pushes n reference bits through the network. Block b of the run draws
/// from RandomSource::derive(seed, b); the result is identical for any
/// worker count.
[[nodiscard]] inline TrialResult run_trials(const HtmrNetwork& net, std::uint64_t n, ReferenceStream reference,
                                            std::uint64_t seed, unsigned workers = 1) {
  if (n == 0) throw ConfigError("run_trials requires at least one trial");
  TrialResult result = detail::run_blocks(n, seed, workers, [&](std::uint64_t first, std::uint64_t count,
                                                                RandomSource& rng) {
    NetworkSimulator sim(net);
    TrialResult r;
    r.alarms.voter_alarms.assign(net.voter_count(), 0);
    for (std::uint64_t t = first; t < first + count; ++t) {
      const Bit ref = reference.at(t);
      const Bit out = sim.step(ref, rng);
      if (out != ref) ++r.estimate.errors;
      bool any = false;
      const auto alarms = sim.alarms();
      for (std::size_t v = 0; v < alarms.size(); ++v) {
        if (alarms[v] == Bit::One) {
          ++r.alarms.voter_alarms[v];
          any = true;
        }
      }
      if (any) ++r.alarms.trials_with_alarm;
    }
    r.estimate.trials = count;
    r.alarms.trials = count;
    return r;
  });
  result.alarms.voter_alarms.resize(net.voter_count(), 0);
  return result;
}

/// Order-0 counterpart of run_trials: a single unprotected module.
[[nodiscard]] inline EmpiricalEstimate run_module_trials(const ModuleKind& module, std::uint64_t n,
                                                         ReferenceStream reference, std::uint64_t seed,
                                                         unsigned workers = 1) {
  if (n == 0) throw ConfigError("run_module_trials requires at least one trial");
  return detail::run_blocks(n, seed, workers,
                            [&](std::uint64_t first, std::uint64_t count, RandomSource& rng) {
                              TrialResult r;
                              for (std::uint64_t t = first; t < first + count; ++t) {
                                const Bit ref = reference.at(t);
                                if (module_output(module, ref, rng) != ref) ++r.estimate.errors;
                              }
                              r.estimate.trials = count;
                              r.alarms.trials = count;
                              return r;
                            })
      .estimate;
}

inline constexpr double kDefaultAlertLevel = 0.01;

struct HealthReport {
  std::vector<double> voter_alarm_frequency;  // indexed by voter id
  double aggregate_alarm_rate = 0.0;          // fraction of trials with any alarm
  double alert_level = kDefaultAlertLevel;
  std::vector<std::size_t> flagged_voters;    // frequency above alert_level
};

[[nodiscard]] inline HealthReport health_report(const FaultStatusCounter& counter,
                                                double alert_level = kDefaultAlertLevel) {
  if (counter.trials == 0) throw ConfigError("health report requires at least one observed trial");
  const double n = static_cast<double>(counter.trials);
  HealthReport report;
  report.alert_level = alert_level;
  report.aggregate_alarm_rate = static_cast<double>(counter.trials_with_alarm) / n;
  report.voter_alarm_frequency.reserve(counter.voter_alarms.size());
  for (std::size_t v = 0; v < counter.voter_alarms.size(); ++v) {
    const double f = static_cast<double>(counter.voter_alarms[v]) / n;
    report.voter_alarm_frequency.push_back(f);
    if (f > alert_level) report.flagged_voters.push_back(v);
  }
  return report;
}

}  // namespace htmr
