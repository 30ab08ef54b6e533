#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "htmr/error.hpp"
#include "htmr/fault_model.hpp"
#include "htmr/network.hpp"
#include "htmr/reliability.hpp"
#include "htmr/types.hpp"

namespace htmr {

enum class GridScale : std::uint8_t { Linear, Logarithmic };

/// Grid of module error probabilities. A single point has min == max and
/// points == 1.
struct PfGrid {
  double min = 0.0;
  double max = 1.0;
  std::size_t points = 21;
  GridScale scale = GridScale::Linear;

  [[nodiscard]] static PfGrid single(double p) { return {p, p, 1, GridScale::Linear}; }
  [[nodiscard]] static PfGrid linear(double lo, double hi, std::size_t n) { return {lo, hi, n, GridScale::Linear}; }
  [[nodiscard]] static PfGrid logarithmic(double lo, double hi, std::size_t n) {
    return {lo, hi, n, GridScale::Logarithmic};
  }

  void validate() const {
    if (!(min >= 0.0 && min <= 1.0 && max >= 0.0 && max <= 1.0)) {
      throw RangeError("pf grid bounds must lie in [0,1]");
    }
    if (points == 0) throw ConfigError("pf grid needs at least one point");
    if (points == 1) {
      if (min != max) throw ConfigError("single-point pf grid needs min == max");
    } else if (!(min < max)) {
      throw ConfigError("pf grid requires min < max");
    }
    if (scale == GridScale::Logarithmic && min <= 0.0) {
      throw ConfigError("logarithmic pf grid requires min > 0");
    }
  }

  /// Strictly increasing grid values; the endpoints are exact.
  [[nodiscard]] std::vector<double> values() const {
    validate();
    std::vector<double> v(points);
    if (points == 1) {
      v[0] = min;
      return v;
    }
    const double last = static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
      const double t = static_cast<double>(i) / last;
      if (scale == GridScale::Linear) {
        v[i] = min + (max - min) * t;
      } else {
        v[i] = std::pow(10.0, std::log10(min) + (std::log10(max) - std::log10(min)) * t);
      }
    }
    v.front() = min;
    v.back() = max;
    return v;
  }
};

/// Voter/flip-flop error probability used at each grid point.
struct PfmbMode {
  enum class Kind : std::uint8_t { Zero, EqualToPf, Fixed };
  Kind kind = Kind::Zero;
  double value = 0.0;  // Fixed only

  [[nodiscard]] static PfmbMode zero() { return {}; }
  [[nodiscard]] static PfmbMode equal_to_pf() { return {Kind::EqualToPf, 0.0}; }
  [[nodiscard]] static PfmbMode fixed(Probability p) { return {Kind::Fixed, p.value()}; }

  [[nodiscard]] Probability at(Probability pf) const {
    switch (kind) {
      case Kind::Zero:
        return Probability(0.0);
      case Kind::EqualToPf:
        return pf;
      case Kind::Fixed:
        return Probability(value);
    }
    return Probability(0.0);
  }

  [[nodiscard]] std::string describe() const {
    switch (kind) {
      case Kind::Zero:
        return "0";
      case Kind::EqualToPf:
        return "pf";
      case Kind::Fixed: {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.12g", value);
        return buf;
      }
    }
    return "?";
  }
};

struct SweepConfig {
  PfGrid grid;
  std::vector<unsigned> orders{0, 1, 2};
  PfmbMode pfmb;
  std::uint64_t trials = 0;  // 0 = analytic only
  std::optional<ScenarioKind> scenario;  // empty = every scenario
  std::uint64_t seed = 1;
  unsigned workers = 1;
  ReferenceStream reference;

  void validate() const {
    grid.validate();
    if (orders.empty()) throw ConfigError("at least one order is required");
    for (unsigned j : orders) (void)TmrOrder(j);
    if (pfmb.kind == PfmbMode::Kind::Fixed) (void)Probability(pfmb.value);
  }
};

/// Analytic and (optionally) empirical quantities of one order at one pf.
struct OrderColumns {
  unsigned order = 0;
  double pe = 0.0;
  double pem = 0.0;
  std::optional<ReductionRate> re;   // absent at pf = 0
  std::optional<ReductionRate> rem;
  std::optional<double> re_per_module;  // re / 3^order
  std::optional<EmpiricalEstimate> empirical;
};

struct ComparisonRow {
  double pf = 0.0;
  std::optional<ScenarioKind> scenario;
  std::vector<OrderColumns> orders;

  [[nodiscard]] const OrderColumns& at(unsigned order) const {
    for (const auto& c : orders) {
      if (c.order == order) return c;
    }
    throw ConfigError("order " + std::to_string(order) + " not present in row");
  }
};

namespace detail {

inline void fill_reduction(OrderColumns& c, Probability pf) {
  if (pf.value() == 0.0) return;
  c.re = reduction_rate(pf, Probability(c.pe));
  c.rem = reduction_rate(pf, Probability(c.pem));
  c.re_per_module = c.re->decades() / static_cast<double>(TmrOrder(c.order).module_count());
}

inline OrderColumns analytic_columns(unsigned order, Probability pf, Probability pfmb) {
  OrderColumns c;
  c.order = order;
  const TmrOrder j(order);
  c.pe = pe_order(j, pf).value();
  c.pem = order == 0 ? pf.value() : pem_order(j, pf, pfmb).value();
  fill_reduction(c, pf);
  return c;
}

}  // namespace detail

[[nodiscard]] inline std::vector<ComparisonRow> sweep_analytic(const SweepConfig& cfg) {
  cfg.validate();
  std::vector<ComparisonRow> rows;
  for (double p : cfg.grid.values()) {
    const Probability pf(p);
    ComparisonRow row;
    row.pf = p;
    for (unsigned j : cfg.orders) row.orders.push_back(detail::analytic_columns(j, pf, cfg.pfmb.at(pf)));
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Analytic columns plus Monte-Carlo estimates. Point i, order j draws from
/// the stream family derive_seed(derive_seed(seed, i), j); order 0 simulates
/// a single unprotected module, order >= 1 a uniform network whose voters
/// fail with the configured pfmb.
[[nodiscard]] inline std::vector<ComparisonRow> sweep_monte_carlo(const SweepConfig& cfg) {
  if (cfg.trials == 0) throw ConfigError("Monte-Carlo sweep requires trials >= 1");
  std::vector<ComparisonRow> rows = sweep_analytic(cfg);
  for (unsigned j : cfg.orders) {
    if (j > kMaxNetworkOrder) {
      throw ConfigError("simulation order must be <= " + std::to_string(kMaxNetworkOrder));
    }
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Probability pf(rows[i].pf);
    const std::uint64_t point_seed = derive_seed(cfg.seed, i);
    for (OrderColumns& c : rows[i].orders) {
      const std::uint64_t seed = derive_seed(point_seed, c.order);
      if (c.order == 0) {
        c.empirical = run_module_trials(ModuleKind::faulty(pf), cfg.trials, cfg.reference, seed, cfg.workers);
      } else {
        const HtmrNetwork net = build_network(TmrOrder(c.order), ModuleKind::faulty(pf), cfg.pfmb.at(pf));
        c.empirical = run_trials(net, cfg.trials, cfg.reference, seed, cfg.workers).estimate;
      }
    }
  }
  return rows;
}

struct ScenarioRows {
  ScenarioKind scenario = ScenarioKind::FFF;
  std::vector<ComparisonRow> rows;
};

/// Per-scenario analytic and empirical error rates. Networks of order >= 2
/// repeat the scenario pattern over each first-order leaf triple. Voters are
/// fault-free; seeds nest as scenario -> point -> order.
[[nodiscard]] inline std::vector<ScenarioRows> scenario_suite(const SweepConfig& cfg) {
  cfg.validate();
  if (cfg.pfmb.kind != PfmbMode::Kind::Zero) {
    throw ConfigError("scenario suite models fault-free voters; pfmb must be 0");
  }
  for (unsigned j : cfg.orders) {
    if (j < 1 || j > kMaxNetworkOrder) {
      throw ConfigError("scenario orders must be in [1, " + std::to_string(kMaxNetworkOrder) + "]");
    }
  }

  std::vector<ScenarioKind> selected;
  if (cfg.scenario) {
    selected.push_back(*cfg.scenario);
  } else {
    selected.assign(kAllScenarios.begin(), kAllScenarios.end());
  }

  const std::vector<double> grid = cfg.grid.values();
  std::vector<ScenarioRows> out;
  for (ScenarioKind s : selected) {
    ScenarioRows block;
    block.scenario = s;
    const std::uint64_t scenario_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(s));
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Probability pf(grid[i]);
      ComparisonRow row;
      row.pf = grid[i];
      row.scenario = s;
      const std::uint64_t point_seed = derive_seed(scenario_seed, i);
      for (unsigned j : cfg.orders) {
        OrderColumns c;
        c.order = j;
        c.pe = scenario_error_probability(s, TmrOrder(j), pf).value();
        c.pem = c.pe;
        detail::fill_reduction(c, pf);
        if (cfg.trials > 0) {
          const HtmrNetwork net = build_network(TmrOrder(j), s, pf, Probability(0.0));
          c.empirical =
              run_trials(net, cfg.trials, cfg.reference, derive_seed(point_seed, j), cfg.workers).estimate;
        }
        row.orders.push_back(c);
      }
      block.rows.push_back(std::move(row));
    }
    out.push_back(std::move(block));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Operations-per-error table
// ---------------------------------------------------------------------------

struct PresentedCount {
  double exact = 0.0;      // 1 / pe
  double presented = 0.0;  // floored; two significant figures from 1000 up
  std::string text;
};

/// Floors to an integer; values of 1000 and above are additionally truncated
/// to two significant figures and written as "3.3e5".
[[nodiscard]] inline PresentedCount present_count(double exact) {
  PresentedCount out;
  out.exact = exact;
  // 1/0.001 and friends land a hair below the integer in binary.
  const double floored = std::floor(exact * (1.0 + 1e-12));
  char buf[64];
  if (floored < 1000.0) {
    out.presented = floored;
    std::snprintf(buf, sizeof buf, "%.0f", floored);
  } else {
    const int exponent = static_cast<int>(std::floor(std::log10(floored)));
    const double scale = std::pow(10.0, exponent - 1);
    const int mantissa = static_cast<int>(std::floor(floored / scale * (1.0 + 1e-12)));
    out.presented = mantissa * scale;
    std::snprintf(buf, sizeof buf, "%d.%de%d", mantissa / 10, mantissa % 10, exponent);
  }
  out.text = buf;
  return out;
}

struct Table3Row {
  double pf = 0.0;
  std::array<PresentedCount, 3> by_order;  // bare module, first order, second order
};

inline constexpr std::array<double, 5> kTable3Pf = {0.001, 0.01, 0.1, 0.3, 0.5};

[[nodiscard]] inline std::vector<Table3Row> table3_report() {
  std::vector<Table3Row> rows;
  for (double p : kTable3Pf) {
    Table3Row row;
    row.pf = p;
    for (unsigned j = 0; j < 3; ++j) {
      row.by_order[j] = present_count(operations_per_error(pe_order(TmrOrder(j), Probability(p))));
    }
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Low-probability region and reduction claims
// ---------------------------------------------------------------------------

inline constexpr double kLowProbabilityGridFloor = 1e-8;
inline constexpr double kMonteCarloFloor = 1e-3;

/// Orders 1 and 2 on a logarithmic grid. Analytic only below pf = 1e-3,
/// where the second-order error rate is far beyond any feasible trial count.
[[nodiscard]] inline std::vector<ComparisonRow> low_probability_report(const SweepConfig& cfg) {
  if (cfg.grid.scale != GridScale::Logarithmic && cfg.grid.points != 1) {
    throw ConfigError("low-probability report needs a logarithmic pf grid");
  }
  if (cfg.grid.min < kLowProbabilityGridFloor) {
    throw ConfigError("low-probability grid minimum must be >= 1e-8");
  }
  if (cfg.trials > 0 && cfg.grid.min < kMonteCarloFloor) {
    throw ConfigError(
        "empirical columns below pf = 1e-3 are infeasible: the second-order error rate there needs "
        "on the order of 1e10 or more trials; rerun with --trials 0");
  }
  SweepConfig c = cfg;
  c.orders = {1, 2};
  return c.trials > 0 ? sweep_monte_carlo(c) : sweep_analytic(c);
}

/// re_2 / 9 - re_1 / 3 for a row holding orders 1 and 2.
[[nodiscard]] inline double per_module_gap(const ComparisonRow& row) {
  const auto& first = row.at(1);
  const auto& second = row.at(2);
  if (!first.re_per_module || !second.re_per_module) throw DomainError("per-module rate undefined at pf = 0");
  return *second.re_per_module - *first.re_per_module;
}

struct ReductionClaims {
  double pf = 0.0;
  double pe1 = 0.0;
  double pe2 = 0.0;
  double unprotected_ratio = 0.0;  // pf / pe2
  double order_ratio = 0.0;        // (pf / pe2) / (pf / pe1)
  bool forty_times = false;        // unprotected_ratio > 40
  bool ten_times = false;          // order_ratio > 10
};

[[nodiscard]] inline ReductionClaims reduction_claims_check(double pf = 0.1) {
  const Probability p(pf);
  if (pf == 0.0) throw DomainError("reduction claims undefined at pf = 0");
  ReductionClaims r;
  r.pf = pf;
  r.pe1 = pe_order(TmrOrder(1), p).value();
  r.pe2 = pe_order(TmrOrder(2), p).value();
  r.unprotected_ratio = pf / r.pe2;
  r.order_ratio = r.unprotected_ratio / (pf / r.pe1);
  r.forty_times = r.unprotected_ratio > 40.0;
  r.ten_times = r.order_ratio > 10.0;
  return r;
}

}  // namespace htmr
