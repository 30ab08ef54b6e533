#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "htmr/harness.hpp"
#include "htmr/network.hpp"
#include "htmr/output.hpp"
#include "htmr/reliability.hpp"
#include "htmr/tmr_logic.hpp"

// Builders turning reports into output documents. Worker counts never reach
// a document, so output bytes depend only on configuration and seed.

namespace htmr {

namespace detail {

inline std::string join_orders(const std::vector<unsigned>& orders) {
  std::string s;
  for (std::size_t i = 0; i < orders.size(); ++i) s += (i ? "," : "") + std::to_string(orders[i]);
  return s;
}

inline std::string describe_grid(const PfGrid& g) {
  if (g.points == 1) return format_real(g.min);
  return format_real(g.min) + ":" + format_real(g.max) + ":" + std::to_string(g.points) +
         (g.scale == GridScale::Linear ? ":lin" : ":log");
}

inline std::string describe_reference(ReferenceStream r) {
  switch (r.pattern) {
    case ReferencePattern::Zeros:
      return "zeros";
    case ReferencePattern::Ones:
      return "ones";
    case ReferencePattern::Alternating:
      return "alternating";
  }
  return "?";
}

inline Cell rate_cell(const std::optional<ReductionRate>& r) {
  if (!r) return std::monostate{};
  return r->decades();
}

inline Cell optional_cell(const std::optional<double>& v) {
  if (!v) return std::monostate{};
  return *v;
}

inline void append_order_cells(std::vector<Cell>& row, const OrderColumns& c) {
  row.emplace_back(static_cast<std::int64_t>(c.order));
  row.emplace_back(c.pe);
  row.emplace_back(c.pem);
  row.push_back(rate_cell(c.re));
  row.push_back(rate_cell(c.rem));
  row.push_back(optional_cell(c.re_per_module));
  if (c.empirical) {
    row.emplace_back(c.empirical->pe_hat());
    row.emplace_back(c.empirical->std_err());
    row.emplace_back(static_cast<std::int64_t>(c.empirical->trials));
  } else {
    row.insert(row.end(), 3, std::monostate{});
  }
}

inline std::vector<std::pair<std::string, std::string>> sweep_config_echo(const SweepConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> echo{
      {"pf", describe_grid(cfg.grid)},
      {"orders", join_orders(cfg.orders)},
      {"pfmb", cfg.pfmb.describe()},
      {"trials", std::to_string(cfg.trials)},
  };
  if (cfg.trials > 0) {
    echo.emplace_back("reference", describe_reference(cfg.reference));
    echo.emplace_back("block", std::to_string(kTrialBlockSize));
  }
  return echo;
}

}  // namespace detail

inline const std::vector<std::string> kSweepColumns = {"pf", "order", "pe", "pem", "re",
                                                       "rem", "re_per_module", "pe_hat", "std_err", "trials"};

[[nodiscard]] inline OutputDocument truth_table_document(std::uint64_t seed) {
  OutputDocument doc;
  doc.metadata.command = "truth-table";
  doc.metadata.seed = seed;
  doc.columns = {"y1", "y2", "y3", "y", "alarm"};
  // Row order: y1 varies fastest.
  for (int i = 0; i < 8; ++i) {
    const TripleInput t{make_bit(i & 1), make_bit((i >> 1) & 1), make_bit((i >> 2) & 1)};
    const VoteOutcome v = vote_with_alarm(t);
    doc.add_row({std::int64_t{to_int(t.y1)}, std::int64_t{to_int(t.y2)}, std::int64_t{to_int(t.y3)},
                 std::int64_t{to_int(v.value)}, std::int64_t{to_int(v.alarm)}});
  }
  return doc;
}

[[nodiscard]] inline OutputDocument sweep_document(const std::string& command, const SweepConfig& cfg,
                                                   const std::vector<ComparisonRow>& rows) {
  OutputDocument doc;
  doc.metadata.command = command;
  doc.metadata.seed = cfg.seed;
  doc.metadata.config = detail::sweep_config_echo(cfg);
  if (cfg.trials > 0) doc.metadata.config.emplace_back("streams", "seed/point/order/block");
  doc.columns = kSweepColumns;
  for (const auto& row : rows) {
    for (const auto& c : row.orders) {
      std::vector<Cell> cells{row.pf};
      detail::append_order_cells(cells, c);
      doc.add_row(std::move(cells));
    }
  }
  return doc;
}

[[nodiscard]] inline OutputDocument scenario_document(const std::string& command, const SweepConfig& cfg,
                                                      const std::vector<ScenarioRows>& blocks) {
  OutputDocument doc;
  doc.metadata.command = command;
  doc.metadata.seed = cfg.seed;
  doc.metadata.config = detail::sweep_config_echo(cfg);
  doc.metadata.config.emplace_back("scenario", cfg.scenario ? std::string(to_string(*cfg.scenario)) : "all");
  doc.metadata.config.emplace_back("scenario_mapping", "per-triple");
  if (cfg.trials > 0) doc.metadata.config.emplace_back("streams", "seed/scenario/point/order/block");
  doc.columns = {"scenario"};
  doc.columns.insert(doc.columns.end(), kSweepColumns.begin(), kSweepColumns.end());
  for (const auto& block : blocks) {
    for (const auto& row : block.rows) {
      for (const auto& c : row.orders) {
        std::vector<Cell> cells{std::string(to_string(block.scenario)), row.pf};
        detail::append_order_cells(cells, c);
        doc.add_row(std::move(cells));
      }
    }
  }
  return doc;
}

[[nodiscard]] inline OutputDocument table3_document(std::uint64_t seed) {
  OutputDocument doc;
  doc.metadata.command = "table3";
  doc.metadata.seed = seed;
  doc.metadata.config = {{"presentation", "floor,2sf>=1000"}};
  doc.columns = {"pf", "data_path", "first_order", "second_order"};
  for (const auto& row : table3_report()) {
    doc.add_row({row.pf, row.by_order[0].text, row.by_order[1].text, row.by_order[2].text});
  }
  return doc;
}

[[nodiscard]] inline OutputDocument proposition_document(const PropositionCheck& check, std::uint64_t seed) {
  OutputDocument doc;
  doc.metadata.command = "proposition";
  doc.metadata.seed = seed;
  doc.metadata.config = {{"pf", format_real(check.pf)},
                         {"j_max", std::to_string(check.steps.empty() ? 0 : check.steps.back().order)}};
  doc.columns = {"pf", "j", "pe", "verdict"};
  for (const auto& step : check.steps) {
    Cell verdict = std::monostate{};
    if (step.decreasing) verdict = std::string(*step.decreasing ? "holds" : "violated");
    doc.add_row({check.pf, std::int64_t{step.order}, step.pe, verdict});
  }
  doc.add_row({check.pf, std::string("overall"), std::monostate{}, std::string(check.holds ? "holds" : "violated")});
  return doc;
}

[[nodiscard]] inline OutputDocument audit_document(const ExpansionAudit& audit, std::uint64_t seed) {
  auto join = [](const std::vector<double>& c) {
    std::string s;
    for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + format_real(c[i]);
    return s;
  };
  OutputDocument doc;
  doc.metadata.command = "audit";
  doc.metadata.seed = seed;
  doc.metadata.config = {{"derived_coefficients", join(audit.derived_coefficients)},
                         {"printed_coefficients", join(audit.printed_coefficients)},
                         {"max_printed_deviation", format_real(audit.max_printed_deviation)},
                         {"max_derived_deviation", format_real(audit.max_derived_deviation)}};
  doc.columns = {"p", "composition", "printed", "derived", "printed_deviation", "derived_deviation"};
  for (const auto& s : audit.samples) {
    doc.add_row({s.p, s.composition, s.printed, s.derived, s.printed_deviation, s.derived_deviation});
  }
  return doc;
}

[[nodiscard]] inline OutputDocument low_probability_document(const SweepConfig& cfg,
                                                             const std::vector<ComparisonRow>& rows) {
  OutputDocument doc;
  doc.metadata.command = "low-prob";
  doc.metadata.seed = cfg.seed;
  SweepConfig shown = cfg;
  shown.orders = {1, 2};
  doc.metadata.config = detail::sweep_config_echo(shown);
  doc.columns = {"pf", "pe1", "pe2", "re1", "re2", "re1_per_module", "re2_per_module", "per_module_gap"};
  for (const auto& row : rows) {
    const auto& a = row.at(1);
    const auto& b = row.at(2);
    doc.add_row({row.pf, a.pe, b.pe, detail::rate_cell(a.re), detail::rate_cell(b.re),
                 detail::optional_cell(a.re_per_module), detail::optional_cell(b.re_per_module),
                 row.pf > 0.0 ? Cell{per_module_gap(row)} : Cell{}});
  }
  return doc;
}

[[nodiscard]] inline OutputDocument claims_document(const ReductionClaims& r, std::uint64_t seed) {
  OutputDocument doc;
  doc.metadata.command = "claims";
  doc.metadata.seed = seed;
  doc.columns = {"pf", "pe1", "pe2", "unprotected_ratio", "order_ratio", "forty_times", "ten_times"};
  doc.add_row({r.pf, r.pe1, r.pe2, r.unprotected_ratio, r.order_ratio, std::string(r.forty_times ? "true" : "false"),
               std::string(r.ten_times ? "true" : "false")});
  return doc;
}

struct HealthRun {
  unsigned order = 1;
  double pf = 0.0;
  double pfmb = 0.0;
  std::optional<ScenarioKind> scenario;
  TrialResult result;
  HealthReport report;
};

[[nodiscard]] inline OutputDocument health_document(const HealthRun& run, std::uint64_t seed) {
  OutputDocument doc;
  doc.metadata.command = "health";
  doc.metadata.seed = seed;
  doc.metadata.config = {{"order", std::to_string(run.order)},
                         {"pf", format_real(run.pf)},
                         {"pfmb", format_real(run.pfmb)},
                         {"scenario", run.scenario ? std::string(to_string(*run.scenario)) : "uniform"},
                         {"trials", std::to_string(run.result.alarms.trials)},
                         {"alert_level", format_real(run.report.alert_level)},
                         {"aggregate_alarm_rate", format_real(run.report.aggregate_alarm_rate)},
                         {"errors", std::to_string(run.result.estimate.errors)}};
  doc.columns = {"voter", "alarms", "frequency", "flagged"};
  for (std::size_t v = 0; v < run.report.voter_alarm_frequency.size(); ++v) {
    bool flagged = false;
    for (std::size_t f : run.report.flagged_voters) flagged = flagged || f == v;
    doc.add_row({static_cast<std::int64_t>(v), static_cast<std::int64_t>(run.result.alarms.voter_alarms[v]),
                 run.report.voter_alarm_frequency[v], std::string(flagged ? "yes" : "no")});
  }
  return doc;
}

}  // namespace htmr
