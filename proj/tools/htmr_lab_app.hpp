#pragma once

// Command-line front end for htmr-lab. Kept in a header so the test suites
// can drive it in-process.

#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "htmr/htmr.hpp"

namespace htmr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;

/// Grid flags shared by the sweep subcommands.
struct GridFlags {
  std::optional<double> pf;
  std::optional<double> pf_min;
  std::optional<double> pf_max;
  std::optional<std::size_t> pf_steps;
  std::string pf_scale = "lin";

  void attach(CLI::App& app) {
    app.add_option("--pf", pf, "Single module error probability");
    app.add_option("--pf-min", pf_min, "Grid minimum");
    app.add_option("--pf-max", pf_max, "Grid maximum");
    app.add_option("--pf-steps", pf_steps, "Grid point count");
    app.add_option("--pf-scale", pf_scale, "Grid spacing")->check(CLI::IsMember({"lin", "log"}));
  }

  [[nodiscard]] bool has_range() const { return pf_min || pf_max || pf_steps; }

  [[nodiscard]] PfGrid resolve(const PfGrid& fallback) const {
    if (pf && has_range()) throw ConfigError("--pf cannot be combined with --pf-min/--pf-max/--pf-steps");
    PfGrid grid = fallback;
    if (pf) {
      (void)Probability(*pf);
      grid = PfGrid::single(*pf);
    } else if (has_range()) {
      grid.min = pf_min.value_or(fallback.min);
      grid.max = pf_max.value_or(fallback.max);
      grid.points = pf_steps.value_or(fallback.points);
      grid.scale = pf_scale == "log" ? GridScale::Logarithmic : GridScale::Linear;
    } else if (pf_scale == "log") {
      grid.scale = GridScale::Logarithmic;
    }
    grid.validate();
    return grid;
  }
};

[[nodiscard]] inline PfmbMode parse_pfmb(const std::string& text) {
  if (text == "0") return PfmbMode::zero();
  if (text == "pf") return PfmbMode::equal_to_pf();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("--pfmb expects 0, pf or a probability, got '" + text + "'");
  }
  if (used != text.size()) throw ConfigError("--pfmb expects 0, pf or a probability, got '" + text + "'");
  return PfmbMode::fixed(Probability(v));
}

[[nodiscard]] inline ReferenceStream parse_reference(const std::string& text) {
  if (text == "zeros") return {ReferencePattern::Zeros};
  if (text == "ones") return {ReferencePattern::Ones};
  if (text == "alternating") return {ReferencePattern::Alternating};
  throw ConfigError("unknown reference pattern '" + text + "'");
}

/// Runs the CLI on `args` (args[0] is the program name). Documents go to
/// `out` unless --out is given; diagnostics go to `err`.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"htmr-lab: hierarchical TMR reliability models, fault injection and experiment reports",
               "htmr-lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  std::uint64_t seed = 1;
  std::string format = "csv";
  std::string out_path;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "Master seed");
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", out_path, "Output file (default: standard output)");
  };

  GridFlags grid;
  std::vector<unsigned> orders;
  std::optional<unsigned> order;
  std::string pfmb = "0";
  std::optional<std::uint64_t> trials;
  std::optional<std::string> scenario;
  unsigned workers = 1;
  std::string reference = "alternating";
  unsigned j_max = 5;
  double alert = kDefaultAlertLevel;

  auto sim_flags = [&](CLI::App* sub) {
    sub->add_option("--trials", trials, "Monte-Carlo trials per point");
    sub->add_option("--workers", workers, "Worker threads (output is identical for any count)")
        ->check(CLI::Range(1U, 256U));
    sub->add_option("--reference", reference, "Reference payload")
        ->check(CLI::IsMember({"zeros", "ones", "alternating"}));
  };

  auto* truth = app.add_subcommand("truth-table", "Voter and alarm truth table");
  common(truth);

  auto* analytic = app.add_subcommand("analytic", "Closed-form error probabilities and reduction rates");
  common(analytic);
  grid.attach(*analytic);
  analytic->add_option("--orders", orders, "Orders to evaluate")->delimiter(',');
  analytic->add_option("--pfmb", pfmb, "Voter error probability: 0, pf or a value");

  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo fault injection against the analytic model");
  common(simulate);
  grid.attach(*simulate);
  sim_flags(simulate);
  simulate->add_option("--order", order, "Single order to simulate");
  simulate->add_option("--orders", orders, "Orders to simulate")->delimiter(',');
  simulate->add_option("--pfmb", pfmb, "Voter error probability: 0, pf or a value");
  simulate->add_option("--scenario", scenario, "Faulty-module scenario")
      ->check(CLI::IsMember({"NNF", "NFF", "FFF"}));

  auto* scenarios = app.add_subcommand("scenarios", "N/F scenario suite for orders 1 and 2");
  common(scenarios);
  grid.attach(*scenarios);
  sim_flags(scenarios);
  scenarios->add_option("--orders", orders, "Orders to simulate")->delimiter(',');
  scenarios->add_option("--scenario", scenario, "Restrict to one scenario")
      ->check(CLI::IsMember({"NNF", "NFF", "FFF"}));

  auto* table3 = app.add_subcommand("table3", "Operations per output error");
  common(table3);

  auto* proposition = app.add_subcommand("proposition", "Check Pe_j < Pe_{j-1} for j = 2..j_max");
  common(proposition);
  grid.attach(*proposition);
  proposition->add_option("--jmax", j_max, "Highest order")->check(CLI::Range(2U, kDefaultMaxOrder));

  auto* audit = app.add_subcommand("audit", "Degree-9 expansion of the second-order recursion");
  common(audit);

  auto* low = app.add_subcommand("low-prob", "Reduction rates in the very-low pf region");
  common(low);
  grid.attach(*low);
  low->add_option("--trials", trials, "Monte-Carlo trials (only allowed for pf >= 1e-3)");
  low->add_option("--pfmb", pfmb, "Voter error probability: 0, pf or a value");

  auto* claims = app.add_subcommand("claims", "Second-order versus first-order reduction ratios");
  common(claims);
  grid.attach(*claims);

  auto* health = app.add_subcommand("health", "Alarm counts per voter (fault status counter)");
  common(health);
  grid.attach(*health);
  sim_flags(health);
  health->add_option("--order", order, "Network order");
  health->add_option("--pfmb", pfmb, "Voter error probability: 0, pf or a value");
  health->add_option("--scenario", scenario, "Faulty-module scenario")
      ->check(CLI::IsMember({"NNF", "NFF", "FFF"}));
  health->add_option("--alert", alert, "Per-voter alarm frequency that raises a flag")
      ->check(CLI::Range(0.0, 1.0));

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    auto sweep = [&](const PfGrid& fallback, std::vector<unsigned> default_orders) {
      SweepConfig cfg;
      cfg.grid = grid.resolve(fallback);
      cfg.orders = orders.empty() ? std::move(default_orders) : orders;
      if (order) cfg.orders = {*order};
      cfg.pfmb = parse_pfmb(pfmb);
      cfg.seed = seed;
      cfg.workers = workers;
      cfg.reference = parse_reference(reference);
      if (scenario) cfg.scenario = parse_scenario(*scenario);
      return cfg;
    };
    const PfGrid figure_grid = PfGrid::linear(0.0, 1.0, 21);

    OutputDocument doc;
    if (*truth) {
      doc = truth_table_document(seed);
    } else if (*analytic) {
      SweepConfig cfg = sweep(figure_grid, {0, 1, 2});
      doc = sweep_document("analytic", cfg, sweep_analytic(cfg));
    } else if (*simulate) {
      SweepConfig cfg = sweep(figure_grid, scenario ? std::vector<unsigned>{1, 2} : std::vector<unsigned>{1});
      cfg.trials = trials.value_or(10000);
      if (cfg.trials == 0) throw ConfigError("simulate requires --trials >= 1");
      if (cfg.scenario) {
        doc = scenario_document("simulate", cfg, scenario_suite(cfg));
      } else {
        doc = sweep_document("simulate", cfg, sweep_monte_carlo(cfg));
      }
    } else if (*scenarios) {
      SweepConfig cfg = sweep(PfGrid::linear(0.1, 0.9, 9), {1, 2});
      cfg.trials = trials.value_or(100000);
      doc = scenario_document("scenarios", cfg, scenario_suite(cfg));
    } else if (*table3) {
      doc = table3_document(seed);
    } else if (*proposition) {
      const PfGrid g = grid.resolve(PfGrid::single(0.1));
      if (g.points != 1) throw ConfigError("proposition takes a single --pf");
      doc = proposition_document(proposition_check(Probability(g.min), TmrOrder(j_max)), seed);
    } else if (*audit) {
      std::vector<Probability> samples;
      for (int i = 0; i <= 10; ++i) samples.emplace_back(i / 10.0);
      doc = audit_document(expansion_audit(samples), seed);
    } else if (*low) {
      SweepConfig cfg = sweep(PfGrid::logarithmic(1e-8, 1e-4, 41), {1, 2});
      cfg.trials = trials.value_or(0);
      doc = low_probability_document(cfg, low_probability_report(cfg));
    } else if (*claims) {
      const PfGrid g = grid.resolve(PfGrid::single(0.1));
      if (g.points != 1) throw ConfigError("claims takes a single --pf");
      doc = claims_document(reduction_claims_check(g.min), seed);
    } else if (*health) {
      const PfGrid g = grid.resolve(PfGrid::single(0.1));
      if (g.points != 1) throw ConfigError("health takes a single --pf");
      HealthRun run;
      run.order = order.value_or(1);
      run.pf = g.min;
      run.pfmb = parse_pfmb(pfmb).at(Probability(g.min)).value();
      if (scenario) run.scenario = parse_scenario(*scenario);
      const Probability pf(run.pf);
      const HtmrNetwork net = run.scenario
                                  ? build_network(TmrOrder(run.order), *run.scenario, pf, Probability(run.pfmb))
                                  : build_network(TmrOrder(run.order), ModuleKind::faulty(pf), Probability(run.pfmb));
      const std::uint64_t n = trials.value_or(100000);
      run.result = run_trials(net, n, parse_reference(reference), seed, workers);
      run.report = health_report(run.result.alarms, alert);
      doc = health_document(run, seed);
    }

    const OutputFormat fmt = parse_format(format);
    if (out_path.empty()) {
      write_document(out, doc, fmt);
    } else {
      std::ofstream file(out_path, std::ios::binary);
      if (!file) throw ConfigError("cannot open output file '" + out_path + "'");
      write_document(file, doc, fmt);
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace htmr::cli
