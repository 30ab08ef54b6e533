#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "htmr/error.hpp"
#include "htmr/types.hpp"

namespace htmr {

// ---------------------------------------------------------------------------
// Closed-form and recursive error-probability models
// ---------------------------------------------------------------------------

[[nodiscard]] inline Probability complement(Probability pf) { return Probability(1.0 - pf.value()); }

/// Output error probability of a first-order TMR with fault-free voter:
/// 3p^2 - 2p^3.
[[nodiscard]] inline double pe_first(double p) noexcept { return p * p * (3.0 - 2.0 * p); }

[[nodiscard]] inline Probability pe_first(Probability pf) { return clamped_probability(pe_first(pf.value())); }

/// First-order TMR whose voter/flip-flop itself fails with probability pfmb.
[[nodiscard]] inline Probability pem_first(Probability pf, Probability pfmb) {
  const double f = pf.value();
  const double m = pfmb.value();
  return clamped_probability(f * m + pe_first(f) * (1.0 - m));
}

/// Error probability of an order-j hierarchy; order 0 is the bare module.
[[nodiscard]] inline Probability pe_order(TmrOrder j, Probability pf) {
  double pe = pf.value();
  for (unsigned k = 0; k < j.value(); ++k) pe = pe_first(pe);
  return clamped_probability(pe);
}

/// Order-j hierarchy with faulty voters:
///   Pem_j = Pem_{j-1} * pfmb + Pe_j * (1 - pfmb),  Pem_1 = pem_first(pf, pfmb).
/// Pe_j here is the fault-free-voter chain, so for j >= 2 this is the analytic
/// recursion and not the structural pass-through network's exact rate.
[[nodiscard]] inline Probability pem_order(TmrOrder j, Probability pf, Probability pfmb) {
  if (j.value() == 0) throw DomainError("pem_order requires order >= 1");
  const double m = pfmb.value();
  double pe = pe_first(pf.value());
  double pem = pem_first(pf, pfmb).value();
  for (unsigned k = 2; k <= j.value(); ++k) {
    pe = pe_first(pe);
    pem = pem * m + pe * (1.0 - m);
  }
  return clamped_probability(pem);
}

/// log10(pf / pe); infinite when pe == 0.
[[nodiscard]] inline ReductionRate reduction_rate(Probability pf, Probability pe) {
  if (pf.value() == 0.0) throw DomainError("reduction rate undefined for pf = 0");
  if (pe.value() == 0.0) return ReductionRate::infinite();
  return ReductionRate(std::log10(pf.value() / pe.value()));
}

/// Expected number of operations per output error, 1/pe.
[[nodiscard]] inline double operations_per_error(Probability pe) {
  if (pe.value() == 0.0) throw DomainError("no errors expected (pe = 0)");
  return 1.0 / pe.value();
}

/// First-order output error probability when only the modules marked F in the
/// scenario fail (each with probability pf) and the voter is fault-free.
[[nodiscard]] inline Probability scenario_error_probability(ScenarioKind s, Probability pf) {
  const double p = pf.value();
  switch (s) {
    case ScenarioKind::NNF:
      return Probability(0.0);
    case ScenarioKind::NFF:
      return clamped_probability(p * p);
    case ScenarioKind::FFF:
      return pe_first(pf);
  }
  return Probability(0.0);
}

/// Scenario pattern replicated over every first-order triple of an order-j
/// network: the triples err independently with the first-order scenario
/// probability and the remaining j-1 levels compose as usual.
[[nodiscard]] inline Probability scenario_error_probability(ScenarioKind s, TmrOrder j, Probability pf) {
  if (j.value() == 0) throw DomainError("scenario model requires order >= 1");
  return pe_order(TmrOrder(j.value() - 1), scenario_error_probability(s, pf));
}

// ---------------------------------------------------------------------------
// Polynomial expansion of the composed recursion
// ---------------------------------------------------------------------------

/// Dense real polynomial, coefficients in ascending powers.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coefficients) : c_(std::move(coefficients)) { trim(); }

  [[nodiscard]] std::span<const double> coefficients() const noexcept { return c_; }
  [[nodiscard]] std::size_t degree() const noexcept { return c_.empty() ? 0 : c_.size() - 1; }

  [[nodiscard]] double operator()(double x) const noexcept {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<double> out(std::max(a.c_.size(), b.c_.size()), 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) out[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) out[i] += b.c_[i];
    return Polynomial(std::move(out));
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.c_.empty() || b.c_.empty()) return {};
    std::vector<double> out(a.c_.size() + b.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      for (std::size_t k = 0; k < b.c_.size(); ++k) out[i + k] += a.c_[i] * b.c_[k];
    }
    return Polynomial(std::move(out));
  }

  /// this(inner(x))
  [[nodiscard]] Polynomial compose(const Polynomial& inner) const {
    Polynomial acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * inner + Polynomial({*it});
    return acc;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
  }

  std::vector<double> c_;
};

/// 3p^2 - 2p^3
[[nodiscard]] inline Polynomial majority_error_polynomial() { return Polynomial({0.0, 0.0, 3.0, -2.0}); }

/// Two levels of the recursion expanded into a single degree-9 polynomial.
[[nodiscard]] inline Polynomial second_order_expansion() {
  const Polynomial f = majority_error_polynomial();
  return f.compose(f);
}

/// The degree-9 expansion as printed in the source derivation; its p^5, p^7,
/// p^8 and p^9 terms do not follow from composing the recursion.
[[nodiscard]] inline Polynomial printed_second_order_expansion() {
  return Polynomial({0.0, 0.0, 0.0, 0.0, 27.0, -18.0, -42.0, -72.0, 48.0, -16.0});
}

struct AuditSample {
  double p = 0.0;
  double composition = 0.0;  // pe_first(pe_first(p))
  double printed = 0.0;
  double derived = 0.0;
  double printed_deviation = 0.0;  // |printed - composition|
  double derived_deviation = 0.0;  // |derived - composition|
};

struct ExpansionAudit {
  std::vector<double> derived_coefficients;
  std::vector<double> printed_coefficients;
  std::vector<AuditSample> samples;
  double max_printed_deviation = 0.0;
  double max_derived_deviation = 0.0;
};

[[nodiscard]] inline ExpansionAudit expansion_audit(std::span<const Probability> samples) {
  const Polynomial derived = second_order_expansion();
  const Polynomial printed = printed_second_order_expansion();

  ExpansionAudit audit;
  audit.derived_coefficients.assign(derived.coefficients().begin(), derived.coefficients().end());
  audit.printed_coefficients.assign(printed.coefficients().begin(), printed.coefficients().end());
  audit.samples.reserve(samples.size());
  for (const Probability& sample : samples) {
    AuditSample s;
    s.p = sample.value();
    s.composition = pe_first(pe_first(s.p));
    s.printed = printed(s.p);
    s.derived = derived(s.p);
    s.printed_deviation = std::abs(s.printed - s.composition);
    s.derived_deviation = std::abs(s.derived - s.composition);
    audit.max_printed_deviation = std::max(audit.max_printed_deviation, s.printed_deviation);
    audit.max_derived_deviation = std::max(audit.max_derived_deviation, s.derived_deviation);
    audit.samples.push_back(s);
  }
  return audit;
}

// ---------------------------------------------------------------------------
// Monotone improvement with order
// ---------------------------------------------------------------------------

struct PropositionStep {
  unsigned order = 0;
  double pe = 0.0;
  /// Pe_j < Pe_{j-1}; empty for the first entry.
  std::optional<bool> decreasing;
};

struct PropositionCheck {
  double pf = 0.0;
  std::vector<PropositionStep> steps;  // orders 1..j_max
  bool holds = false;                  // every adjacent pair strictly decreasing
};

/// Evaluates Pe_1..Pe_jmax and checks strict decrease between neighbours.
/// A failed check is a result, not an error: above pf = 0.5 the recursion
/// moves away from the 0.5 fixed point and the error probability grows.
[[nodiscard]] inline PropositionCheck proposition_check(Probability pf, TmrOrder j_max) {
  if (j_max.value() < 2) throw DomainError("proposition check requires j_max >= 2");
  PropositionCheck check;
  check.pf = pf.value();
  check.holds = true;
  double pe = pf.value();
  for (unsigned j = 1; j <= j_max.value(); ++j) {
    const double next = pe_first(pe);
    PropositionStep step{j, next, std::nullopt};
    if (j > 1) {
      step.decreasing = next < pe;
      check.holds = check.holds && *step.decreasing;
    }
    check.steps.push_back(step);
    pe = next;
  }
  return check;
}

}  // namespace htmr
