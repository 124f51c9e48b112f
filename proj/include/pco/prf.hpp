#pragma once

// Phase response functions g(phi, eps) for pulse-coupled phase oscillators,
// and a grid-based checker for the axioms every response function must obey:
//
//   Eq1  g(phi, 0) = 0
//   Eq2  -phi <= g(phi, eps) <= 1 - phi           (closed, all phi)
//   Eq3  -phi <  g(phi, eps) <  1 - phi           (strict, interior phi)
//   Eq4  g(0, eps) = 0
//   Eq5  g(1, eps) = 0
//   Eq6  g is C^1 (heuristic: bounded finite-difference slopes)

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pco/error.hpp"

namespace pco {

/// Rounding slack tolerated when a phase leaves [0,1]; it is clamped back.
inline constexpr double kPhaseClampTolerance = 1e-12;

/// Oscillator phase, always in [0,1]. Phases 0 and 1 are distinct states.
class Phase {
 public:
  constexpr Phase() = default;

  /// Throws InvalidParameter outside [0,1]. No clamping.
  explicit Phase(double value);

  /// Clamps excursions up to kPhaseClampTolerance; larger ones throw
  /// InternalConsistency.
  static Phase clamped(double value);

  constexpr double value() const noexcept { return value_; }
  constexpr operator double() const noexcept { return value_; }

 private:
  double value_ = 0.0;
};

/// Pulse strength eps >= 0.
class Strength {
 public:
  constexpr Strength() = default;
  explicit Strength(double value);

  constexpr double value() const noexcept { return value_; }
  constexpr operator double() const noexcept { return value_; }

 private:
  double value_ = 0.0;
};

using PrfFunction = std::function<double(double phi, double eps)>;

/// Optional closed-form partial derivatives of a response function.
struct ExactPartials {
  PrfFunction dphi;        // dg/dphi
  PrfFunction deps;        // dg/deps
  PrfFunction d2_phi_eps;  // d2g/dphi deps
};

enum class Provenance { Builtin, ParsedExpression, InfinitesimalOf };

/// A named, immutable response function. Copies share the evaluators.
class PhaseResponse {
 public:
  PhaseResponse(std::string name, PrfFunction evaluate,
                ExactPartials partials = {},
                Provenance provenance = Provenance::Builtin,
                std::string source = {});

  const std::string& name() const noexcept { return name_; }
  Provenance provenance() const noexcept { return provenance_; }
  /// For InfinitesimalOf, the parent's name; for ParsedExpression, the text.
  const std::string& source() const noexcept { return source_; }

  /// Raw evaluation, no finiteness check. Prefer eval_g().
  double operator()(double phi, double eps) const { return evaluate_(phi, eps); }

  const ExactPartials& partials() const noexcept { return partials_; }
  bool has_exact_dphi() const noexcept { return bool(partials_.dphi); }
  bool has_exact_deps() const noexcept { return bool(partials_.deps); }
  bool has_exact_d2() const noexcept { return bool(partials_.d2_phi_eps); }

  const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

  /// Largest sampled eps at which the axioms held, when that was measured.
  std::optional<double> valid_eps_max() const noexcept { return valid_eps_max_; }
  void set_valid_eps_max(std::optional<double> v) { valid_eps_max_ = v; }

 private:
  std::string name_;
  PrfFunction evaluate_;
  ExactPartials partials_;
  Provenance provenance_;
  std::string source_;
  std::vector<std::string> warnings_;
  std::optional<double> valid_eps_max_;
};

std::string to_string(Provenance p);

/// g(phi, eps). Throws EvaluationSingularity on a non-finite result.
double eval_g(const PhaseResponse& prf, Phase phi, Strength eps);

enum class Axiom { Eq1, Eq2, Eq3, Eq4, Eq5, Eq6Smoothness };

std::string to_string(Axiom a);

struct AxiomCheck {
  Axiom axiom = Axiom::Eq1;
  bool passed = true;
  /// Largest amount by which the axiom was violated (0 when passed).
  double worst_violation = 0.0;
  double phi = 0.0;
  double eps = 0.0;
  bool heuristic = false;
  std::string note;
};

struct ValidationOptions {
  double tol = 1e-9;
  double slope_bound = 1e6;
};

struct ValidationReport {
  std::vector<AxiomCheck> checks;
  int phi_count = 0;
  std::vector<double> eps_list;

  bool all_passed() const;
  const AxiomCheck& check(Axiom a) const;
};

/// Samples every axiom on a uniform grid of phi_count points crossed with
/// eps_list. Evaluation singularities become failed checks.
ValidationReport validate_prf(const PhaseResponse& prf,
                              const std::vector<double>& eps_list,
                              int phi_count = 1001,
                              ValidationOptions opts = {});

}  // namespace pco
