#include "pco/prf.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace pco {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EvaluationSingularity: return "evaluation-singularity";
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::InfiniteVoltage: return "infinite-voltage";
    case ErrorKind::EndpointSingularity: return "endpoint-singularity";
    case ErrorKind::InternalConsistency: return "internal-consistency";
    case ErrorKind::InvalidPrf: return "invalid-prf";
    case ErrorKind::Parse: return "parse-error";
  }
  return "unknown";
}

namespace {

std::string singularity_message(double phi, double eps, const std::string& where) {
  std::ostringstream os;
  os.precision(17);
  os << "evaluation-singularity at (phi=" << phi << ", eps=" << eps << ")";
  if (!where.empty()) os << " in " << where;
  return os.str();
}

}  // namespace

EvaluationSingularity::EvaluationSingularity(double phi, double eps, std::string where)
    : Error(ErrorKind::EvaluationSingularity, singularity_message(phi, eps, where)),
      phi_(phi),
      eps_(eps),
      where_(std::move(where)) {}

Phase::Phase(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "phase " << value << " outside [0,1]";
    throw Error(ErrorKind::InvalidParameter, os.str());
  }
}

Phase Phase::clamped(double value) {
  if (value >= 0.0 && value <= 1.0) return Phase(value);
  if (value < 0.0 && value >= -kPhaseClampTolerance) return Phase(0.0);
  if (value > 1.0 && value <= 1.0 + kPhaseClampTolerance) return Phase(1.0);
  std::ostringstream os;
  os.precision(17);
  os << "phase " << value << " left [0,1] beyond rounding tolerance";
  throw Error(ErrorKind::InternalConsistency, os.str());
}

Strength::Strength(double value) : value_(value) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    std::ostringstream os;
    os << "strength " << value << " must be finite and >= 0";
    throw Error(ErrorKind::InvalidParameter, os.str());
  }
}

PhaseResponse::PhaseResponse(std::string name, PrfFunction evaluate,
                             ExactPartials partials, Provenance provenance,
                             std::string source)
    : name_(std::move(name)),
      evaluate_(std::move(evaluate)),
      partials_(std::move(partials)),
      provenance_(provenance),
      source_(std::move(source)) {
  if (!evaluate_) {
    throw Error(ErrorKind::InvalidParameter, "response function '" + name_ + "' has no evaluator");
  }
}

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::Builtin: return "builtin";
    case Provenance::ParsedExpression: return "parsed-expression";
    case Provenance::InfinitesimalOf: return "infinitesimal-of";
  }
  return "unknown";
}

double eval_g(const PhaseResponse& prf, Phase phi, Strength eps) {
  const double g = prf(phi, eps);
  if (!std::isfinite(g)) throw EvaluationSingularity(phi, eps, prf.name());
  return g;
}

std::string to_string(Axiom a) {
  switch (a) {
    case Axiom::Eq1: return "Eq1";
    case Axiom::Eq2: return "Eq2";
    case Axiom::Eq3: return "Eq3";
    case Axiom::Eq4: return "Eq4";
    case Axiom::Eq5: return "Eq5";
    case Axiom::Eq6Smoothness: return "Eq6-smoothness";
  }
  return "unknown";
}

bool ValidationReport::all_passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

const AxiomCheck& ValidationReport::check(Axiom a) const {
  for (const auto& c : checks)
    if (c.axiom == a) return c;
  throw Error(ErrorKind::InvalidParameter, "axiom " + to_string(a) + " not in report");
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

double safe_eval(const PhaseResponse& prf, double phi, double eps) {
  try {
    const double g = prf(phi, eps);
    return std::isfinite(g) ? g : kNaN;
  } catch (const Error&) {
    return kNaN;
  }
}

// Keeps the largest violation seen; `fails` decides pass/fail per sample.
struct Tracker {
  AxiomCheck check;

  explicit Tracker(Axiom a) { check.axiom = a; }

  void observe(double violation, bool fails, double phi, double eps) {
    if (fails) check.passed = false;
    if (violation > check.worst_violation || (fails && check.worst_violation == 0.0)) {
      check.worst_violation = violation;
      check.phi = phi;
      check.eps = eps;
    }
  }

  void singular(double phi, double eps) {
    if (check.worst_violation != kInf) {
      check.note = "evaluation-singularity";
      check.phi = phi;
      check.eps = eps;
    }
    check.passed = false;
    check.worst_violation = kInf;
  }
};

}  // namespace

ValidationReport validate_prf(const PhaseResponse& prf, const std::vector<double>& eps_list,
                              int phi_count, ValidationOptions opts) {
  if (phi_count < 3) throw Error(ErrorKind::InvalidParameter, "phi_count must be >= 3");
  for (double e : eps_list) Strength{e};

  const auto n = static_cast<std::size_t>(phi_count);
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i)
    grid[i] = static_cast<double>(i) / static_cast<double>(n - 1);
  grid.back() = 1.0;

  Tracker eq1(Axiom::Eq1), eq2(Axiom::Eq2), eq3(Axiom::Eq3);
  Tracker eq4(Axiom::Eq4), eq5(Axiom::Eq5), eq6(Axiom::Eq6Smoothness);
  eq6.check.heuristic = true;
  eq6.check.note = "heuristic: C1 cannot be decided from samples";

  for (double phi : grid) {
    const double g = safe_eval(prf, phi, 0.0);
    if (std::isnan(g)) {
      eq1.singular(phi, 0.0);
      continue;
    }
    eq1.observe(std::abs(g), std::abs(g) > opts.tol, phi, 0.0);
  }

  std::vector<double> row(n);
  for (double eps : eps_list) {
    for (std::size_t i = 0; i < n; ++i) row[i] = safe_eval(prf, grid[i], eps);

    for (std::size_t i = 0; i < n; ++i) {
      const double phi = grid[i];
      const double g = row[i];
      if (std::isnan(g)) {
        eq2.singular(phi, eps);
        if (i > 0 && i + 1 < n && eps > 0.0) eq3.singular(phi, eps);
        if (i == 0) eq4.singular(phi, eps);
        if (i + 1 == n) eq5.singular(phi, eps);
        continue;
      }
      const double over = std::max(-phi - g, g - (1.0 - phi));
      eq2.observe(std::max(over, 0.0), over > opts.tol, phi, eps);
      if (i > 0 && i + 1 < n && eps > 0.0) {
        // Strict bounds, margin 0: touching either bound fails.
        eq3.observe(std::max(over, 0.0), over >= 0.0, phi, eps);
      }
      if (i == 0) eq4.observe(std::abs(g), std::abs(g) > opts.tol, phi, eps);
      if (i + 1 == n) eq5.observe(std::abs(g), std::abs(g) > opts.tol, phi, eps);
    }

    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (std::isnan(row[i]) || std::isnan(row[i + 1])) {
        eq6.singular(grid[i], eps);
        continue;
      }
      const double slope = std::abs(row[i + 1] - row[i]) / (grid[i + 1] - grid[i]);
      eq6.observe(slope > opts.slope_bound ? slope : 0.0, slope > opts.slope_bound, grid[i], eps);
    }
  }

  ValidationReport report;
  report.phi_count = phi_count;
  report.eps_list = eps_list;
  report.checks = {eq1.check, eq2.check, eq3.check, eq4.check, eq5.check, eq6.check};
  return report;
}

}  // namespace pco
