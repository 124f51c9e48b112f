#include "pco/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "pco/builtins.hpp"
#include "pco/calculus.hpp"
#include "pco/classify.hpp"
#include "pco/serialize.hpp"
#include "pco/strobe.hpp"
#include "pco/theta.hpp"

namespace pco::acceptance {

using std::numbers::pi;

bool CriterionResult::passed() const {
  if (seconds >= budget_seconds) return false;
  return !assertions.empty() &&
         std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.passed; });
}

namespace {

using Clock = std::chrono::steady_clock;

class Run {
 public:
  Run(int id, std::string name, double budget) : start_(Clock::now()) {
    r_.id = id;
    r_.name = std::move(name);
    r_.budget_seconds = budget;
  }

  void check(bool ok, const std::string& text) { r_.assertions.push_back({text, ok}); }

  CriterionResult finish() {
    r_.seconds = std::chrono::duration<double>(Clock::now() - start_).count();
    return r_;
  }

 private:
  CriterionResult r_;
  Clock::time_point start_;
};

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::vector<double> unit_grid(int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = static_cast<double>(i) / (n - 1);
  g.back() = 1.0;
  return g;
}

double eq27(double phi, double eps) {
  const double c = std::cos(2.0 * pi * phi);
  return phi + eps / (2.0 * pi) * c - eps / (2.0 * pi) * std::cos(2.0 * pi * phi + eps * c - eps);
}

}  // namespace

CriterionResult theta_identity() {
  Run run(1, "theta identity: strobe map of the theta neuron is the identity", 1.0);
  const PhaseResponse g = theta::theta_prf();
  for (double eps : {0.1, 1.0, 5.0, 10.0}) {
    double worst = 0.0;
    for (double phi : unit_grid(1001))
      worst = std::max(worst, std::abs(strobe_map(g, Phase(phi), Strength(eps)) - phi));
    run.check(worst <= 1e-9, "eps=" + num(eps) + ": max|F-phi| = " + num(worst) + " <= 1e-9");
  }
  return run.finish();
}

CriterionResult infinitesimal_strobe_map() {
  Run run(2, "infinitesimal strobe map matches its closed form", 1.0);
  const PhaseResponse gt = builtin_prf("theta-tilde");
  for (double eps : {0.1, 1.0, 5.0, 10.0}) {
    double worst_map = 0.0;
    double worst_formula = 0.0;
    int rejected = 0;
    for (double phi : unit_grid(1001)) {
      const double closed = eq27(phi, eps);
      worst_formula = std::max(worst_formula, std::abs(strobe_formula(gt, phi, eps) - closed));
      try {
        worst_map = std::max(worst_map, std::abs(strobe_map(gt, Phase(phi), Strength(eps)) - closed));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::InternalConsistency) throw;
        ++rejected;
      }
    }
    run.check(worst_map <= 1e-10, "eps=" + num(eps) + ": strobe_map max|F~ - closed form| = " +
                                      num(worst_map) + " <= 1e-10 over " + std::to_string(1001 - rejected) +
                                      " accepted points");
    run.check(worst_formula <= 1e-10,
              "eps=" + num(eps) + ": unchecked formula max|F~ - closed form| = " + num(worst_formula) + " <= 1e-10");
    if (eps <= 1.0)
      run.check(rejected == 0, "eps=" + num(eps) + ": every grid point accepted (g~ valid for eps <= 1)");
    else
      run.check(true, "eps=" + num(eps) + ": " + std::to_string(rejected) +
                          " points rejected (g~ is not a valid response function here)");
  }
  return run.finish();
}

CriterionResult cubic_expansion() {
  Run run(3, "cubic contraction of the infinitesimal strobe map near 0", 1.0);
  const PhaseResponse gt = builtin_prf("theta-tilde");
  const double eps = 0.1;
  const double expected = 2.0 * eps * eps * pi * pi;
  double rel = 0.0;
  for (double phi : {1e-2, 5e-3, 1e-3}) {
    const double coeff = (phi - strobe_map(gt, Phase(phi), Strength(eps)).value()) / (phi * phi * phi);
    rel = std::abs(coeff - expected) / expected;
    run.check(std::isfinite(coeff), "phi=" + num(phi) + ": (phi - F~)/phi^3 = " + num(coeff));
  }
  run.check(rel <= 0.01, "phi=0.001: relative error vs 2 eps^2 pi^2 = " + num(expected) + " is " + num(rel) +
                             " <= 1%");
  return run.finish();
}

CriterionResult theorem1() {
  Run run(4, "theorem 1: theta neuron neutral under g, attracting under g~", 10.0);
  const std::vector<double> eps_list = {0.1, 0.5, 1.0};
  const PhaseResponse g = theta::theta_prf();
  const FullReport rep = full_report(g, eps_list);
  const PhaseResponse gt = make_infinitesimal(g);
  IterationOptions it;
  it.max_iters = 1'000'000;
  it.conv_tol = 1e-12;
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    const std::string at = "eps=" + num(eps_list[i]) + ": ";
    const auto& ge = rep.exact[i];
    const auto& gte = rep.infinitesimal[i];
    run.check(ge.empirical_verdict == EmpiricalVerdict::Neutral,
              at + "g empirical " + to_string(*ge.empirical_verdict) + " == neutral");
    run.check(gte.empirical_verdict == EmpiricalVerdict::Attracting,
              at + "g~ empirical " + to_string(*gte.empirical_verdict) + " == attracting");
    run.check(gte.combined == CombinedVerdict::WeaklyAttracting,
              at + "g~ combined " + to_string(gte.combined) + " == weakly-attracting");
    const bool flagged = std::find(rep.disagreements.begin(), rep.disagreements.end(), eps_list[i]) !=
                         rep.disagreements.end();
    run.check(flagged, at + "g vs g~ disagreement flagged");
    const IterationTrace low = iterate(gt, Phase(0.1), Strength(eps_list[i]), it);
    const IterationTrace high = iterate(gt, Phase(0.9), Strength(eps_list[i]), it);
    run.check(low.verdict == Verdict::ConvergedTo0,
              at + "g~ from 0.1: " + to_string(low.verdict) + " after " + std::to_string(low.iters_used) + " iterations");
    run.check(high.verdict == Verdict::ConvergedTo1,
              at + "g~ from 0.9: " + to_string(high.verdict) + " after " + std::to_string(high.iters_used) + " iterations");
  }
  return run.finish();
}

CriterionResult theorem2_example1() {
  Run run(5, "theorem 2, example 1: slope 1 + eps^2, strongly repelling", 1.0);
  const PhaseResponse g = example1_prf();
  for (double eps : {0.01, 0.1, 0.5, 1.0}) {
    const StabilityReport r = classify_strong(g, Strength(eps));
    const double err = std::abs(r.derivative_product - (1.0 + eps * eps));
    run.check(err <= 1e-10, "eps=" + num(eps) + ": |product - (1+eps^2)| = " + num(err) + " <= 1e-10");
    run.check(r.strong_verdict == StrongVerdict::StronglyRepelling,
              "eps=" + num(eps) + ": " + to_string(r.strong_verdict));
  }
  return run.finish();
}

CriterionResult theorem2_example2() {
  Run run(6, "theorem 2, example 2: g~ strongly attracting, g strongly repelling", 1.0);
  const PhaseResponse g = example2_prf();
  for (double eps : {0.01, 0.1}) {
    const StabilityReport r = classify_strong(g, Strength(eps));
    const double expected = 1.0 + eps * eps - 2.0 * eps * eps * eps;
    const double err = std::abs(r.derivative_product - expected);
    run.check(err <= 1e-10, "eps=" + num(eps) + ": |product - (1+eps^2-2eps^3)| = " + num(err) + " <= 1e-10");
    run.check(r.strong_verdict == StrongVerdict::StronglyRepelling,
              "eps=" + num(eps) + ": " + to_string(r.strong_verdict));
  }
  const TildeReport t = classify_lemma3(g);
  run.check(t.exact, "corner partials from exact evaluators");
  run.check(std::abs(t.m0 - 1.0) <= 1e-6, "m0 = " + num(t.m0) + " (expected 1)");
  run.check(std::abs(t.m1 + 1.0) <= 1e-6, "m1 = " + num(t.m1) + " (expected -1)");
  run.check(t.lemma3_verdict == Lemma3Verdict::StronglyAttractingSmallEps, to_string(t.lemma3_verdict));
  run.check(!t.very_strong, "not very strongly attracting");
  return run.finish();
}

std::string corner_family_expression(double sign, double a, double b, double c) {
  std::ostringstream os;
  os << (sign < 0 ? "-" : "") << "eps*phi*(1-phi)*(" << format_double(a) << " + " << format_double(b)
     << "*(1-phi) + " << format_double(c) << "*(1-phi)^2)";
  return os.str();
}

CriterionResult theorem3_family() {
  Run run(7, "theorem 3: corner condition transfers from g~ to g", 5.0);
  std::mt19937_64 rng(20240607);
  std::uniform_real_distribution<double> coef(0.1, 1.0);
  const Strength eps(1e-2);
  int attract_ok = 0, repel_ok = 0;
  std::string first_failure;
  for (int i = 0; i < 20; ++i) {
    const double a = coef(rng), b = coef(rng), c = coef(rng);
    for (double sign : {-1.0, 1.0}) {
      const std::string src = corner_family_expression(sign, a, b, c);
      const PhaseResponse g = expr::checked_expression_prf(src, {eps.value()});
      const TildeReport t = classify_lemma3(g);
      const StabilityReport r = classify_strong(g, eps);
      bool ok;
      if (sign < 0) {
        ok = t.very_strong && r.strong_verdict == StrongVerdict::StronglyAttracting;
        attract_ok += ok;
      } else {
        ok = t.lemma3_verdict == Lemma3Verdict::StronglyRepellingSmallEps &&
             r.strong_verdict == StrongVerdict::StronglyRepelling;
        repel_ok += ok;
      }
      if (!ok && first_failure.empty()) first_failure = src;
    }
  }
  run.check(attract_ok == 20, std::to_string(attract_ok) +
                                  "/20 very strongly g~-attracting members strongly g-attracting at eps=0.01");
  run.check(repel_ok == 20,
            std::to_string(repel_ok) + "/20 strongly g~-repelling members strongly g-repelling at eps=0.01");
  if (!first_failure.empty()) run.check(false, "first failing member: " + first_failure);
  return run.finish();
}

CriterionResult lemma1_consistency() {
  Run run(8, "lemma 1: slope of F at both endpoints equals the corner product", 1.0);
  const double h = 1e-7;
  for (const auto& name : builtin_names()) {
    const PhaseResponse g = builtin_prf(name);
    double worst = 0.0;
    for (double eps : {0.01, 0.1, 0.5}) {
      const double product = sync_derivative(g, Strength(eps));
      const auto F = [&](double x) { return strobe_map(g, Phase(x), Strength(eps)).value(); };
      const double lo0 = 0.0, lo1 = 2.0 * h;
      const double hi0 = 1.0 - 2.0 * h, hi1 = 1.0;
      const double d0 = (F(lo1) - F(lo0)) / (lo1 - lo0);
      const double d1 = (F(hi1) - F(hi0)) / (hi1 - hi0);
      worst = std::max({worst, std::abs(d0 - product), std::abs(d1 - product)});
    }
    run.check(worst <= 1e-5, name + ": max |dF/dphi - product| = " + num(worst) + " <= 1e-5");
  }
  return run.finish();
}

CriterionResult oracle_equivalence() {
  Run run(9, "event simulation strobe samples equal fixed-point iteration", 5.0);
  std::mt19937_64 rng(777);
  std::uniform_int_distribution<std::size_t> pick(0, builtin_names().size() - 1);
  std::uniform_real_distribution<double> phase(0.01, 0.99);
  std::uniform_real_distribution<double> strength(0.0, 1.0);
  std::vector<PhaseResponse> prfs;
  for (const auto& n : builtin_names()) prfs.push_back(builtin_prf(n));

  // With conv_tol below every nonzero step, iteration stops early only on an
  // exact fixed point or at an endpoint, so the orbit continues with its
  // final value. A synchronized simulation stays at relative phase 0.
  IterationOptions it;
  it.max_iters = 50;
  it.conv_tol = 1e-300;
  it.cycle_window = 0;
  double worst = 0.0;
  int synchronized = 0;
  for (int i = 0; i < 100; ++i) {
    const PhaseResponse& g = prfs[pick(rng)];
    const double phi0 = phase(rng);
    const double eps = 1.0 - strength(rng);  // (0, 1]
    const auto events = simulate_events(g, Phase(0.0), Phase(phi0), Strength(eps), 100);
    auto samples = strobe_samples(events);
    if (events.back().synchronous) {
      ++synchronized;
      samples.resize(50, 0.0);
    }
    IterationTrace trace = iterate(g, Phase(phi0), Strength(eps), it);
    trace.phases.resize(51, trace.final_phase());
    for (std::size_t k = 0; k < 50; ++k) {
      const double d = std::abs(samples.at(k) - trace.phases[k + 1]);
      worst = std::max(worst, std::min(d, 1.0 - d));
    }
  }
  run.check(worst <= 1e-10, "100 configurations x 50 samples: max |simulation - iteration| = " + num(worst) +
                                " <= 1e-10 (" + std::to_string(synchronized) + " synchronized early)");
  return run.finish();
}

// ---------------------------------------------------------------------------
// Random expressions

namespace {

using expr::BinaryOp;
using expr::Expr;
using expr::UnaryOp;
using expr::Var;

Expr random_leaf(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind(0, 3);
  std::uniform_int_distribution<int> milli(250, 3000);
  switch (kind(rng)) {
    case 0: return Expr::variable(Var::Phi);
    case 1: return Expr::variable(Var::Eps);
    case 2: return Expr::constant(milli(rng) / 1000.0);
    default: return Expr::constant(pi);
  }
}

}  // namespace

expr::Expr random_expression(std::mt19937_64& rng, int max_depth) {
  if (max_depth <= 1) return random_leaf(rng);
  std::uniform_int_distribution<int> choice(0, 15);
  const int c = choice(rng);
  if (c < 2) return random_leaf(rng);
  if (c < 10) {
    static constexpr UnaryOp ops[] = {UnaryOp::Neg,  UnaryOp::Sin, UnaryOp::Cos, UnaryOp::Tan,
                                      UnaryOp::Atan, UnaryOp::Sqrt, UnaryOp::Exp, UnaryOp::Log};
    return Expr::unary(ops[c - 2], random_expression(rng, max_depth - 1));
  }
  static constexpr BinaryOp ops[] = {BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul, BinaryOp::Div, BinaryOp::Pow};
  const BinaryOp op = ops[(c - 10) % 5];
  Expr lhs = random_expression(rng, max_depth - 1);
  if (op == BinaryOp::Pow) {
    static constexpr double exps[] = {2.0, 3.0, 0.5, -1.0, 1.5};
    std::uniform_int_distribution<int> e(0, 4);
    return Expr::binary(op, lhs, Expr::constant(exps[e(rng)]));
  }
  return Expr::binary(op, lhs, random_expression(rng, max_depth - 1));
}

namespace {

void collect_productions(const Expr& e, std::set<std::string>& seen) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, expr::Constant>) {
          seen.insert(n.value == pi ? "pi" : "number");
        } else if constexpr (std::is_same_v<T, expr::Variable>) {
          seen.insert(n.var == Var::Phi ? "phi" : "eps");
        } else if constexpr (std::is_same_v<T, expr::Unary>) {
          seen.insert("unary" + std::to_string(static_cast<int>(n.op)));
          collect_productions(n.arg, seen);
        } else {
          seen.insert("binary" + std::to_string(static_cast<int>(n.op)));
          collect_productions(n.lhs, seen);
          collect_productions(n.rhs, seen);
        }
      },
      e.node().v);
}

// Five-point central difference of f along one variable.
template <class F>
double five_point(F&& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

struct PointCheck {
  bool usable = false;
  double rel_error = 0.0;
};

// Compares the symbolic derivative with finite differences at one point.
// Points where the difference quotient is not self-consistent under step
// halving are unusable as an oracle and are skipped.
PointCheck check_point(const Expr& e, const Expr& de, Var var, double phi, double eps) {
  PointCheck out;
  try {
    const double f0 = expr::eval(e, phi, eps);
    if (std::abs(f0) > 1e6) return out;
    const double x = var == Var::Phi ? phi : eps;
    auto f = [&](double t) { return var == Var::Phi ? expr::eval(e, t, eps) : expr::eval(e, phi, t); };
    const double fd1 = five_point(f, x, 1e-3);
    const double fd2 = five_point(f, x, 5e-4);
    const double scale = std::max(1.0, std::abs(fd2));
    if (std::abs(fd1 - fd2) > 1e-7 * scale) return out;
    const double sym = expr::eval(de, phi, eps);
    out.usable = true;
    out.rel_error = std::abs(sym - fd2) / std::max(1.0, std::abs(sym));
  } catch (const Error&) {
  }
  return out;
}

}  // namespace

CriterionResult dsl_derivatives() {
  Run run(10, "symbolic derivatives agree with finite differences", 5.0);
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> phi_d(0.05, 0.95);
  std::uniform_real_distribution<double> eps_d(0.05, 2.0);
  std::uniform_int_distribution<int> depth_d(2, 6);

  int accepted = 0, rejected = 0;
  double worst = 0.0;
  std::string worst_expr;
  std::set<std::string> seen;
  while (accepted < 200) {
    const Expr e = random_expression(rng, depth_d(rng));
    const Expr dphi = expr::diff(e, Var::Phi);
    const Expr deps = expr::diff(e, Var::Eps);
    double local_worst = 0.0;
    int points = 0;
    for (int attempt = 0; attempt < 400 && points < 20; ++attempt) {
      const double phi = phi_d(rng), eps = eps_d(rng);
      const PointCheck cp = check_point(e, dphi, Var::Phi, phi, eps);
      const PointCheck ce = check_point(e, deps, Var::Eps, phi, eps);
      if (!cp.usable || !ce.usable) continue;
      ++points;
      local_worst = std::max({local_worst, cp.rel_error, ce.rel_error});
    }
    if (points < 20) {
      ++rejected;
      continue;
    }
    ++accepted;
    collect_productions(e, seen);
    if (local_worst > worst) {
      worst = local_worst;
      worst_expr = expr::to_string(e);
    }
  }
  run.check(worst <= 1e-5, "200 expressions x 20 points, worst relative error " + num(worst) + " <= 1e-5" +
                               (worst_expr.empty() ? "" : " (" + worst_expr + ")"));
  run.check(seen.size() == 17, "corpus exercises " + std::to_string(seen.size()) + "/17 productions (" +
                                   std::to_string(rejected) + " generated expressions had no usable oracle domain)");
  return run.finish();
}

// ---------------------------------------------------------------------------

std::vector<std::function<CriterionResult()>> all_criteria() {
  return {theta_identity, infinitesimal_strobe_map, cubic_expansion,     theorem1,           theorem2_example1,
          theorem2_example2, theorem3_family,       lemma1_consistency, oracle_equivalence, dsl_derivatives};
}

const std::vector<std::string>& case_names() {
  static const std::vector<std::string> names = {"theorem1",       "theorem2-ex1",   "theorem2-ex2",
                                                 "theorem3",       "theta-identity", "cubic-expansion"};
  return names;
}

CriterionResult run_case(std::string_view name) {
  if (name == "theorem1") return theorem1();
  if (name == "theorem2-ex1") return theorem2_example1();
  if (name == "theorem2-ex2") return theorem2_example2();
  if (name == "theorem3") return theorem3_family();
  if (name == "theta-identity") return theta_identity();
  if (name == "cubic-expansion") return cubic_expansion();
  throw Error(ErrorKind::InvalidParameter, "unknown case '" + std::string(name) + "'");
}

void print(std::ostream& os, const CriterionResult& r) {
  for (const auto& a : r.assertions) os << "  [" << (a.passed ? "pass" : "FAIL") << "] " << a.text << '\n';
  std::ostringstream t;
  t.precision(3);
  t << std::fixed << r.seconds << " s (budget " << r.budget_seconds << " s)";
  os << (r.passed() ? "PASS" : "FAIL") << " #" << r.id << " " << r.name << " [" << t.str() << "]\n";
}

}  // namespace pco::acceptance
