#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "pco/builtins.hpp"
#include "pco/expr.hpp"
#include "pco/prf.hpp"
#include "pco/theta.hpp"

using namespace pco;

namespace {

std::vector<double> log_spaced_eps() {
  std::vector<double> out;
  for (int k = -3; k <= 1; ++k) out.push_back(std::pow(10.0, k));
  return out;
}

}  // namespace

TEST(Phase, RejectsValuesOutsideUnitInterval) {
  EXPECT_NO_THROW(Phase(0.0));
  EXPECT_NO_THROW(Phase(1.0));
  EXPECT_THROW(Phase(-1e-15), Error);
  EXPECT_THROW(Phase(1.0 + 1e-15), Error);
  EXPECT_THROW(Phase(std::numeric_limits<double>::quiet_NaN()), Error);
}

TEST(Phase, ClampsRoundingExcursionsOnly) {
  EXPECT_EQ(Phase::clamped(-1e-13).value(), 0.0);
  EXPECT_EQ(Phase::clamped(1.0 + 1e-13).value(), 1.0);
  EXPECT_EQ(Phase::clamped(0.25).value(), 0.25);
  try {
    Phase::clamped(1.0 + 1e-9);
    FAIL() << "expected InternalConsistency";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InternalConsistency);
  }
}

TEST(Strength, MustBeNonNegativeAndFinite) {
  EXPECT_NO_THROW(Strength(0.0));
  EXPECT_THROW(Strength(-0.1), Error);
  EXPECT_THROW(Strength(std::numeric_limits<double>::infinity()), Error);
}

TEST(EvalG, ThetaExamples) {
  const PhaseResponse g = theta::theta_prf();
  EXPECT_EQ(eval_g(g, Phase(0.3), Strength(0.0)), 0.0);
  EXPECT_NEAR(eval_g(g, Phase(0.5), Strength(1.0)), 0.25, 1e-15);
  EXPECT_EQ(eval_g(g, Phase(1.0), Strength(7.3)), 0.0);
}

TEST(EvalG, NonFiniteResultReportsLocation) {
  const PhaseResponse g("bad", [](double phi, double) { return 1.0 / (phi - 0.5); });
  try {
    eval_g(g, Phase(0.5), Strength(0.2));
    FAIL() << "expected EvaluationSingularity";
  } catch (const EvaluationSingularity& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EvaluationSingularity);
    EXPECT_EQ(e.phi(), 0.5);
    EXPECT_EQ(e.eps(), 0.2);
  }
}

TEST(Validate, ThetaPassesEveryAxiom) {
  const ValidationReport r = validate_prf(theta::theta_prf(), {0.1, 1.0, 5.0}, 1001);
  EXPECT_TRUE(r.all_passed());
  EXPECT_EQ(r.phi_count, 1001);
  EXPECT_EQ(r.checks.size(), 6u);
  EXPECT_TRUE(r.check(Axiom::Eq6Smoothness).heuristic);
}

TEST(Validate, ZeroPassesOnAnyGrid) {
  for (int n : {3, 17, 1001}) EXPECT_TRUE(validate_prf(zero_prf(), {0.0, 0.5, 3.0}, n).all_passed());
}

TEST(Validate, ConstantEpsFailsCornerAxioms) {
  const PhaseResponse g = expr::expression_prf(expr::parse("eps"), "eps");
  const ValidationReport r = validate_prf(g, {0.5}, 101);
  EXPECT_FALSE(r.all_passed());
  EXPECT_FALSE(r.check(Axiom::Eq4).passed);
  EXPECT_FALSE(r.check(Axiom::Eq5).passed);
  EXPECT_NEAR(r.check(Axiom::Eq4).worst_violation, 0.5, 1e-15);
  EXPECT_EQ(r.check(Axiom::Eq4).phi, 0.0);
  EXPECT_EQ(r.check(Axiom::Eq4).eps, 0.5);
}

TEST(Validate, SingularityBecomesFailedCheck) {
  const PhaseResponse g("log", [](double phi, double eps) { return eps * phi * std::log(phi); });
  ValidationReport r;
  ASSERT_NO_THROW(r = validate_prf(g, {0.1}, 11));
  EXPECT_FALSE(r.all_passed());
  bool noted = false;
  for (const auto& c : r.checks) noted = noted || c.note == "evaluation-singularity";
  EXPECT_TRUE(noted);
}

TEST(Validate, SteepRampTripsSmoothnessHeuristic) {
  // Inside the range axioms, but with a near-jump at phi = 1/2.
  const PhaseResponse g("steep", [](double phi, double eps) {
    return eps * 0.2 * phi * (1 - phi) * std::tanh(1e9 * (phi - 0.5));
  });
  ValidationOptions opts;
  opts.slope_bound = 10.0;
  const ValidationReport r = validate_prf(g, {1.0}, 1000, opts);
  EXPECT_FALSE(r.check(Axiom::Eq6Smoothness).passed);
  EXPECT_TRUE(r.check(Axiom::Eq2).passed);
  EXPECT_TRUE(validate_prf(theta::theta_prf(), {1.0}, 1000, opts).check(Axiom::Eq6Smoothness).passed);
}

TEST(Validate, RejectsBadGrid) {
  EXPECT_THROW(validate_prf(zero_prf(), {0.1}, 2), Error);
  EXPECT_THROW(validate_prf(zero_prf(), {-0.1}, 11), Error);
}

// Invariants over every built-in response function.

TEST(BuiltinInvariants, ZeroAtZeroStrength) {
  for (const auto& name : builtin_names()) {
    const PhaseResponse g = builtin_prf(name);
    for (int i = 0; i <= 1000; ++i)
      ASSERT_LE(std::abs(eval_g(g, Phase(i / 1000.0), Strength(0.0))), 1e-14) << name << " phi=" << i / 1000.0;
  }
}

TEST(BuiltinInvariants, ZeroAtEndpoints) {
  for (const auto& name : builtin_names()) {
    const PhaseResponse g = builtin_prf(name);
    for (double eps : log_spaced_eps()) {
      EXPECT_LE(std::abs(eval_g(g, Phase(0.0), Strength(eps))), 1e-12) << name << " eps=" << eps;
      EXPECT_LE(std::abs(eval_g(g, Phase(1.0), Strength(eps))), 1e-12) << name << " eps=" << eps;
    }
  }
}

TEST(BuiltinInvariants, StrictRangeAtInteriorPoints) {
  for (const auto& name : builtin_names()) {
    const PhaseResponse g = builtin_prf(name);
    for (double eps : {0.01, 0.1, 0.5, 1.0}) {
      for (int i = 1; i < 1000; ++i) {
        const double phi = i / 1000.0;
        const double v = eval_g(g, Phase(phi), Strength(eps));
        ASSERT_GT(v, -phi + 1e-12) << name << " phi=" << phi << " eps=" << eps;
        ASSERT_LT(v, 1.0 - phi) << name << " phi=" << phi << " eps=" << eps;
      }
    }
  }
}

TEST(BuiltinInvariants, ValidOnUnitStrengthRange) {
  for (const auto& name : builtin_names())
    EXPECT_TRUE(validate_prf(builtin_prf(name), {0.01, 0.1, 0.5, 1.0}).all_passed()) << name;
}

TEST(Builtins, UnknownNameThrows) {
  EXPECT_THROW(builtin_prf("sine"), Error);
  EXPECT_EQ(builtin_names().size(), 5u);
}
