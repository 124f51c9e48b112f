#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "pco/builtins.hpp"
#include "pco/calculus.hpp"
#include "pco/expr.hpp"
#include "pco/theta.hpp"

using namespace pco;
using std::numbers::pi;

namespace {

// The same function as a parsed expression would give, but with no exact
// partials, so every derivative goes through finite differences.
PhaseResponse opaque(const PhaseResponse& g) {
  return PhaseResponse("opaque-" + g.name(), [g](double phi, double eps) { return g(phi, eps); });
}

}  // namespace

TEST(Partial, ThetaMixedPartialVanishesAtOrigin) {
  const PhaseResponse g = theta::theta_prf();
  EXPECT_EQ(partial(g, PartialKind::D2PhiEps, Phase(0.0), Strength(0.0)), 0.0);
  EXPECT_NEAR(numeric_partial(g, PartialKind::D2PhiEps, Phase(0.0), Strength(0.0)), 0.0, 1e-6);
}

TEST(Partial, Example2MixedPartialAtOrigin) {
  const PhaseResponse g = example2_prf();
  const PartialEstimate e = estimate_partial(g, PartialKind::D2PhiEps, Phase(0.0), Strength(0.0));
  EXPECT_TRUE(e.exact);
  EXPECT_FALSE(e.off_axis);
  EXPECT_NEAR(e.value, 1.0, 1e-12);
  EXPECT_NEAR(numeric_partial(g, PartialKind::D2PhiEps, Phase(0.0), Strength(0.0)), 1.0, 1e-6);
  EXPECT_NEAR(numeric_partial(g, PartialKind::D2PhiEps, Phase(1.0), Strength(0.0)), -1.0, 1e-6);
}

TEST(Partial, PhiDerivativeVanishesAtZeroStrength) {
  for (const auto& name : builtin_names()) {
    const PhaseResponse g = opaque(builtin_prf(name));
    for (double phi : {0.0, 0.2, 0.5, 0.9, 1.0})
      EXPECT_NEAR(partial(g, PartialKind::DPhi, Phase(phi), Strength(0.0)), 0.0, 1e-7) << name << " " << phi;
  }
}

TEST(Partial, MixedPartialAwayFromAxisIsFlagged) {
  const PhaseResponse g = opaque(example2_prf());
  EXPECT_TRUE(estimate_partial(g, PartialKind::D2PhiEps, Phase(0.3), Strength(0.5)).off_axis);
  EXPECT_FALSE(estimate_partial(g, PartialKind::D2PhiEps, Phase(0.3), Strength(0.0)).off_axis);
}

TEST(Partial, ExactAndNumericAgreeForBuiltins) {
  for (const auto& name : builtin_names()) {
    const PhaseResponse g = builtin_prf(name);
    for (double eps : {0.0, 0.1, 1.0}) {
      for (int i = 0; i <= 20; ++i) {
        const Phase phi(i / 20.0);
        for (auto kind : {PartialKind::DPhi, PartialKind::DEps}) {
          ASSERT_NEAR(partial(g, kind, phi, Strength(eps)), numeric_partial(g, kind, phi, Strength(eps)), 1e-6)
              << name << " " << to_string(kind) << " phi=" << phi.value() << " eps=" << eps;
        }
      }
      ASSERT_NEAR(partial(g, PartialKind::D2PhiEps, Phase(0.0), Strength(0.0)),
                  numeric_partial(g, PartialKind::D2PhiEps, Phase(0.0), Strength(0.0)), 1e-6)
          << name;
    }
  }
}

TEST(Partial, SingularityPropagates) {
  const PhaseResponse g("log", [](double phi, double eps) { return eps * std::log(phi); });
  EXPECT_THROW(numeric_partial(g, PartialKind::DPhi, Phase(0.0), Strength(0.1)), EvaluationSingularity);
}

TEST(Infinitesimal, ThetaClosedForm) {
  const PhaseResponse gt = make_infinitesimal(theta::theta_prf());
  EXPECT_EQ(gt.provenance(), Provenance::InfinitesimalOf);
  EXPECT_EQ(gt.source(), "theta");
  for (double eps : {0.1, 0.5, 1.0}) {
    for (int i = 1; i < 100; ++i) {
      const double phi = i / 100.0;
      const double x = std::tan((phi - 0.5) * pi);
      EXPECT_NEAR(gt(phi, eps), eps / (pi * (1 + x * x)), 1e-15);
    }
  }
  EXPECT_TRUE(gt.warnings().empty());
  ASSERT_TRUE(gt.valid_eps_max().has_value());
  EXPECT_EQ(*gt.valid_eps_max(), 1.0);
}

TEST(Infinitesimal, Example1SharesThetaInfinitesimal) {
  const PhaseResponse a = make_infinitesimal(theta::theta_prf());
  const PhaseResponse b = make_infinitesimal(example1_prf());
  for (int i = 0; i <= 200; ++i) EXPECT_NEAR(a(i / 200.0, 0.7), b(i / 200.0, 0.7), 1e-15);
}

TEST(Infinitesimal, Idempotent) {
  for (const auto& name : builtin_names()) {
    const PhaseResponse once = make_infinitesimal(builtin_prf(name));
    const PhaseResponse twice = make_infinitesimal(once);
    for (double eps : {0.1, 1.0})
      for (int i = 0; i <= 100; ++i) ASSERT_NEAR(once(i / 100.0, eps), twice(i / 100.0, eps), 1e-9) << name;
  }
}

TEST(Infinitesimal, SplinePathMatchesExactPath) {
  const PhaseResponse exact = make_infinitesimal(example2_prf());
  const PhaseResponse tabulated = make_infinitesimal(opaque(example2_prf()));
  for (int i = 0; i <= 997; ++i) {
    const double phi = i / 997.0;
    ASSERT_NEAR(tabulated(phi, 0.5), exact(phi, 0.5), 1e-8) << phi;
  }
  EXPECT_NEAR(partial(tabulated, PartialKind::D2PhiEps, Phase(0.0), Strength(0.0)), 1.0, 1e-5);
  EXPECT_NEAR(partial(tabulated, PartialKind::D2PhiEps, Phase(1.0), Strength(0.0)), -1.0, 1e-5);
}

TEST(Infinitesimal, InvalidTildeGetsWarning) {
  // g~ = 3 eps phi (1 - phi) leaves the range for eps near 1.
  const PhaseResponse g = expr::expression_prf(expr::parse("phi*(1-phi)*(1-exp(-3*eps))"), "x");
  const PhaseResponse gt = make_infinitesimal(g);
  EXPECT_FALSE(gt.warnings().empty());
  ASSERT_TRUE(gt.valid_eps_max().has_value());
  EXPECT_LT(*gt.valid_eps_max(), 1.0);
  EXPECT_GE(*gt.valid_eps_max(), 0.25);
}

TEST(InfinitesimalProperties, LinearInStrength) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0), e(0.0, 0.5);
  for (const auto& name : builtin_names()) {
    const PhaseResponse gt = make_infinitesimal(builtin_prf(name));
    for (int n = 0; n < 500; ++n) {
      const double phi = u(rng), e1 = e(rng), e2 = e(rng);
      ASSERT_NEAR(gt(phi, e1 + e2), gt(phi, e1) + gt(phi, e2), 1e-12) << name;
    }
  }
}

TEST(InfinitesimalProperties, FirstOrderAgreement) {
  for (const auto& name : {"theta", "example1", "example2"}) {
    const PhaseResponse g = builtin_prf(name);
    const PhaseResponse gt = make_infinitesimal(g);
    std::vector<double> ratios;
    for (double eps : {1e-1, 1e-2, 1e-3}) {
      double worst = 0.0;
      for (int i = 0; i <= 1000; ++i) {
        const double phi = i / 1000.0;
        worst = std::max(worst, std::abs(g(phi, eps) - gt(phi, eps)) / (eps * eps));
      }
      ratios.push_back(worst);
    }
    const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    EXPECT_GT(*lo, 0.0) << name;
    EXPECT_LE(*hi / *lo, 2.0) << name;
  }
}
