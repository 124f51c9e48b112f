#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pco/acceptance.hpp"
#include "pco/calculus.hpp"
#include "pco/expr.hpp"
#include "pco/theta.hpp"

using namespace pco;
using namespace pco::expr;
using std::numbers::pi;

namespace {

const char* kThetaSource = "(1/pi)*atan(tan((phi-0.5)*pi)+eps) - (phi-0.5)";

const std::vector<std::string> kCorpus = {
    "phi*(1-phi)*eps",
    kThetaSource,
    "eps*phi^2",
    "-eps*phi*(1-phi)^2",
    "eps*phi*(1-phi) - 2*phi*(phi-1)^2*(2*phi-1)*eps^2",
    "sqrt(phi)*exp(-eps)/log(2+phi)",
    "cos(eps)^-1 + sin(phi*eps)",
    "2^3^2",
    "1.5e-3*phi - -eps",
    "phi/eps/2",
};

ParseError parse_error(std::string_view src) {
  try {
    parse(src);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no ParseError for '" << src << "'";
  return ParseError(0, "", "");
}

}  // namespace

TEST(Parse, ValidExamples) {
  EXPECT_DOUBLE_EQ(eval(parse("phi*(1-phi)*eps"), 0.5, 0.2), 0.05);
  const Expr th = parse(kThetaSource);
  const PhaseResponse g = theta::theta_prf();
  for (int i = 1; i < 50; ++i) EXPECT_NEAR(eval(th, i / 50.0, 0.7), g(i / 50.0, 0.7), 1e-14);
}

TEST(Parse, PrecedenceAndAssociativity) {
  EXPECT_EQ(eval(parse("2^3^2"), 0, 0), 512.0);
  EXPECT_EQ(eval(parse("8/4/2"), 0, 0), 1.0);
  EXPECT_EQ(eval(parse("8-4-2"), 0, 0), 2.0);
  EXPECT_EQ(eval(parse("1+2*3"), 0, 0), 7.0);
  EXPECT_EQ(eval(parse("-phi^2"), 3, 0), 9.0);
  EXPECT_EQ(eval(parse("2*-phi"), 3, 0), -6.0);
  EXPECT_EQ(eval(parse("  pi \t"), 0, 0), pi);
  EXPECT_EQ(eval(parse("1.25e2"), 0, 0), 125.0);
  EXPECT_EQ(eval(parse("2^-1"), 0, 0), 0.5);
}

TEST(Parse, ErrorAtUnexpectedToken) {
  const ParseError e = parse_error("phi + * eps");
  EXPECT_EQ(e.position(), 6u);
  EXPECT_EQ(e.expected(), "atom");
  EXPECT_EQ(e.found(), "'*'");
  EXPECT_EQ(e.kind(), ErrorKind::Parse);
}

TEST(Parse, ErrorAtEndOfInput) {
  const ParseError e = parse_error("phi +");
  EXPECT_EQ(e.position(), 5u);
  EXPECT_EQ(e.found(), "end of input");
}

TEST(Parse, NonConstantExponentHasDedicatedError) {
  const ParseError e = parse_error("phi^eps");
  EXPECT_EQ(e.reason(), ParseError::Reason::NonConstantExponent);
  EXPECT_EQ(e.position(), 4u);
  EXPECT_EQ(parse_error("2^(phi+1)").reason(), ParseError::Reason::NonConstantExponent);
  EXPECT_NO_THROW(parse("phi^(1/2)"));
}

TEST(Parse, RejectsMalformedInput) {
  for (const char* bad : {"", "2phi", "phi eps", "(phi", "phi)", "sin phi", "foo(phi)", "1e", "phi$", "sin()"})
    EXPECT_THROW(parse(bad), ParseError) << bad;
}

TEST(Parse, PositionIsWithinInput) {
  for (const char* bad : {"phi +", "(", "sin(", "2^", "phi*)"}) {
    const ParseError e = parse_error(bad);
    EXPECT_LE(e.position(), std::string_view(bad).size() + 1) << bad;
  }
}

TEST(Eval, Examples) {
  EXPECT_EQ(eval(parse("3.5"), 0.1, 0.9), 3.5);
  EXPECT_EQ(eval(parse("eps*phi^2"), 2, 3), 12.0);
  EXPECT_NEAR(eval(parse(kThetaSource), 0.5, 1), 0.25, 1e-15);
}

TEST(Eval, SingularityNamesSubexpression) {
  try {
    eval(parse("eps + log(phi - 1)"), 0.5, 0.1);
    FAIL() << "expected EvaluationSingularity";
  } catch (const EvaluationSingularity& e) {
    EXPECT_EQ(e.phi(), 0.5);
    EXPECT_NE(e.where().find("log"), std::string::npos);
    EXPECT_NE(e.where().find("root/rhs"), std::string::npos);
  }
  EXPECT_THROW(eval(parse("1/phi"), 0, 0), EvaluationSingularity);
}

TEST(Diff, Examples) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3, 3);
  const Expr d = diff(parse("phi*eps"), Var::Phi);
  EXPECT_EQ(to_string(d), "eps");
  for (int i = 0; i < 100; ++i) {
    const double p = u(rng), e = u(rng);
    EXPECT_NEAR(eval(d, p, e), e, 1e-12);
  }

  const Expr de = diff(parse(kThetaSource), Var::Eps);
  for (int i = 1; i < 20; ++i) {
    const double phi = i / 20.0, x = std::tan((phi - 0.5) * pi);
    EXPECT_NEAR(eval(de, phi, 0), (1 / pi) / (1 + x * x), 1e-14);
  }

  const Expr mixed = diff(diff(parse("2*phi*(phi-1)^2*(2*phi-1)*eps^2"), Var::Phi), Var::Eps);
  EXPECT_EQ(eval(mixed, 0, 0), 0.0);
}

TEST(Diff, EveryRuleAgainstHandDerivatives) {
  const double p = 0.3, e = 0.7;
  const auto d = [&](const char* s) { return eval(diff(parse(s), Var::Phi), p, e); };
  EXPECT_NEAR(d("sin(phi)"), std::cos(p), 1e-15);
  EXPECT_NEAR(d("cos(phi)"), -std::sin(p), 1e-15);
  EXPECT_NEAR(d("tan(phi)"), 1 + std::tan(p) * std::tan(p), 1e-15);
  EXPECT_NEAR(d("atan(phi)"), 1 / (1 + p * p), 1e-15);
  EXPECT_NEAR(d("sqrt(phi)"), 0.5 / std::sqrt(p), 1e-15);
  EXPECT_NEAR(d("exp(phi)"), std::exp(p), 1e-15);
  EXPECT_NEAR(d("log(phi)"), 1 / p, 1e-14);
  EXPECT_NEAR(d("-phi"), -1, 1e-15);
  EXPECT_NEAR(d("phi^3"), 3 * p * p, 1e-15);
  EXPECT_NEAR(d("phi/eps"), 1 / e, 1e-15);
  EXPECT_NEAR(d("eps/phi"), -e / (p * p), 1e-14);
  EXPECT_NEAR(d("phi-eps"), 1, 1e-15);
  EXPECT_EQ(to_string(diff(parse("phi^1"), Var::Phi)), "1");
  EXPECT_EQ(to_string(diff(parse("eps^2"), Var::Phi)), "0");
}

TEST(Simplify, Examples) {
  EXPECT_EQ(to_string(simplify(parse("0*phi + 1*eps"))), "eps");
  EXPECT_EQ(to_string(simplify(parse("phi^1"))), "phi");
  EXPECT_EQ(to_string(simplify(parse("(2-1)*atan(eps)"))), "atan(eps)");
  EXPECT_EQ(to_string(simplify(parse("phi - 0"))), "phi");
  EXPECT_EQ(to_string(simplify(parse("2*3+phi"))), "6 + phi");
}

TEST(Simplify, KeepsNonFiniteFoldsUnevaluated) {
  // log(0) must stay a singularity at evaluation, not become a constant.
  const Expr e = simplify(parse("phi + log(0)"));
  EXPECT_THROW(eval(e, 0.5, 0.5), EvaluationSingularity);
}

TEST(ToString, PrintsMinimalParentheses) {
  EXPECT_EQ(to_string(parse("(phi+eps)*2")), "(phi + eps) * 2");
  EXPECT_EQ(to_string(parse("phi-(eps-1)")), "phi - (eps - 1)");
  EXPECT_EQ(to_string(parse("phi-eps-1")), "phi - eps - 1");
  EXPECT_EQ(to_string(parse("(phi^2)^3")), "(phi^2)^3");
  EXPECT_EQ(to_string(parse("-(phi^2)")), "-(phi^2)");
  EXPECT_EQ(to_string(parse("pi*phi")), "pi * phi");
}

TEST(ExprProperties, RoundTripThroughText) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> phi_d(0.05, 0.95), eps_d(0.05, 2.0);
  for (const auto& src : kCorpus) {
    const Expr a = parse(src);
    const Expr b = parse(to_string(a));
    EXPECT_EQ(to_string(a), to_string(b)) << src;
    for (int i = 0; i < 1000; ++i) {
      const double p = phi_d(rng), e = eps_d(rng);
      double va, vb;
      try {
        va = eval(a, p, e);
      } catch (const EvaluationSingularity&) {
        EXPECT_THROW(eval(b, p, e), EvaluationSingularity);
        continue;
      }
      vb = eval(b, p, e);
      ASSERT_NEAR(va, vb, 1e-15 * std::max(1.0, std::abs(va))) << src;
    }
  }
}

TEST(ExprProperties, RoundTripRandomTrees) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> phi_d(0.05, 0.95), eps_d(0.05, 2.0);
  for (int n = 0; n < 300; ++n) {
    const Expr a = acceptance::random_expression(rng, 6);
    const Expr b = parse(to_string(a));
    for (int i = 0; i < 20; ++i) {
      const double p = phi_d(rng), e = eps_d(rng);
      try {
        const double va = eval(a, p, e);
        ASSERT_EQ(va, eval(b, p, e)) << to_string(a);
      } catch (const EvaluationSingularity&) {
        ASSERT_THROW(eval(b, p, e), EvaluationSingularity) << to_string(a);
      }
    }
  }
}

TEST(ExprProperties, SimplifyPreservesValues) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> phi_d(0.05, 0.95), eps_d(0.05, 2.0);
  for (int n = 0; n < 300; ++n) {
    const Expr a = acceptance::random_expression(rng, 6);
    const Expr s = simplify(a);
    for (int i = 0; i < 20; ++i) {
      const double p = phi_d(rng), e = eps_d(rng);
      try {
        const double va = eval(a, p, e);
        const double vs = eval(s, p, e);
        ASSERT_NEAR(va, vs, 1e-15 * std::max(1.0, std::abs(va))) << to_string(a);
      } catch (const EvaluationSingularity&) {
      }
    }
  }
}

TEST(ExprPrf, ExactPartialsFromDiff) {
  const PhaseResponse g = expression_prf(parse("eps*phi*(1-phi) - 2*phi*(phi-1)^2*(2*phi-1)*eps^2"), "ex2");
  EXPECT_EQ(g.provenance(), Provenance::ParsedExpression);
  EXPECT_TRUE(g.has_exact_dphi() && g.has_exact_deps() && g.has_exact_d2());
  EXPECT_NEAR(partial(g, PartialKind::D2PhiEps, Phase(0.0), Strength(0.0)), 1.0, 1e-15);
  EXPECT_NEAR(partial(g, PartialKind::D2PhiEps, Phase(1.0), Strength(0.0)), -1.0, 1e-15);
}

TEST(ExprPrf, CheckedWrapperRejectsNonResponses) {
  try {
    checked_expression_prf("eps", {0.5});
    FAIL() << "expected InvalidPrf";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidPrf);
    EXPECT_NE(std::string(e.what()).find("Eq4"), std::string::npos);
  }
  EXPECT_THROW(checked_expression_prf("phi +", {0.5}), ParseError);
  EXPECT_NO_THROW(checked_expression_prf(kThetaSource, {0.1, 1.0}));
}
