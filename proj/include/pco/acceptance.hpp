#pragma once

// End-to-end checks of the library's headline results, each with a pinned
// tolerance and runtime budget. Shared by the acceptance test binary and the
// `reproduce` subcommand.

#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "pco/expr.hpp"

namespace pco::acceptance {

struct Assertion {
  std::string text;
  bool passed;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  std::vector<Assertion> assertions;
  double seconds = 0.0;
  double budget_seconds = 0.0;

  bool passed() const;
};

CriterionResult theta_identity();             // 1
CriterionResult infinitesimal_strobe_map();   // 2
CriterionResult cubic_expansion();            // 3
CriterionResult theorem1();                   // 4
CriterionResult theorem2_example1();          // 5
CriterionResult theorem2_example2();          // 6
CriterionResult theorem3_family();            // 7
CriterionResult lemma1_consistency();         // 8
CriterionResult oracle_equivalence();         // 9
CriterionResult dsl_derivatives();            // 10

std::vector<std::function<CriterionResult()>> all_criteria();

/// Case names accepted by `reproduce`.
const std::vector<std::string>& case_names();

/// Throws InvalidParameter for an unknown case.
CriterionResult run_case(std::string_view name);

/// One line per assertion and a summary line.
void print(std::ostream& os, const CriterionResult& r);

/// Random expression over the full grammar, depth <= max_depth.
expr::Expr random_expression(std::mt19937_64& rng, int max_depth);

/// The Theorem-3 family eps * sign * phi (1-phi) q(phi) with
/// q = a + b (1-phi) + c (1-phi)^2, as DSL text.
std::string corner_family_expression(double sign, double a, double b, double c);

}  // namespace pco::acceptance
