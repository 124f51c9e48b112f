#pragma once

// Expression language for user-defined response functions g(phi, eps).
//
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := atom ('^' factor)?          exponent must be constant
//   atom   := number | 'phi' | 'eps' | 'pi' | func '(' expr ')'
//           | '(' expr ')' | '-' atom
//   func   := sin | cos | tan | atan | sqrt | exp | log
//
// '^' is right-associative and binds tighter than unary minus's operand
// only: "-phi^2" is (-phi)^2. No implicit multiplication.

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pco/prf.hpp"

namespace pco::expr {

enum class Var { Phi, Eps };
enum class UnaryOp { Neg, Sin, Cos, Tan, Atan, Sqrt, Exp, Log };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

struct Node;

/// Immutable expression tree; copies share structure.
class Expr {
 public:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static Expr constant(double v);
  static Expr variable(Var v);
  static Expr unary(UnaryOp op, Expr arg);
  /// Throws InvalidParameter for Pow with a non-constant exponent.
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs);

  const Node& node() const { return *node_; }

  bool is_constant() const;
  /// Value of a Constant node.
  double constant_value() const;
  /// True when no variable occurs anywhere in the tree.
  bool is_closed() const;

 private:
  std::shared_ptr<const Node> node_;
};

struct Constant {
  double value;
};
struct Variable {
  Var var;
};
struct Unary {
  UnaryOp op;
  Expr arg;
};
struct Binary {
  BinaryOp op;
  Expr lhs;
  Expr rhs;
};

struct Node {
  std::variant<Constant, Variable, Unary, Binary> v;
};

class ParseError : public Error {
 public:
  enum class Reason { Unexpected, NonConstantExponent };

  ParseError(std::size_t position, std::string expected, std::string found,
             Reason reason = Reason::Unexpected);

  std::size_t position() const noexcept { return position_; }
  const std::string& expected() const noexcept { return expected_; }
  const std::string& found() const noexcept { return found_; }
  Reason reason() const noexcept { return reason_; }

 private:
  std::size_t position_;
  std::string expected_;
  std::string found_;
  Reason reason_;
};

/// Throws ParseError.
Expr parse(std::string_view src);

/// Throws EvaluationSingularity naming the first non-finite subexpression.
double eval(const Expr& e, double phi, double eps);

/// Symbolic partial derivative; the result is simplified.
Expr diff(const Expr& e, Var var);

/// Constant folding, x*0 -> 0, x*1 -> x, x+0 -> x, x-0 -> x, x^1 -> x.
Expr simplify(const Expr& e);

/// Reparseable text; evaluates identically after parse().
std::string to_string(const Expr& e);

/// Wraps an expression as a response function with exact partials from
/// diff(). Does not check the axioms.
PhaseResponse expression_prf(const Expr& e, std::string source);

/// Parses, wraps, and validates on eps_list. Throws ParseError, or
/// Error(InvalidPrf) naming the failed axioms.
PhaseResponse checked_expression_prf(std::string_view src, const std::vector<double>& eps_list,
                                     int phi_count = 1001);

}  // namespace pco::expr
