#include "pco/expr.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

namespace pco::expr {

// ---------------------------------------------------------------------------
// Construction

Expr Expr::constant(double v) { return Expr(std::make_shared<const Node>(Node{Constant{v}})); }

Expr Expr::variable(Var v) { return Expr(std::make_shared<const Node>(Node{Variable{v}})); }

Expr Expr::unary(UnaryOp op, Expr arg) {
  return Expr(std::make_shared<const Node>(Node{Unary{op, std::move(arg)}}));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
  if (op == BinaryOp::Pow && !rhs.is_constant())
    throw Error(ErrorKind::InvalidParameter, "exponent of '^' must be a constant");
  return Expr(std::make_shared<const Node>(Node{Binary{op, std::move(lhs), std::move(rhs)}}));
}

bool Expr::is_constant() const { return std::holds_alternative<Constant>(node_->v); }

double Expr::constant_value() const { return std::get<Constant>(node_->v).value; }

bool Expr::is_closed() const {
  return std::visit(
      [](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Constant>) return true;
        else if constexpr (std::is_same_v<T, Variable>) return false;
        else if constexpr (std::is_same_v<T, Unary>) return n.arg.is_closed();
        else return n.lhs.is_closed() && n.rhs.is_closed();
      },
      node_->v);
}

namespace {

const char* func_name(UnaryOp op) {
  switch (op) {
    case UnaryOp::Neg: return "-";
    case UnaryOp::Sin: return "sin";
    case UnaryOp::Cos: return "cos";
    case UnaryOp::Tan: return "tan";
    case UnaryOp::Atan: return "atan";
    case UnaryOp::Sqrt: return "sqrt";
    case UnaryOp::Exp: return "exp";
    case UnaryOp::Log: return "log";
  }
  return "?";
}

char op_char(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return '+';
    case BinaryOp::Sub: return '-';
    case BinaryOp::Mul: return '*';
    case BinaryOp::Div: return '/';
    case BinaryOp::Pow: return '^';
  }
  return '?';
}

double apply(UnaryOp op, double x) {
  switch (op) {
    case UnaryOp::Neg: return -x;
    case UnaryOp::Sin: return std::sin(x);
    case UnaryOp::Cos: return std::cos(x);
    case UnaryOp::Tan: return std::tan(x);
    case UnaryOp::Atan: return std::atan(x);
    case UnaryOp::Sqrt: return std::sqrt(x);
    case UnaryOp::Exp: return std::exp(x);
    case UnaryOp::Log: return std::log(x);
  }
  return 0.0;
}

double apply(BinaryOp op, double a, double b) {
  switch (op) {
    case BinaryOp::Add: return a + b;
    case BinaryOp::Sub: return a - b;
    case BinaryOp::Mul: return a * b;
    case BinaryOp::Div: return a / b;
    case BinaryOp::Pow: return std::pow(a, b);
  }
  return 0.0;
}

}  // namespace

// ---------------------------------------------------------------------------
// Parsing

namespace {

std::string parse_message(std::size_t pos, const std::string& expected, const std::string& found) {
  std::ostringstream os;
  os << "parse error at offset " << pos << ": expected " << expected << ", found " << found;
  return os.str();
}

}  // namespace

ParseError::ParseError(std::size_t position, std::string expected, std::string found, Reason reason)
    : Error(ErrorKind::Parse, parse_message(position, expected, found)),
      position_(position),
      expected_(std::move(expected)),
      found_(std::move(found)),
      reason_(reason) {}

namespace {

enum class Tok { Number, Ident, LParen, RParen, Plus, Minus, Star, Slash, Caret, End, Bad };

struct Token {
  Tok kind;
  std::size_t pos;
  std::string_view text;
  double number = 0.0;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::Number: return "number " + std::string(t.text);
    case Tok::Ident: return "identifier '" + std::string(t.text) + "'";
    case Tok::End: return "end of input";
    case Tok::Bad: return "character '" + std::string(t.text) + "'";
    default: return "'" + std::string(t.text) + "'";
  }
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (true) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r')) ++i;
    if (i >= s.size()) {
      out.push_back({Tok::End, s.size(), {}});
      return out;
    }
    const std::size_t start = i;
    const char c = s[i];
    if (is_digit(c) || (c == '.' && i + 1 < s.size() && is_digit(s[i + 1]))) {
      while (i < s.size() && is_digit(s[i])) ++i;
      if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && is_digit(s[i])) ++i;
      }
      if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
        if (j < s.size() && is_digit(s[j])) {
          while (j < s.size() && is_digit(s[j])) ++j;
          i = j;
        }
      }
      Token t{Tok::Number, start, s.substr(start, i - start)};
      const auto res = std::from_chars(s.data() + start, s.data() + i, t.number);
      if (res.ec != std::errc() || !std::isfinite(t.number)) t.kind = Tok::Bad;
      out.push_back(t);
      continue;
    }
    if (is_ident_start(c)) {
      while (i < s.size() && is_ident_char(s[i])) ++i;
      out.push_back({Tok::Ident, start, s.substr(start, i - start)});
      continue;
    }
    Tok k = Tok::Bad;
    switch (c) {
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '*': k = Tok::Star; break;
      case '/': k = Tok::Slash; break;
      case '^': k = Tok::Caret; break;
      default: break;
    }
    out.push_back({k, start, s.substr(start, 1)});
    ++i;
  }
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(tokenize(src)) {}

  Expr parse_all() {
    Expr e = parse_expr();
    if (peek().kind != Tok::End) fail("operator or end of input");
    return e;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  const Token& next() { return toks_[i_++]; }

  [[noreturn]] void fail(const std::string& expected) const {
    throw ParseError(peek().pos, expected, describe(peek()));
  }

  void expect(Tok k, const char* what) {
    if (peek().kind != k) fail(what);
    ++i_;
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const BinaryOp op = next().kind == Tok::Plus ? BinaryOp::Add : BinaryOp::Sub;
      lhs = Expr::binary(op, lhs, parse_term());
    }
    return lhs;
  }

  Expr parse_term() {
    Expr lhs = parse_factor();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      const BinaryOp op = next().kind == Tok::Star ? BinaryOp::Mul : BinaryOp::Div;
      lhs = Expr::binary(op, lhs, parse_factor());
    }
    return lhs;
  }

  Expr parse_factor() {
    Expr base = parse_atom();
    if (peek().kind != Tok::Caret) return base;
    ++i_;
    const Token& at = peek();
    const std::size_t exp_pos = at.pos;
    const std::string found = describe(at);
    const std::size_t first = i_;
    Expr exponent = parse_factor();
    if (!exponent.is_closed()) {
      std::string text;
      for (std::size_t k = first; k < i_; ++k) text += toks_[k].text;
      throw ParseError(exp_pos, "constant exponent", "'" + text + "'",
                       ParseError::Reason::NonConstantExponent);
    }
    double value = 0.0;
    try {
      value = eval(exponent, 0.0, 0.0);
    } catch (const EvaluationSingularity&) {
      throw ParseError(exp_pos, "finite constant exponent", found, ParseError::Reason::NonConstantExponent);
    }
    return Expr::binary(BinaryOp::Pow, base, Expr::constant(value));
  }

  Expr parse_atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number:
        ++i_;
        return Expr::constant(t.number);
      case Tok::Minus:
        ++i_;
        return Expr::unary(UnaryOp::Neg, parse_atom());
      case Tok::LParen: {
        ++i_;
        Expr e = parse_expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Ident: {
        const std::string_view name = t.text;
        if (name == "phi") return ++i_, Expr::variable(Var::Phi);
        if (name == "eps") return ++i_, Expr::variable(Var::Eps);
        if (name == "pi") return ++i_, Expr::constant(std::numbers::pi);
        static constexpr std::pair<std::string_view, UnaryOp> funcs[] = {
            {"sin", UnaryOp::Sin},   {"cos", UnaryOp::Cos}, {"tan", UnaryOp::Tan}, {"atan", UnaryOp::Atan},
            {"sqrt", UnaryOp::Sqrt}, {"exp", UnaryOp::Exp}, {"log", UnaryOp::Log},
        };
        for (const auto& [fname, op] : funcs) {
          if (name != fname) continue;
          ++i_;
          expect(Tok::LParen, "'('");
          Expr arg = parse_expr();
          expect(Tok::RParen, "')'");
          return Expr::unary(op, arg);
        }
        fail("atom");
      }
      default:
        fail("atom");
    }
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

}  // namespace

Expr parse(std::string_view src) { return Parser(src).parse_all(); }

// ---------------------------------------------------------------------------
// Evaluation

namespace {

struct Singular {
  std::string path;
  std::string text;
};

double eval_node(const Expr& e, double phi, double eps) {
  return std::visit(
      [&](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        double v = 0.0;
        if constexpr (std::is_same_v<T, Constant>) {
          return n.value;
        } else if constexpr (std::is_same_v<T, Variable>) {
          return n.var == Var::Phi ? phi : eps;
        } else if constexpr (std::is_same_v<T, Unary>) {
          double a;
          try {
            a = eval_node(n.arg, phi, eps);
          } catch (Singular& s) {
            s.path = "/arg" + s.path;
            throw;
          }
          v = apply(n.op, a);
        } else {
          double a, b;
          try {
            a = eval_node(n.lhs, phi, eps);
          } catch (Singular& s) {
            s.path = "/lhs" + s.path;
            throw;
          }
          try {
            b = eval_node(n.rhs, phi, eps);
          } catch (Singular& s) {
            s.path = "/rhs" + s.path;
            throw;
          }
          v = apply(n.op, a, b);
        }
        if (!std::isfinite(v)) throw Singular{"", to_string(e)};
        return v;
      },
      e.node().v);
}

}  // namespace

double eval(const Expr& e, double phi, double eps) {
  try {
    return eval_node(e, phi, eps);
  } catch (const Singular& s) {
    throw EvaluationSingularity(phi, eps, "subexpression '" + s.text + "' at root" + s.path);
  }
}

// ---------------------------------------------------------------------------
// Simplification and differentiation

namespace {

bool is_value(const Expr& e, double v) { return e.is_constant() && e.constant_value() == v; }

Expr fold_or(Expr folded_candidate, double value) {
  return std::isfinite(value) ? Expr::constant(value) : folded_candidate;
}

Expr make_binary(BinaryOp op, const Expr& l, const Expr& r) {
  if (l.is_constant() && r.is_constant()) {
    return fold_or(Expr::binary(op, l, r), apply(op, l.constant_value(), r.constant_value()));
  }
  switch (op) {
    case BinaryOp::Mul:
      if (is_value(l, 0.0) || is_value(r, 0.0)) return Expr::constant(0.0);
      if (is_value(l, 1.0)) return r;
      if (is_value(r, 1.0)) return l;
      break;
    case BinaryOp::Add:
      if (is_value(l, 0.0)) return r;
      if (is_value(r, 0.0)) return l;
      break;
    case BinaryOp::Sub:
      if (is_value(r, 0.0)) return l;
      break;
    case BinaryOp::Pow:
      if (is_value(r, 1.0)) return l;
      break;
    case BinaryOp::Div:
      break;
  }
  return Expr::binary(op, l, r);
}

Expr make_unary(UnaryOp op, const Expr& a) {
  if (a.is_constant()) return fold_or(Expr::unary(op, a), apply(op, a.constant_value()));
  return Expr::unary(op, a);
}

Expr add(const Expr& a, const Expr& b) { return make_binary(BinaryOp::Add, a, b); }
Expr sub(const Expr& a, const Expr& b) { return make_binary(BinaryOp::Sub, a, b); }
Expr mul(const Expr& a, const Expr& b) { return make_binary(BinaryOp::Mul, a, b); }
Expr dvd(const Expr& a, const Expr& b) { return make_binary(BinaryOp::Div, a, b); }
Expr pw(const Expr& a, double c) { return make_binary(BinaryOp::Pow, a, Expr::constant(c)); }
Expr neg(const Expr& a) { return make_unary(UnaryOp::Neg, a); }
Expr call(UnaryOp op, const Expr& a) { return make_unary(op, a); }
Expr num(double v) { return Expr::constant(v); }

Expr derive(const Expr& e, Var var) {
  return std::visit(
      [&](const auto& n) -> Expr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return num(0.0);
        } else if constexpr (std::is_same_v<T, Variable>) {
          return num(n.var == var ? 1.0 : 0.0);
        } else if constexpr (std::is_same_v<T, Unary>) {
          const Expr& u = n.arg;
          const Expr du = derive(u, var);
          switch (n.op) {
            case UnaryOp::Neg: return neg(du);
            case UnaryOp::Sin: return mul(call(UnaryOp::Cos, u), du);
            case UnaryOp::Cos: return mul(neg(call(UnaryOp::Sin, u)), du);
            case UnaryOp::Tan: return mul(add(num(1.0), pw(call(UnaryOp::Tan, u), 2.0)), du);
            case UnaryOp::Atan: return dvd(du, add(num(1.0), pw(u, 2.0)));
            case UnaryOp::Sqrt: return dvd(du, mul(num(2.0), call(UnaryOp::Sqrt, u)));
            case UnaryOp::Exp: return mul(call(UnaryOp::Exp, u), du);
            case UnaryOp::Log: return dvd(du, u);
          }
          return num(0.0);
        } else {
          const Expr& u = n.lhs;
          const Expr& v = n.rhs;
          const Expr du = derive(u, var);
          switch (n.op) {
            case BinaryOp::Add: return add(du, derive(v, var));
            case BinaryOp::Sub: return sub(du, derive(v, var));
            case BinaryOp::Mul: return add(mul(du, v), mul(u, derive(v, var)));
            case BinaryOp::Div: return dvd(sub(mul(du, v), mul(u, derive(v, var))), pw(v, 2.0));
            case BinaryOp::Pow: {
              const double c = v.constant_value();
              if (c == 1.0) return du;
              return mul(mul(num(c), pw(u, c - 1.0)), du);
            }
          }
          return num(0.0);
        }
      },
      e.node().v);
}

}  // namespace

Expr simplify(const Expr& e) {
  return std::visit(
      [&](const auto& n) -> Expr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Constant> || std::is_same_v<T, Variable>) {
          return e;
        } else if constexpr (std::is_same_v<T, Unary>) {
          return make_unary(n.op, simplify(n.arg));
        } else {
          return make_binary(n.op, simplify(n.lhs), simplify(n.rhs));
        }
      },
      e.node().v);
}

Expr diff(const Expr& e, Var var) { return simplify(derive(e, var)); }

// ---------------------------------------------------------------------------
// Printing

namespace {

constexpr int kAtomPrec = 5;

int precedence(const Expr& e) {
  return std::visit(
      [](const auto& n) -> int {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Constant>) return std::signbit(n.value) ? 3 : kAtomPrec;
        else if constexpr (std::is_same_v<T, Variable>) return kAtomPrec;
        else if constexpr (std::is_same_v<T, Unary>) return n.op == UnaryOp::Neg ? 3 : kAtomPrec;
        else {
          switch (n.op) {
            case BinaryOp::Add:
            case BinaryOp::Sub: return 1;
            case BinaryOp::Mul:
            case BinaryOp::Div: return 2;
            case BinaryOp::Pow: return 4;
          }
          return 0;
        }
      },
      e.node().v);
}

std::string format_number(double v) {
  if (v == std::numbers::pi) return "pi";
  if (v == -std::numbers::pi) return "-pi";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string wrap(const Expr& e, bool parens) {
  const std::string s = to_string(e);
  return parens ? "(" + s + ")" : s;
}

}  // namespace

std::string to_string(const Expr& e) {
  return std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return format_number(n.value);
        } else if constexpr (std::is_same_v<T, Variable>) {
          return n.var == Var::Phi ? "phi" : "eps";
        } else if constexpr (std::is_same_v<T, Unary>) {
          if (n.op == UnaryOp::Neg) return "-" + wrap(n.arg, precedence(n.arg) < kAtomPrec);
          return std::string(func_name(n.op)) + "(" + to_string(n.arg) + ")";
        } else {
          if (n.op == BinaryOp::Pow)
            return wrap(n.lhs, precedence(n.lhs) < kAtomPrec) + "^" + wrap(n.rhs, precedence(n.rhs) < kAtomPrec);
          const int p = precedence(e);
          return wrap(n.lhs, precedence(n.lhs) < p) + " " + op_char(n.op) + " " +
                 wrap(n.rhs, precedence(n.rhs) <= p);
        }
      },
      e.node().v);
}

// ---------------------------------------------------------------------------
// Response-function wrapper

namespace {

PrfFunction evaluator(Expr e) {
  return [e = std::move(e)](double phi, double eps) { return eval(e, phi, eps); };
}

}  // namespace

PhaseResponse expression_prf(const Expr& e, std::string source) {
  const Expr dphi = diff(e, Var::Phi);
  const Expr deps = diff(e, Var::Eps);
  const Expr d2 = diff(dphi, Var::Eps);
  return PhaseResponse("expr:" + source, evaluator(e),
                       ExactPartials{evaluator(dphi), evaluator(deps), evaluator(d2)},
                       Provenance::ParsedExpression, source);
}

PhaseResponse checked_expression_prf(std::string_view src, const std::vector<double>& eps_list,
                                     int phi_count) {
  PhaseResponse prf = expression_prf(parse(src), std::string(src));
  const ValidationReport report = validate_prf(prf, eps_list, phi_count);
  if (!report.all_passed()) {
    std::ostringstream os;
    os.precision(17);
    os << "expression '" << src << "' is not a valid response function:";
    for (const auto& c : report.checks) {
      if (c.passed) continue;
      os << " " << to_string(c.axiom) << " (phi=" << c.phi << ", eps=" << c.eps
         << ", violation " << c.worst_violation << ")";
    }
    throw Error(ErrorKind::InvalidPrf, os.str());
  }
  return prf;
}

}  // namespace pco::expr
