#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <future>
#include <string>
#include <thread>
#include <vector>

#include "pco/acceptance.hpp"
#include "pco/builtins.hpp"
#include "pco/classify.hpp"
#include "pco/expr.hpp"
#include "pco/serialize.hpp"
#include "pco/strobe.hpp"

namespace pco::cli {

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

constexpr std::string_view kExprPrefix = "expr:";

// A builtin name or expr:<text>. A checked expression must satisfy the
// axioms on eps_list before it is used.
PhaseResponse resolve_prf(const std::string& spec, bool checked, const std::vector<double>& eps_list) {
  if (spec.rfind(kExprPrefix, 0) == 0) {
    const std::string src = spec.substr(kExprPrefix.size());
    if (checked) return expr::checked_expression_prf(src, eps_list);
    return expr::expression_prf(expr::parse(src), src);
  }
  return builtin_prf(spec);
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

struct Options {
  std::string prf;
  std::vector<double> eps_list;
  int grid = 1001;
  bool json = false;
  double probe = 1e-3;
  double phi0 = 0.0;
  double eps = 0.0;
  std::size_t max_iters = 1'000'000;
  double tol = 1e-12;
  std::string eps_range;
  double phi_a = 0.0;
  double phi_b = 0.0;
  std::size_t cycles = 1;
  std::string case_name;
};

int cmd_validate(const Options& o, std::ostream& out) {
  const std::vector<double> eps_list = o.eps_list.empty() ? std::vector<double>{0.1, 0.5, 1.0} : o.eps_list;
  const PhaseResponse g = resolve_prf(o.prf, false, eps_list);
  const ValidationReport r = validate_prf(g, eps_list, o.grid);
  if (o.json) {
    out << to_json(r, g.name()).dump(2) << '\n';
  } else {
    out << "prf " << g.name() << ": " << r.phi_count << " phi points x " << r.eps_list.size() << " eps values\n";
    for (const auto& c : r.checks) {
      out << "  " << (c.passed ? "pass" : "FAIL") << "  " << to_string(c.axiom);
      if (!c.passed || c.worst_violation > 0.0)
        out << "  worst " << short_num(c.worst_violation) << " at phi=" << short_num(c.phi)
            << " eps=" << short_num(c.eps);
      if (!c.note.empty()) out << "  (" << c.note << ")";
      out << '\n';
    }
    out << (r.all_passed() ? "valid" : "invalid") << '\n';
  }
  return r.all_passed() ? kOk : kFailed;
}

void print_row(std::ostream& out, const char* label, const StabilityReport& s) {
  out << "    " << label << "  product " << short_num(s.derivative_product) << "  strong "
      << to_string(s.strong_verdict) << "  empirical "
      << (s.empirical_verdict ? to_string(*s.empirical_verdict) : std::string("n/a")) << "  => "
      << to_string(s.combined);
  if (!s.empirical_note.empty()) out << "  (" << s.empirical_note << ")";
  out << '\n';
}

int cmd_classify(const Options& o, std::ostream& out) {
  const PhaseResponse g = resolve_prf(o.prf, true, o.eps_list);
  EmpiricalOptions eo;
  eo.probe = o.probe;
  const FullReport r = full_report(g, o.eps_list, eo);
  if (o.json) {
    out << to_json(r).dump(2) << '\n';
    return kOk;
  }
  out << "prf " << r.prf_name << '\n';
  out << "g~ corners: m0 " << short_num(r.tilde.m0) << "  m1 " << short_num(r.tilde.m1) << "  => "
      << to_string(r.tilde.lemma3_verdict) << (r.tilde.very_strong ? " (very strong)" : "")
      << (r.tilde.exact ? "" : " [numeric]") << '\n';
  for (std::size_t i = 0; i < r.eps_list.size(); ++i) {
    const bool disagree =
        std::find(r.disagreements.begin(), r.disagreements.end(), r.eps_list[i]) != r.disagreements.end();
    out << "eps " << short_num(r.eps_list[i]) << (disagree ? "  ** g and g~ disagree **" : "") << '\n';
    print_row(out, "g ", r.exact[i]);
    print_row(out, "g~", r.infinitesimal[i]);
  }
  for (const auto& n : r.notes) out << "note: " << n << '\n';
  return kOk;
}

IterationOptions iteration_options(const Options& o) {
  IterationOptions it;
  it.max_iters = o.max_iters;
  it.conv_tol = o.tol;
  return it;
}

int cmd_iterate(const Options& o, std::ostream& out) {
  const PhaseResponse g = resolve_prf(o.prf, true, {o.eps});
  const IterationTrace t = iterate(g, Phase(o.phi0), Strength(o.eps), iteration_options(o));
  if (o.json)
    out << to_json(t).dump(2) << '\n';
  else
    write_trace_csv(out, t);
  return kOk;
}

std::vector<double> parse_range(const std::string& text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string::npos ? c1 : text.find(':', c1 + 1);
  if (c2 == std::string::npos) throw Error(ErrorKind::InvalidParameter, "eps-range must be a:b:n");
  double a, b;
  long n;
  try {
    std::size_t used;
    a = std::stod(text.substr(0, c1), &used);
    if (used != c1) throw std::invalid_argument("a");
    b = std::stod(text.substr(c1 + 1, c2 - c1 - 1), &used);
    if (used != c2 - c1 - 1) throw std::invalid_argument("b");
    n = std::stol(text.substr(c2 + 1), &used);
    if (used != text.size() - c2 - 1) throw std::invalid_argument("n");
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::InvalidParameter, "eps-range must be a:b:n, got '" + text + "'");
  }
  if (n < 1) throw Error(ErrorKind::InvalidParameter, "eps-range count must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  if (n > 1) out.back() = b;
  for (double e : out) Strength{e};
  return out;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  const std::vector<double> eps = parse_range(o.eps_range);
  const PhaseResponse g = resolve_prf(o.prf, true, eps);
  const Phase phi0(o.phi0);
  const IterationOptions it = iteration_options(o);
  // Batches of concurrent runs; rows keep the order of the range.
  const std::size_t batch = std::max(1u, std::thread::hardware_concurrency());
  std::vector<SweepRow> rows;
  for (std::size_t start = 0; start < eps.size(); start += batch) {
    std::vector<std::future<IterationTrace>> jobs;
    for (std::size_t i = start; i < std::min(eps.size(), start + batch); ++i)
      jobs.push_back(std::async(std::launch::async, [&, e = eps[i]] { return iterate(g, phi0, Strength(e), it); }));
    for (std::size_t j = 0; j < jobs.size(); ++j) {
      const IterationTrace t = jobs[j].get();
      rows.push_back({eps[start + j], t.verdict, t.iters_used, t.final_phase()});
    }
  }
  write_sweep_csv(out, rows);
  return kOk;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const PhaseResponse g = resolve_prf(o.prf, true, {o.eps});
  if (o.cycles < 1) throw Error(ErrorKind::InvalidParameter, "cycles must be >= 1");
  const auto events = simulate_events(g, Phase(o.phi_a), Phase(o.phi_b), Strength(o.eps), 2 * o.cycles);
  if (o.json)
    out << to_json(events).dump(2) << '\n';
  else
    write_events_csv(out, events);
  return kOk;
}

int cmd_reproduce(const Options& o, std::ostream& out) {
  const acceptance::CriterionResult r = acceptance::run_case(o.case_name);
  acceptance::print(out, r);
  return r.passed() ? kOk : kFailed;
}

int usage_error(std::ostream& err, const std::string& what) {
  err << "error: " << what << '\n';
  return kUsage;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pulse-coupled oscillator synchrony toolkit", "pco"};
  app.require_subcommand(1);
  Options o;

  const std::string prf_help = "builtin name (" + [] {
    std::string s;
    for (const auto& n : builtin_names()) s += (s.empty() ? "" : ", ") + n;
    return s;
  }() + ") or expr:<expression in phi, eps>";

  auto* validate = app.add_subcommand("validate", "check the response-function axioms on a grid");
  validate->add_option("--prf", o.prf, prf_help)->required();
  validate->add_option("--eps-list", o.eps_list, "comma-separated pulse strengths")->delimiter(',');
  validate->add_option("--grid", o.grid, "phi grid points")->check(CLI::Range(3, 1'000'000));
  validate->add_flag("--json", o.json, "JSON report");

  auto* classify_cmd = app.add_subcommand("classify", "stability of synchrony under g and g~");
  classify_cmd->add_option("--prf", o.prf, prf_help)->required();
  classify_cmd->add_option("--eps-list", o.eps_list, "comma-separated pulse strengths")->delimiter(',')->required();
  classify_cmd->add_option("--probe", o.probe, "initial distance from synchrony for empirical runs");
  classify_cmd->add_flag("--json", o.json, "JSON report");

  auto* iterate_cmd = app.add_subcommand("iterate", "iterate the strobe map; CSV k,phi");
  iterate_cmd->add_option("--prf", o.prf, prf_help)->required();
  iterate_cmd->add_option("--phi0", o.phi0, "initial phase")->required();
  iterate_cmd->add_option("--eps", o.eps, "pulse strength")->required();
  iterate_cmd->add_option("--max-iters", o.max_iters, "iteration limit");
  iterate_cmd->add_option("--tol", o.tol, "convergence tolerance");
  iterate_cmd->add_flag("--json", o.json, "JSON trace instead of CSV");

  auto* sweep = app.add_subcommand("sweep", "iterate over an eps range; CSV eps,verdict,iters,final_phi");
  sweep->add_option("--prf", o.prf, prf_help)->required();
  sweep->add_option("--eps-range", o.eps_range, "a:b:n, n evenly spaced values from a to b")->required();
  sweep->add_option("--phi0", o.phi0, "initial phase")->required();
  sweep->add_option("--max-iters", o.max_iters, "iteration limit");
  sweep->add_option("--tol", o.tol, "convergence tolerance");

  auto* simulate = app.add_subcommand("simulate", "event-driven two-oscillator simulation; CSV events");
  simulate->add_option("--prf", o.prf, prf_help)->required();
  simulate->add_option("--phiA", o.phi_a, "initial phase of A")->required();
  simulate->add_option("--phiB", o.phi_b, "initial phase of B")->required();
  simulate->add_option("--eps", o.eps, "pulse strength")->required();
  simulate->add_option("--cycles", o.cycles, "cycles to simulate (two firings each)")->required();
  simulate->add_flag("--json", o.json, "JSON events instead of CSV");

  auto* reproduce = app.add_subcommand("reproduce", "run one acceptance case and report each assertion");
  reproduce->add_option("--case", o.case_name, "case name")
      ->required()
      ->check(CLI::IsMember(acceptance::case_names()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*validate) return cmd_validate(o, out);
    if (*classify_cmd) return cmd_classify(o, out);
    if (*iterate_cmd) return cmd_iterate(o, out);
    if (*sweep) return cmd_sweep(o, out);
    if (*simulate) return cmd_simulate(o, out);
    if (*reproduce) return cmd_reproduce(o, out);
  } catch (const expr::ParseError& e) {
    err << "parse error at position " << e.position() << ": expected " << e.expected() << ", found "
        << e.found() << '\n';
    return kUsage;
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::InvalidParameter:
      case ErrorKind::InvalidPrf:
      case ErrorKind::Parse:
        return usage_error(err, e.what());
      default:
        err << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
        return kFailed;
    }
  }
  return kUsage;
}

}  // namespace pco::cli
