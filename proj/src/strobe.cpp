#include "pco/strobe.hpp"

#include <algorithm>
#include <cmath>

#include "pco/calculus.hpp"

namespace pco {

Phase strobe_map(const PhaseResponse& prf, Phase phi, Strength eps) {
  // B fires: A sits at 1 - phi and is shifted.
  const Phase a = Phase::clamped(1.0 - phi.value());
  const double shift_a = eval_g(prf, a, eps);
  Phase::clamped(a.value() + shift_a);
  // A fires next, by which time B has advanced to phi - g(1 - phi).
  const Phase b = Phase::clamped(phi.value() - shift_a);
  return Phase::clamped(b.value() + eval_g(prf, b, eps));
}

double strobe_formula(const PhaseResponse& prf, double phi, double eps) {
  const double shift_a = prf(1.0 - phi, eps);
  const double b = phi - shift_a;
  return b + prf(b, eps);
}

double sync_derivative(const PhaseResponse& prf, Strength eps) {
  const double d0 = partial(prf, PartialKind::DPhi, Phase(0.0), eps);
  const double d1 = partial(prf, PartialKind::DPhi, Phase(1.0), eps);
  return (1.0 + d0) * (1.0 + d1);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::ConvergedTo0: return "converged-to-0";
    case Verdict::ConvergedTo1: return "converged-to-1";
    case Verdict::ConvergedToInterior: return "converged-to-interior";
    case Verdict::MaxIters: return "max-iters";
    case Verdict::CycleDetected: return "cycle-detected";
  }
  return "unknown";
}

namespace {

constexpr int kCertificateSamples = 48;
constexpr double kCertificateSpan = 1e-3;

// F moves every sampled psi between `phi` and `endpoint` toward the endpoint
// without overshooting it. Close to 1 a contraction of high order falls below
// the spacing of doubles, so F(psi) == psi is tolerated once it starts and
// persists to the innermost sample; the outermost sample must move.
bool endpoint_certificate(const PhaseResponse& prf, Strength eps, double phi, double endpoint) {
  const double dist = std::abs(phi - endpoint);
  if (dist == 0.0) return true;
  const double sign = endpoint == 0.0 ? 1.0 : -1.0;
  bool unresolved = false;
  try {
    for (int i = 0; i < kCertificateSamples; ++i) {
      const double t = static_cast<double>(i) / (kCertificateSamples - 1);
      const double psi = endpoint + sign * dist * std::pow(kCertificateSpan, t);
      const double d = sign * (psi - endpoint);
      const double next = strobe_map(prf, Phase::clamped(psi), eps);
      const double next_dist = sign * (next - endpoint);
      if (next_dist < 0.0 || next_dist > d) return false;
      if (next_dist == d) {
        if (i == 0) return false;
        unresolved = true;
      } else if (unresolved) {
        return false;
      }
    }
  } catch (const Error&) {
    return false;
  }
  return true;
}

bool is_power_of_two_multiple(std::size_t run, std::size_t base) {
  if (run < base || run % base != 0) return false;
  const std::size_t q = run / base;
  return (q & (q - 1)) == 0;
}

}  // namespace

IterationTrace iterate(const PhaseResponse& prf, Phase phi0, Strength eps, IterationOptions opts) {
  if (opts.max_iters < 1) throw Error(ErrorKind::InvalidParameter, "max_iters must be >= 1");
  if (!(opts.conv_tol > 0.0)) throw Error(ErrorKind::InvalidParameter, "conv_tol must be > 0");

  IterationTrace trace;
  trace.eps = eps;
  trace.phases.reserve(std::min<std::size_t>(opts.max_iters + 1, 1 << 16));
  trace.phases.push_back(phi0);

  const double tol = opts.conv_tol;
  const double near_endpoint = 10.0 * tol;
  double phi = phi0;
  bool moved = false;
  double last_direction = 0.0;
  std::size_t run_down = 0;
  std::size_t run_up = 0;

  auto finish = [&](Verdict v, double limit = 0.0) {
    trace.verdict = v;
    trace.limit = limit;
    return trace;
  };

  for (std::size_t k = 0; k < opts.max_iters; ++k) {
    const double next = strobe_map(prf, Phase(phi), eps);
    trace.phases.push_back(next);
    trace.iters_used = k + 1;
    const double step = next - phi;

    if (next <= near_endpoint) return finish(Verdict::ConvergedTo0, 0.0);
    if (next >= 1.0 - near_endpoint) return finish(Verdict::ConvergedTo1, 1.0);

    moved = moved || std::abs(next - phi0.value()) >= tol;
    if (step != 0.0) last_direction = step;

    if (std::abs(step) < tol) {
      if (moved) {
        if (last_direction < 0.0 && endpoint_certificate(prf, eps, next, 0.0))
          return finish(Verdict::ConvergedTo0, 0.0);
        if (last_direction > 0.0 && endpoint_certificate(prf, eps, next, 1.0))
          return finish(Verdict::ConvergedTo1, 1.0);
        return finish(Verdict::ConvergedToInterior, next);
      }
      phi = next;
      run_down = run_up = 0;
      continue;
    }

    if (step < 0.0) {
      ++run_down;
      run_up = 0;
      if (is_power_of_two_multiple(run_down, opts.monotone_run) &&
          endpoint_certificate(prf, eps, next, 0.0))
        return finish(Verdict::ConvergedTo0, 0.0);
    } else {
      ++run_up;
      run_down = 0;
      if (is_power_of_two_multiple(run_up, opts.monotone_run) &&
          endpoint_certificate(prf, eps, next, 1.0))
        return finish(Verdict::ConvergedTo1, 1.0);
    }

    // Period >= 2: compare with iterates before the current one.
    const std::size_t n = trace.phases.size();
    const std::size_t window = std::min(opts.cycle_window, n - 1);
    for (std::size_t p = 2; p <= window; ++p) {
      if (std::abs(next - trace.phases[n - 1 - p]) < tol) {
        trace.cycle_period = p;
        return finish(Verdict::CycleDetected, next);
      }
    }
    phi = next;
  }
  return finish(Verdict::MaxIters, phi);
}

const char* to_string(Oscillator o) { return o == Oscillator::A ? "A" : "B"; }

std::vector<FiringEvent> simulate_events(const PhaseResponse& prf, Phase phi_a0, Phase phi_b0,
                                         Strength eps, std::size_t n_firings) {
  if (n_firings < 1) throw Error(ErrorKind::InvalidParameter, "n_firings must be >= 1");
  std::vector<FiringEvent> events;
  events.reserve(n_firings);

  double t = 0.0;
  double a = phi_a0;
  double b = phi_b0;
  while (events.size() < n_firings) {
    const double d = std::abs(a - b);
    const bool a_fires = a >= b;
    if (std::min(d, 1.0 - d) <= kSimultaneityTolerance) {
      const double lead = std::max(a, b);
      const double dt = 1.0 - lead;
      const double other = (a_fires ? b : a) + dt;
      events.push_back({t + dt, a_fires ? Oscillator::A : Oscillator::B, other, other, true});
      break;
    }
    double& firer = a_fires ? a : b;
    double& other = a_fires ? b : a;
    const double dt = 1.0 - firer;
    t += dt;
    const Phase before = Phase::clamped(other + dt);
    const Phase after = Phase::clamped(before.value() + eval_g(prf, before, eps));
    events.push_back({t, a_fires ? Oscillator::A : Oscillator::B, before, after, false});
    firer = 0.0;
    other = after;
  }
  return events;
}

std::vector<double> strobe_samples(const std::vector<FiringEvent>& events) {
  std::vector<double> out;
  for (const auto& e : events)
    if (e.firer == Oscillator::A && !e.synchronous) out.push_back(e.phase_other_after);
  return out;
}

}  // namespace pco
