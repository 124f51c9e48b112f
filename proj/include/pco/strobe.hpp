#pragma once

// Two identical pulse-coupled oscillators A and B, time normalized so the
// period is 1. Sampling B's phase each time A completes a cycle (after A's
// pulse has acted on B) gives the strobe map
//
//   F(phi, eps) = phi - g(1 - phi, eps) + g(phi - g(1 - phi, eps), eps),
//
// whose fixed points 0 and 1 are synchrony.

#include <cstddef>
#include <vector>

#include "pco/prf.hpp"

namespace pco {

/// F(phi, eps). Throws InternalConsistency if an intermediate phase leaves
/// [0,1] beyond rounding, which means g is not a valid response function.
Phase strobe_map(const PhaseResponse& prf, Phase phi, Strength eps);

/// The same formula with no range checks on intermediate phases. Defined
/// for any g, valid or not.
double strobe_formula(const PhaseResponse& prf, double phi, double eps);

/// (1 + dg/dphi(0, eps)) (1 + dg/dphi(1, eps)), the slope of F at both
/// synchronous fixed points.
double sync_derivative(const PhaseResponse& prf, Strength eps);

enum class Verdict { ConvergedTo0, ConvergedTo1, ConvergedToInterior, MaxIters, CycleDetected };

std::string to_string(Verdict v);

struct IterationOptions {
  std::size_t max_iters = 1'000'000;
  double conv_tol = 1e-12;
  /// Iterates compared for cycle detection.
  std::size_t cycle_window = 64;
  /// Consecutive strictly monotone steps toward an endpoint before the
  /// endpoint-attraction certificate is attempted.
  std::size_t monotone_run = 1000;
};

struct IterationTrace {
  std::vector<double> phases;  // phi_0, phi_1, ...
  double eps = 0.0;
  Verdict verdict = Verdict::MaxIters;
  /// Interior fixed point for ConvergedToInterior; cycle period for CycleDetected.
  double limit = 0.0;
  std::size_t cycle_period = 0;
  std::size_t iters_used = 0;

  double final_phase() const { return phases.back(); }
};

/// Fixed-point iteration phi_{k+1} = F(phi_k, eps).
///
/// Stops when
///  - a phase comes within 10 conv_tol of 0 or 1;
///  - a step is shorter than conv_tol after the sequence has moved, either
///    at an endpoint-attracting stall or at an interior fixed point;
///  - the sequence has moved strictly toward an endpoint for monotone_run
///    steps and F(psi) lies strictly between psi and that endpoint for psi
///    sampled between the current phase and the endpoint (the limit of a
///    monotone bounded sequence is a fixed point, and there is none in between);
///  - an earlier iterate (period >= 2, last cycle_window) is revisited within conv_tol;
///  - max_iters is reached.
/// A sequence that never moves from phi_0 runs to max_iters.
IterationTrace iterate(const PhaseResponse& prf, Phase phi0, Strength eps, IterationOptions opts = {});

enum class Oscillator { A, B };

const char* to_string(Oscillator o);

struct FiringEvent {
  double time = 0.0;
  Oscillator firer = Oscillator::A;
  double phase_other_before = 0.0;
  double phase_other_after = 0.0;
  /// Both oscillators reached phase 1 together; the simulation stops here.
  bool synchronous = false;
};

/// Phases closer than this on the circle fire together.
inline constexpr double kSimultaneityTolerance = 1e-12;

/// Event-driven simulation: advance both phases linearly to the next
/// firing, shift the other oscillator by g, reset the firer to 0.
/// Stops early with a synchronous event when both fire together.
std::vector<FiringEvent> simulate_events(const PhaseResponse& prf, Phase phi_a0, Phase phi_b0,
                                         Strength eps, std::size_t n_firings);

/// B's phase right after each of A's pulses: the strobe samples.
std::vector<double> strobe_samples(const std::vector<FiringEvent>& events);

}  // namespace pco
