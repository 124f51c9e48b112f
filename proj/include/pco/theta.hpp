#pragma once

// Ermentrout-Kopell theta neuron, d(theta)/dt = 1 - cos(theta) + I (1 + cos(theta)),
// driven by instantaneous charge injections v -> v + delta_v with
// v = 1/2 + tan(theta/2)/2. theta lives in the principal interval (-pi, pi);
// the neuron fires at the endpoint.

#include "pco/prf.hpp"

namespace pco::theta {

struct ThetaParams {
  double drive = 1.0;    // I > 0
  double delta_v = 0.0;  // >= 0, excitatory only

  /// Throws InvalidParameter unless drive > 0 and delta_v >= 0.
  void check() const;

  /// eps = 2 delta_v / sqrt(I).
  double strength() const;
};

/// T = pi / sqrt(I).
double period(const ThetaParams& params);

/// v = 1/2 + tan(theta/2)/2. Throws InfiniteVoltage at theta = +-pi.
double voltage(double theta);

/// theta -> 2 atan(tan(theta/2) + 2 delta_v).
double charge_jump(double theta, double delta_v);

/// phi = 1/2 + atan(tan(theta/2) / sqrt(I)) / pi.
Phase theta_to_phase(double theta, double drive);

/// Inverse of theta_to_phase. Throws EndpointSingularity at phi in {0,1}.
double phase_to_theta(Phase phi, double drive);

/// g(phi, eps) = atan(tan((phi - 1/2) pi) + eps) / pi - (phi - 1/2), with
/// exact partials. Evaluated in a cancellation-free form near phi = 0, 1.
PhaseResponse theta_prf();

}  // namespace pco::theta
