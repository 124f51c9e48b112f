#include "pco/theta.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace pco::theta {

using std::numbers::pi;

void ThetaParams::check() const {
  if (!(drive > 0.0) || !std::isfinite(drive))
    throw Error(ErrorKind::InvalidParameter, "theta neuron drive I must be > 0");
  if (!(delta_v >= 0.0) || !std::isfinite(delta_v))
    throw Error(ErrorKind::InvalidParameter, "voltage jump delta_v must be >= 0");
}

double ThetaParams::strength() const {
  check();
  return 2.0 * delta_v / std::sqrt(drive);
}

double period(const ThetaParams& params) {
  params.check();
  return pi / std::sqrt(params.drive);
}

namespace {

void require_principal(double theta) {
  if (!(std::abs(theta) < pi)) {
    std::ostringstream os;
    os.precision(17);
    os << "theta " << theta << " outside (-pi, pi)";
    throw Error(ErrorKind::InvalidParameter, os.str());
  }
}

}  // namespace

double voltage(double theta) {
  if (std::abs(theta) == pi)
    throw Error(ErrorKind::InfiniteVoltage, "voltage is infinite when the neuron fires (theta = +-pi)");
  require_principal(theta);
  return 0.5 + 0.5 * std::tan(0.5 * theta);
}

double charge_jump(double theta, double delta_v) {
  require_principal(theta);
  if (!(delta_v >= 0.0)) throw Error(ErrorKind::InvalidParameter, "delta_v must be >= 0");
  return 2.0 * std::atan(std::tan(0.5 * theta) + 2.0 * delta_v);
}

Phase theta_to_phase(double theta, double drive) {
  require_principal(theta);
  if (!(drive > 0.0)) throw Error(ErrorKind::InvalidParameter, "drive I must be > 0");
  return Phase::clamped(0.5 + std::atan(std::tan(0.5 * theta) / std::sqrt(drive)) / pi);
}

double phase_to_theta(Phase phi, double drive) {
  if (phi.value() == 0.0 || phi.value() == 1.0)
    throw Error(ErrorKind::EndpointSingularity, "phase 0 and 1 map to theta = +-pi (firing)");
  if (!(drive > 0.0)) throw Error(ErrorKind::InvalidParameter, "drive I must be > 0");
  return 2.0 * std::atan(std::sqrt(drive) * std::tan((phi.value() - 0.5) * pi));
}

namespace {

// x = tan((phi - 1/2) pi); finite for every double phi in (0,1).
double stretched(double phi) { return std::tan((phi - 0.5) * pi); }

double theta_g(double phi, double eps) {
  if (phi <= 0.0 || phi >= 1.0 || eps == 0.0) return 0.0;
  const double x = stretched(phi);
  // atan(x + eps) - atan(x) without cancellation for large |x|.
  const double denom = 1.0 + x * x + eps * x;
  double diff = std::atan(eps / denom);
  if (denom < 0.0) diff += pi;
  return diff / pi;
}

double theta_dphi(double phi, double eps) {
  if (phi <= 0.0 || phi >= 1.0 || eps == 0.0) return 0.0;
  const double x = stretched(phi);
  const double y = x + eps;
  return -(2.0 * eps * x + eps * eps) / (1.0 + y * y);
}

double theta_deps(double phi, double eps) {
  if (eps == 0.0) {
    const double s = std::sin(pi * phi);
    return s * s / pi;
  }
  if (phi <= 0.0 || phi >= 1.0) return 0.0;
  const double y = stretched(phi) + eps;
  return 1.0 / (pi * (1.0 + y * y));
}

double theta_d2(double phi, double eps) {
  if (eps == 0.0) return std::sin(2.0 * pi * phi);
  if (phi <= 0.0 || phi >= 1.0) return 0.0;
  const double x = stretched(phi);
  const double y = x + eps;
  const double q = 1.0 + y * y;
  return -2.0 * y * (1.0 + x * x) / (q * q);
}

}  // namespace

PhaseResponse theta_prf() {
  return PhaseResponse("theta", theta_g, ExactPartials{theta_dphi, theta_deps, theta_d2},
                       Provenance::Builtin);
}

}  // namespace pco::theta
