#include "pco/builtins.hpp"

#include "pco/calculus.hpp"
#include "pco/theta.hpp"

namespace pco {

PhaseResponse example1_prf() {
  const PhaseResponse base = theta::theta_prf();
  const ExactPartials& bp = base.partials();
  // Added term a(phi) eps^2 with a = phi (1-phi)^2, a' = (1-phi)(1-3phi).
  auto a = [](double phi) { return phi * (1.0 - phi) * (1.0 - phi); };
  auto ap = [](double phi) { return (1.0 - phi) * (1.0 - 3.0 * phi); };
  return PhaseResponse(
      "example1",
      [base, a](double phi, double eps) { return base(phi, eps) + a(phi) * eps * eps; },
      ExactPartials{
          [d = bp.dphi, ap](double phi, double eps) { return d(phi, eps) + ap(phi) * eps * eps; },
          [d = bp.deps, a](double phi, double eps) { return d(phi, eps) + 2.0 * a(phi) * eps; },
          [d = bp.d2_phi_eps, ap](double phi, double eps) {
            return d(phi, eps) + 2.0 * ap(phi) * eps;
          },
      });
}

PhaseResponse example2_prf() {
  // g = b(phi) eps - 2 p(phi) eps^2, b = phi (1-phi), p = phi (phi-1)^2 (2phi-1).
  auto b = [](double phi) { return phi * (1.0 - phi); };
  auto bp = [](double phi) { return 1.0 - 2.0 * phi; };
  auto p = [](double phi) { return phi * (phi - 1.0) * (phi - 1.0) * (2.0 * phi - 1.0); };
  // p' = (phi-1) (8 phi^2 - 7 phi + 1)
  auto pp = [](double phi) { return (phi - 1.0) * (8.0 * phi * phi - 7.0 * phi + 1.0); };
  return PhaseResponse(
      "example2",
      [=](double phi, double eps) { return b(phi) * eps - 2.0 * p(phi) * eps * eps; },
      ExactPartials{
          [=](double phi, double eps) { return bp(phi) * eps - 2.0 * pp(phi) * eps * eps; },
          [=](double phi, double eps) { return b(phi) - 4.0 * p(phi) * eps; },
          [=](double phi, double eps) { return bp(phi) - 4.0 * pp(phi) * eps; },
      });
}

PhaseResponse zero_prf() {
  auto zero = [](double, double) { return 0.0; };
  return PhaseResponse("zero", zero, ExactPartials{zero, zero, zero});
}

PhaseResponse builtin_prf(std::string_view name) {
  if (name == "theta") return theta::theta_prf();
  if (name == "theta-tilde") return make_infinitesimal(theta::theta_prf());
  if (name == "example1") return example1_prf();
  if (name == "example2") return example2_prf();
  if (name == "zero") return zero_prf();
  throw Error(ErrorKind::InvalidParameter, "unknown builtin response function '" + std::string(name) + "'");
}

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {"theta", "theta-tilde", "example1", "example2", "zero"};
  return names;
}

}  // namespace pco
