#include "pco/calculus.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <cmath>
#include <memory>
#include <sstream>
#include <vector>

namespace pco {

std::string to_string(PartialKind k) {
  switch (k) {
    case PartialKind::DPhi: return "dphi";
    case PartialKind::DEps: return "deps";
    case PartialKind::D2PhiEps: return "d2_phi_eps";
  }
  return "unknown";
}

namespace {

constexpr double h = kDiffStep;

double checked(const PhaseResponse& prf, double phi, double eps) {
  const double g = prf(phi, eps);
  if (!std::isfinite(g)) throw EvaluationSingularity(phi, eps, prf.name());
  return g;
}

// Second-order stencil in phi; one-sided when a central step would leave [0,1].
template <class F>
double diff_phi(F&& f, double phi) {
  if (phi - h < 0.0) return (-3.0 * f(phi) + 4.0 * f(phi + h) - f(phi + 2.0 * h)) / (2.0 * h);
  if (phi + h > 1.0) return (3.0 * f(phi) - 4.0 * f(phi - h) + f(phi - 2.0 * h)) / (2.0 * h);
  return (f(phi + h) - f(phi - h)) / (2.0 * h);
}

// Same in eps; one-sided near eps = 0.
template <class F>
double diff_eps(F&& f, double eps) {
  if (eps - h < 0.0) return (-3.0 * f(eps) + 4.0 * f(eps + h) - f(eps + 2.0 * h)) / (2.0 * h);
  return (f(eps + h) - f(eps - h)) / (2.0 * h);
}

double exact_or_throw(const PrfFunction& f, const PhaseResponse& prf, double phi, double eps) {
  const double v = f(phi, eps);
  if (!std::isfinite(v)) throw EvaluationSingularity(phi, eps, prf.name() + " (exact partial)");
  return v;
}

}  // namespace

double numeric_partial(const PhaseResponse& prf, PartialKind kind, Phase phi, Strength eps) {
  const double p = phi.value();
  const double e = eps.value();
  switch (kind) {
    case PartialKind::DPhi:
      return diff_phi([&](double x) { return checked(prf, x, e); }, p);
    case PartialKind::DEps:
      return diff_eps([&](double y) { return checked(prf, p, y); }, e);
    case PartialKind::D2PhiEps:
      return diff_phi(
          [&](double x) { return diff_eps([&](double y) { return checked(prf, x, y); }, e); }, p);
  }
  return 0.0;
}

PartialEstimate estimate_partial(const PhaseResponse& prf, PartialKind kind, Phase phi, Strength eps) {
  PartialEstimate out;
  out.off_axis = kind == PartialKind::D2PhiEps && eps.value() != 0.0;
  const ExactPartials& ex = prf.partials();
  const PrfFunction* exact = nullptr;
  switch (kind) {
    case PartialKind::DPhi: exact = &ex.dphi; break;
    case PartialKind::DEps: exact = &ex.deps; break;
    case PartialKind::D2PhiEps: exact = &ex.d2_phi_eps; break;
  }
  if (*exact) {
    out.value = exact_or_throw(*exact, prf, phi, eps);
    out.exact = true;
  } else {
    out.value = numeric_partial(prf, kind, phi, eps);
  }
  return out;
}

double partial(const PhaseResponse& prf, PartialKind kind, Phase phi, Strength eps) {
  return estimate_partial(prf, kind, phi, eps).value;
}

namespace {

constexpr std::size_t kSplinePoints = 2048;

struct Slope {
  // c(phi) = dg/deps(phi, 0) and its phi-derivative.
  std::function<double(double)> value;
  std::function<double(double)> prime;
};

Slope tabulated_slope(const PhaseResponse& prf) {
  std::vector<double> samples(kSplinePoints);
  const double step = 1.0 / static_cast<double>(kSplinePoints - 1);
  for (std::size_t i = 0; i < kSplinePoints; ++i) {
    const double phi = std::min(1.0, static_cast<double>(i) * step);
    samples[i] = numeric_partial(prf, PartialKind::DEps, Phase(phi), Strength(0.0));
  }
  // Clamped ends: the corner slopes are the quantities the classifier reads.
  const double left = numeric_partial(prf, PartialKind::D2PhiEps, Phase(0.0), Strength(0.0));
  const double right = numeric_partial(prf, PartialKind::D2PhiEps, Phase(1.0), Strength(0.0));
  using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;
  auto spline = std::make_shared<const Spline>(samples.data(), samples.size(), 0.0, step, left, right);
  return {[spline](double phi) { return (*spline)(phi); },
          [spline](double phi) { return spline->prime(phi); }};
}

Slope exact_slope(const PhaseResponse& prf) {
  Slope s;
  s.value = [deps = prf.partials().deps](double phi) { return deps(phi, 0.0); };
  if (prf.has_exact_d2()) {
    s.prime = [d2 = prf.partials().d2_phi_eps](double phi) { return d2(phi, 0.0); };
  } else {
    s.prime = [prf](double phi) {
      return numeric_partial(prf, PartialKind::D2PhiEps, Phase(phi), Strength(0.0));
    };
  }
  return s;
}

const std::vector<double> kRevalidationEps = {0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 1.0};

}  // namespace

PhaseResponse make_infinitesimal(const PhaseResponse& prf) {
  const Slope slope = prf.has_exact_deps() ? exact_slope(prf) : tabulated_slope(prf);

  auto c = slope.value;
  auto cp = slope.prime;
  ExactPartials partials{
      [cp](double phi, double eps) { return cp(phi) * eps; },
      [c](double phi, double) { return c(phi); },
      [cp](double phi, double) { return cp(phi); },
  };
  PhaseResponse tilde(prf.name() + "-tilde", [c](double phi, double eps) { return c(phi) * eps; },
                      std::move(partials), Provenance::InfinitesimalOf, prf.name());

  std::optional<double> valid_max;
  for (double eps : kRevalidationEps) {
    const ValidationReport r = validate_prf(tilde, {eps});
    if (!r.all_passed()) {
      for (const auto& chk : r.checks) {
        if (chk.passed) continue;
        std::ostringstream os;
        os.precision(17);
        os << "infinitesimal response fails " << to_string(chk.axiom) << " at eps=" << eps
           << " (phi=" << chk.phi << ", violation " << chk.worst_violation << ")";
        tilde.add_warning(os.str());
      }
      break;
    }
    valid_max = eps;
  }
  tilde.set_valid_eps_max(valid_max);
  return tilde;
}

}  // namespace pco
