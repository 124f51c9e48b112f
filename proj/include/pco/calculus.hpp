#pragma once

#include "pco/prf.hpp"

namespace pco {

enum class PartialKind { DPhi, DEps, D2PhiEps };

std::string to_string(PartialKind k);

/// Finite-difference step used for both phi and eps.
inline constexpr double kDiffStep = 1e-6;

struct PartialEstimate {
  double value = 0.0;
  bool exact = false;
  /// Mixed partial requested away from eps = 0, where the theory never needs it.
  bool off_axis = false;
};

/// Partial derivative of g at (phi, eps). Uses the exact evaluator when the
/// response function carries one; otherwise second-order finite differences,
/// one-sided where phi or eps sits on its domain boundary.
PartialEstimate estimate_partial(const PhaseResponse& prf, PartialKind kind, Phase phi, Strength eps);

double partial(const PhaseResponse& prf, PartialKind kind, Phase phi, Strength eps);

/// Finite-difference estimate only, ignoring exact evaluators.
double numeric_partial(const PhaseResponse& prf, PartialKind kind, Phase phi, Strength eps);

/// g~(phi, eps) = dg/deps(phi, 0) * eps.
///
/// Uses the parent's exact dg/deps when present. Otherwise dg/deps(., 0) is
/// tabulated on 2048 phi points and interpolated with a cubic B-spline.
/// The result is re-validated for eps <= 1; failures become warnings and the
/// largest valid sampled eps is recorded.
PhaseResponse make_infinitesimal(const PhaseResponse& prf);

}  // namespace pco
