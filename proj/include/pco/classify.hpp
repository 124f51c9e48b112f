#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pco/prf.hpp"
#include "pco/strobe.hpp"

namespace pco {

/// Tolerance for comparing |dF/dphi| with 1 and corner partials with 0.
inline constexpr double kClassifyTol = 1e-9;

enum class StrongVerdict { StronglyAttracting, StronglyRepelling, Inconclusive };
enum class EmpiricalVerdict { Attracting, Repelling, Neutral, Asymmetric, Undetermined };
enum class CombinedVerdict {
  StronglyAttracting,
  WeaklyAttracting,
  StronglyRepelling,
  WeaklyRepelling,
  Neutral,
  Undetermined,
};
enum class Lemma3Verdict { StronglyAttractingSmallEps, StronglyRepellingSmallEps, Inconclusive };

std::string to_string(StrongVerdict v);
std::string to_string(EmpiricalVerdict v);
std::string to_string(CombinedVerdict v);
std::string to_string(Lemma3Verdict v);

struct EmpiricalOptions {
  double probe = 1e-3;
  std::size_t max_iters = 1'000'000;
  double tol = 1e-12;
  /// Steps that must move away from the endpoint for a repelling verdict.
  std::size_t escape_window = 100;
};

struct StabilityReport {
  double eps = 0.0;
  double derivative_product = 1.0;
  StrongVerdict strong_verdict = StrongVerdict::Inconclusive;
  std::optional<EmpiricalVerdict> empirical_verdict;
  CombinedVerdict combined = CombinedVerdict::Undetermined;
  /// Set when the empirical probe could not run (e.g. g is not a valid
  /// response function at this eps).
  std::string empirical_note;
};

struct TildeReport {
  double m0 = 0.0;  // d2g/dphi deps (0, 0)
  double m1 = 0.0;  // d2g/dphi deps (1, 0)
  Lemma3Verdict lemma3_verdict = Lemma3Verdict::Inconclusive;
  bool very_strong = false;
  bool exact = false;
};

/// Linearized verdict from the slope of F at synchrony. Never "neutral":
/// |product| = 1 is inconclusive.
StabilityReport classify_strong(const PhaseResponse& prf, Strength eps);

/// Iterates F from probe and 1 - probe.
///  attracting   both converge to their nearer endpoint
///  repelling    both move away monotonically over the escape window
///  neutral      both stay constant to tol over the escape window
///  asymmetric   the two sides disagree
EmpiricalVerdict classify_empirical(const PhaseResponse& prf, Strength eps, EmpiricalOptions opts = {});

/// classify_strong plus the empirical verdict and their combination.
StabilityReport classify(const PhaseResponse& prf, Strength eps, EmpiricalOptions opts = {});

/// Small-eps verdict for g~ from the corner mixed partials m0, m1:
///   m0 + m1 < 0, or m0 = -m1 != 0   strongly attracting (very strong if the former)
///   m0 + m1 > 0                     strongly repelling
TildeReport classify_lemma3(const PhaseResponse& prf);

struct FullReport {
  std::string prf_name;
  std::vector<double> eps_list;
  std::vector<StabilityReport> exact;          // g
  std::vector<StabilityReport> infinitesimal;  // g~
  TildeReport tilde;
  std::vector<std::string> notes;
  /// eps values where the g~ prediction and the g behavior differ.
  std::vector<double> disagreements;
  /// Set when very_strong holds: g strongly attracting at the smallest eps.
  std::optional<bool> theorem3_confirmed;
};

/// Per-eps reports for g and g~, the corner report, and consistency notes.
/// The eps grid is evaluated concurrently; output order follows eps_list.
FullReport full_report(const PhaseResponse& prf, const std::vector<double>& eps_list,
                       EmpiricalOptions opts = {});

}  // namespace pco
