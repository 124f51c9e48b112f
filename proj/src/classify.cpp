#include "pco/classify.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <future>

#include "pco/calculus.hpp"

namespace pco {

std::string to_string(StrongVerdict v) {
  switch (v) {
    case StrongVerdict::StronglyAttracting: return "strongly-attracting";
    case StrongVerdict::StronglyRepelling: return "strongly-repelling";
    case StrongVerdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::string to_string(EmpiricalVerdict v) {
  switch (v) {
    case EmpiricalVerdict::Attracting: return "attracting";
    case EmpiricalVerdict::Repelling: return "repelling";
    case EmpiricalVerdict::Neutral: return "neutral";
    case EmpiricalVerdict::Asymmetric: return "asymmetric";
    case EmpiricalVerdict::Undetermined: return "undetermined";
  }
  return "unknown";
}

std::string to_string(CombinedVerdict v) {
  switch (v) {
    case CombinedVerdict::StronglyAttracting: return "strongly-attracting";
    case CombinedVerdict::WeaklyAttracting: return "weakly-attracting";
    case CombinedVerdict::StronglyRepelling: return "strongly-repelling";
    case CombinedVerdict::WeaklyRepelling: return "weakly-repelling";
    case CombinedVerdict::Neutral: return "neutral";
    case CombinedVerdict::Undetermined: return "undetermined";
  }
  return "unknown";
}

std::string to_string(Lemma3Verdict v) {
  switch (v) {
    case Lemma3Verdict::StronglyAttractingSmallEps: return "strongly-attracting-small-eps";
    case Lemma3Verdict::StronglyRepellingSmallEps: return "strongly-repelling-small-eps";
    case Lemma3Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

StabilityReport classify_strong(const PhaseResponse& prf, Strength eps) {
  StabilityReport r;
  r.eps = eps;
  r.derivative_product = sync_derivative(prf, eps);
  const double m = std::abs(r.derivative_product);
  if (m < 1.0 - kClassifyTol)
    r.strong_verdict = StrongVerdict::StronglyAttracting;
  else if (m > 1.0 + kClassifyTol)
    r.strong_verdict = StrongVerdict::StronglyRepelling;
  else
    r.strong_verdict = StrongVerdict::Inconclusive;

  switch (r.strong_verdict) {
    case StrongVerdict::StronglyAttracting: r.combined = CombinedVerdict::StronglyAttracting; break;
    case StrongVerdict::StronglyRepelling: r.combined = CombinedVerdict::StronglyRepelling; break;
    case StrongVerdict::Inconclusive: r.combined = CombinedVerdict::Undetermined; break;
  }
  return r;
}

namespace {

enum class Side { Attract, Repel, Neutral, Unknown };

Side probe_side(const PhaseResponse& prf, Strength eps, double start, double endpoint,
                const EmpiricalOptions& opts) {
  const double tol = opts.tol;
  const auto toward_endpoint = [&](const IterationTrace& t) {
    return (endpoint == 0.0 && t.verdict == Verdict::ConvergedTo0) ||
           (endpoint == 1.0 && t.verdict == Verdict::ConvergedTo1);
  };

  IterationOptions window_opts;
  window_opts.max_iters = opts.escape_window;
  window_opts.conv_tol = tol;
  const IterationTrace window = iterate(prf, Phase(start), eps, window_opts);
  if (toward_endpoint(window)) return Side::Attract;

  const auto& ph = window.phases;
  const bool constant = std::all_of(ph.begin(), ph.end(), [&](double p) { return std::abs(p - start) <= tol; });
  if (constant) return Side::Neutral;

  const auto dist = [&](double p) { return std::abs(p - endpoint); };
  if (dist(ph[1]) > dist(ph[0])) {
    bool monotone = true;
    for (std::size_t k = 0; k + 1 < ph.size(); ++k) {
      if (dist(ph[k + 1]) < dist(ph[k]) - tol) {
        monotone = false;
        break;
      }
    }
    return monotone ? Side::Repel : Side::Unknown;
  }

  IterationOptions full_opts;
  full_opts.max_iters = opts.max_iters;
  full_opts.conv_tol = tol;
  const IterationTrace full = iterate(prf, Phase(start), eps, full_opts);
  return toward_endpoint(full) ? Side::Attract : Side::Unknown;
}

}  // namespace

EmpiricalVerdict classify_empirical(const PhaseResponse& prf, Strength eps, EmpiricalOptions opts) {
  if (!(opts.probe > 0.0 && opts.probe <= 0.1))
    throw Error(ErrorKind::InvalidParameter, "probe offset must lie in (0, 0.1]");
  const Side low = probe_side(prf, eps, opts.probe, 0.0, opts);
  const Side high = probe_side(prf, eps, 1.0 - opts.probe, 1.0, opts);
  if (low == Side::Unknown || high == Side::Unknown) return EmpiricalVerdict::Undetermined;
  if (low != high) return EmpiricalVerdict::Asymmetric;
  switch (low) {
    case Side::Attract: return EmpiricalVerdict::Attracting;
    case Side::Repel: return EmpiricalVerdict::Repelling;
    case Side::Neutral: return EmpiricalVerdict::Neutral;
    case Side::Unknown: break;
  }
  return EmpiricalVerdict::Undetermined;
}

StabilityReport classify(const PhaseResponse& prf, Strength eps, EmpiricalOptions opts) {
  StabilityReport r = classify_strong(prf, eps);
  try {
    r.empirical_verdict = classify_empirical(prf, eps, opts);
  } catch (const Error& e) {
    r.empirical_verdict = EmpiricalVerdict::Undetermined;
    r.empirical_note = e.what();
  }
  if (r.strong_verdict == StrongVerdict::Inconclusive) {
    switch (*r.empirical_verdict) {
      case EmpiricalVerdict::Attracting: r.combined = CombinedVerdict::WeaklyAttracting; break;
      case EmpiricalVerdict::Repelling: r.combined = CombinedVerdict::WeaklyRepelling; break;
      case EmpiricalVerdict::Neutral: r.combined = CombinedVerdict::Neutral; break;
      default: r.combined = CombinedVerdict::Undetermined; break;
    }
  }
  return r;
}

TildeReport classify_lemma3(const PhaseResponse& prf) {
  TildeReport t;
  const PartialEstimate e0 = estimate_partial(prf, PartialKind::D2PhiEps, Phase(0.0), Strength(0.0));
  const PartialEstimate e1 = estimate_partial(prf, PartialKind::D2PhiEps, Phase(1.0), Strength(0.0));
  t.m0 = e0.value;
  t.m1 = e1.value;
  t.exact = e0.exact && e1.exact;
  const double sum = t.m0 + t.m1;
  const double tol = kClassifyTol;
  t.very_strong = sum < -tol;
  if (t.very_strong || (std::abs(sum) <= tol && t.m0 * t.m1 < -tol * tol))
    t.lemma3_verdict = Lemma3Verdict::StronglyAttractingSmallEps;
  else if (sum > tol)
    t.lemma3_verdict = Lemma3Verdict::StronglyRepellingSmallEps;
  else
    t.lemma3_verdict = Lemma3Verdict::Inconclusive;
  return t;
}

namespace {

// Coarse behavior class used to compare g and g~.
std::string behavior(CombinedVerdict v) {
  switch (v) {
    case CombinedVerdict::StronglyAttracting:
    case CombinedVerdict::WeaklyAttracting: return "attracting";
    case CombinedVerdict::StronglyRepelling:
    case CombinedVerdict::WeaklyRepelling: return "repelling";
    case CombinedVerdict::Neutral: return "neutral";
    case CombinedVerdict::Undetermined: return "undetermined";
  }
  return "undetermined";
}

std::string fmt(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace

FullReport full_report(const PhaseResponse& prf, const std::vector<double>& eps_list,
                       EmpiricalOptions opts) {
  if (eps_list.empty()) throw Error(ErrorKind::InvalidParameter, "eps list must not be empty");
  for (double e : eps_list) Strength{e};

  FullReport rep;
  rep.prf_name = prf.name();
  rep.eps_list = eps_list;

  const PhaseResponse tilde = make_infinitesimal(prf);
  rep.tilde = classify_lemma3(prf);

  using Pair = std::pair<StabilityReport, StabilityReport>;
  std::vector<std::future<Pair>> jobs;
  jobs.reserve(eps_list.size());
  for (double e : eps_list) {
    jobs.push_back(std::async(std::launch::async, [&prf, &tilde, e, opts] {
      return Pair{classify(prf, Strength(e), opts), classify(tilde, Strength(e), opts)};
    }));
  }
  for (auto& j : jobs) {
    Pair p = j.get();
    rep.exact.push_back(std::move(p.first));
    rep.infinitesimal.push_back(std::move(p.second));
  }

  for (const auto& w : tilde.warnings()) rep.notes.push_back(w);

  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    const auto& g = rep.exact[i];
    const auto& gt = rep.infinitesimal[i];
    const std::string bg = behavior(g.combined);
    const std::string bt = behavior(gt.combined);
    if (bg != "undetermined" && bt != "undetermined" && bg != bt) {
      rep.disagreements.push_back(eps_list[i]);
      rep.notes.push_back("eps=" + fmt(eps_list[i]) + ": g~ predicts " + to_string(gt.combined) +
                          " but g is " + to_string(g.combined));
    }
  }

  const auto smallest = std::min_element(eps_list.begin(), eps_list.end()) - eps_list.begin();
  const auto& g_small = rep.exact[static_cast<std::size_t>(smallest)];
  const std::string at = "eps=" + fmt(eps_list[static_cast<std::size_t>(smallest)]);
  if (rep.tilde.very_strong) {
    rep.theorem3_confirmed = g_small.strong_verdict == StrongVerdict::StronglyAttracting;
    rep.notes.push_back(*rep.theorem3_confirmed
                            ? "very strongly g~-attracting; g strongly attracting at " + at + " as required"
                            : "very strongly g~-attracting but g is " + to_string(g_small.strong_verdict) +
                                  " at " + at + " (eps may not be small enough)");
  }
  if (rep.tilde.lemma3_verdict == Lemma3Verdict::StronglyRepellingSmallEps) {
    const bool ok = g_small.strong_verdict == StrongVerdict::StronglyRepelling;
    rep.notes.push_back(ok ? "strongly g~-repelling; g strongly repelling at " + at + " as required"
                           : "strongly g~-repelling but g is " + to_string(g_small.strong_verdict) +
                                 " at " + at + " (eps may not be small enough)");
  }
  return rep;
}

}  // namespace pco
