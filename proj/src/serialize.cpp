#include "pco/serialize.hpp"

#include <cstdio>

namespace pco {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json to_json(const ValidationReport& r, const std::string& prf_name) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"axiom", to_string(c.axiom)},
                      {"passed", c.passed},
                      {"worst_violation", c.worst_violation},
                      {"phi", c.phi},
                      {"eps", c.eps},
                      {"heuristic", c.heuristic},
                      {"note", c.note}});
  }
  return {{"prf", prf_name},
          {"grid", {{"phi_count", r.phi_count}, {"eps_list", r.eps_list}}},
          {"passed", r.all_passed()},
          {"checks", checks}};
}

Json to_json(const StabilityReport& r) {
  return {{"eps", r.eps},
          {"derivative_product", r.derivative_product},
          {"strong_verdict", to_string(r.strong_verdict)},
          {"empirical_verdict", r.empirical_verdict ? Json(to_string(*r.empirical_verdict)) : Json()},
          {"combined", to_string(r.combined)},
          {"empirical_note", r.empirical_note}};
}

Json to_json(const TildeReport& r) {
  return {{"m0", r.m0},
          {"m1", r.m1},
          {"sum", r.m0 + r.m1},
          {"lemma3_verdict", to_string(r.lemma3_verdict)},
          {"very_strong", r.very_strong},
          {"exact", r.exact}};
}

Json to_json(const FullReport& r) {
  Json g = Json::array(), gt = Json::array();
  for (const auto& s : r.exact) g.push_back(to_json(s));
  for (const auto& s : r.infinitesimal) gt.push_back(to_json(s));
  return {{"prf", r.prf_name},
          {"eps_list", r.eps_list},
          {"g", g},
          {"g_tilde", gt},
          {"tilde", to_json(r.tilde)},
          {"disagreements", r.disagreements},
          {"theorem3_confirmed", r.theorem3_confirmed ? Json(*r.theorem3_confirmed) : Json()},
          {"notes", r.notes}};
}

Json to_json(const IterationTrace& t) {
  return {{"eps", t.eps},
          {"verdict", to_string(t.verdict)},
          {"limit", t.limit},
          {"cycle_period", t.cycle_period},
          {"iters_used", t.iters_used},
          {"phases", t.phases}};
}

Json to_json(const std::vector<FiringEvent>& events) {
  Json out = Json::array();
  for (const auto& e : events) {
    out.push_back({{"time", e.time},
                   {"firer", to_string(e.firer)},
                   {"phase_other_before", e.phase_other_before},
                   {"phase_other_after", e.phase_other_after},
                   {"synchronous", e.synchronous}});
  }
  return out;
}

void write_trace_csv(std::ostream& os, const IterationTrace& t) {
  os << "k,phi\n";
  for (std::size_t k = 0; k < t.phases.size(); ++k) os << k << ',' << format_double(t.phases[k]) << '\n';
}

void write_events_csv(std::ostream& os, const std::vector<FiringEvent>& events) {
  os << "time,firer,phase_other_before,phase_other_after\n";
  for (const auto& e : events) {
    os << format_double(e.time) << ',' << (e.synchronous ? "AB" : to_string(e.firer)) << ','
       << format_double(e.phase_other_before) << ',' << format_double(e.phase_other_after) << '\n';
  }
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "eps,verdict,iters,final_phi\n";
  for (const auto& r : rows) {
    os << format_double(r.eps) << ',' << to_string(r.verdict) << ',' << r.iters << ','
       << format_double(r.final_phi) << '\n';
  }
}

}  // namespace pco
