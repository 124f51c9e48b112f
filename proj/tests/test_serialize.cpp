#include <gtest/gtest.h>

#include <sstream>

#include "pco/builtins.hpp"
#include "pco/classify.hpp"
#include "pco/serialize.hpp"
#include "pco/theta.hpp"

using namespace pco;

namespace {

std::vector<std::string> keys(const Json& j) {
  std::vector<std::string> out;
  for (const auto& [k, v] : j.items()) out.push_back(k);
  return out;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST(FormatDouble, SeventeenSignificantDigits) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(0.0), "0");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(1e-300), "1e-300");
  EXPECT_EQ(format_double(2.0 / 3.0), "0.66666666666666663");
  EXPECT_EQ(std::stod(format_double(0.3)), 0.3);
}

TEST(Json, ValidationReportKeysAndRoundTrip) {
  const ValidationReport r = validate_prf(theta::theta_prf(), {0.1, 1.0}, 11);
  const Json j = to_json(r, "theta");
  EXPECT_EQ(keys(j), (std::vector<std::string>{"prf", "grid", "passed", "checks"}));
  EXPECT_EQ(j["checks"].size(), 6u);
  EXPECT_EQ(keys(j["checks"][0]),
            (std::vector<std::string>{"axiom", "passed", "worst_violation", "phi", "eps", "heuristic", "note"}));
  const auto back = nlohmann::json::parse(j.dump());
  EXPECT_EQ(back["grid"]["phi_count"], 11);
  EXPECT_EQ(back["grid"]["eps_list"][0].get<double>(), 0.1);
  EXPECT_TRUE(back["passed"].get<bool>());
}

TEST(Json, FullReportKeys) {
  const FullReport r = full_report(theta::theta_prf(), {0.5});
  const Json j = to_json(r);
  EXPECT_EQ(keys(j), (std::vector<std::string>{"prf", "eps_list", "g", "g_tilde", "tilde", "disagreements",
                                               "theorem3_confirmed", "notes"}));
  EXPECT_TRUE(j["theorem3_confirmed"].is_null());
  EXPECT_EQ(keys(j["g"][0]), (std::vector<std::string>{"eps", "derivative_product", "strong_verdict",
                                                       "empirical_verdict", "combined", "empirical_note"}));
  EXPECT_EQ(keys(j["tilde"]),
            (std::vector<std::string>{"m0", "m1", "sum", "lemma3_verdict", "very_strong", "exact"}));
  EXPECT_EQ(nlohmann::json::parse(j.dump())["disagreements"][0].get<double>(), 0.5);
}

TEST(Json, StrongOnlyReportHasNullEmpiricalVerdict) {
  const Json j = to_json(classify_strong(example1_prf(), Strength(0.5)));
  EXPECT_TRUE(j["empirical_verdict"].is_null());
}

TEST(Json, TraceAndEvents) {
  IterationOptions opts;
  opts.max_iters = 3;
  const IterationTrace t = iterate(theta::theta_prf(), Phase(0.3), Strength(1.0), opts);
  const Json jt = to_json(t);
  EXPECT_EQ(keys(jt), (std::vector<std::string>{"eps", "verdict", "limit", "cycle_period", "iters_used", "phases"}));
  EXPECT_EQ(jt["verdict"], "max-iters");
  EXPECT_EQ(jt["phases"].size(), 4u);

  const Json je = to_json(simulate_events(zero_prf(), Phase(0.0), Phase(0.7), Strength(0.0), 2));
  ASSERT_EQ(je.size(), 2u);
  EXPECT_EQ(keys(je[0]),
            (std::vector<std::string>{"time", "firer", "phase_other_before", "phase_other_after", "synchronous"}));
}

TEST(Csv, TraceHeaderAndRows) {
  IterationOptions opts;
  opts.max_iters = 2;
  const IterationTrace t = iterate(zero_prf(), Phase(0.1), Strength(0.5), opts);
  std::ostringstream os;
  write_trace_csv(os, t);
  EXPECT_EQ(lines(os.str()),
            (std::vector<std::string>{"k,phi", "0,0.10000000000000001", "1,0.10000000000000001",
                                      "2,0.10000000000000001"}));
}

TEST(Csv, EventsHeaderAndSynchronousFirer) {
  std::ostringstream os;
  write_events_csv(os, simulate_events(zero_prf(), Phase(0.4), Phase(0.4), Strength(0.5), 4));
  const auto l = lines(os.str());
  ASSERT_EQ(l.size(), 2u);
  EXPECT_EQ(l[0], "time,firer,phase_other_before,phase_other_after");
  EXPECT_EQ(l[1].substr(l[1].find(',') + 1, 3), "AB,");
}

TEST(Csv, SweepRows) {
  std::ostringstream os;
  write_sweep_csv(os, {{0.5, Verdict::ConvergedTo0, 12, 0.0}});
  EXPECT_EQ(os.str(), "eps,verdict,iters,final_phi\n0.5,converged-to-0,12,0\n");
}
