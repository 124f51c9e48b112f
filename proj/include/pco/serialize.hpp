#pragma once

// JSON and CSV encodings used by the command-line tool. Key sets are fixed;
// absent optional values are written as null. Doubles in CSV use 17
// significant digits.

#include <json.hpp>
#include <ostream>
#include <string>
#include <vector>

#include "pco/classify.hpp"
#include "pco/prf.hpp"
#include "pco/strobe.hpp"

namespace pco {

using Json = nlohmann::ordered_json;

/// "%.17g" in the C locale.
std::string format_double(double v);

Json to_json(const ValidationReport& r, const std::string& prf_name);
Json to_json(const StabilityReport& r);
Json to_json(const TildeReport& r);
Json to_json(const FullReport& r);
Json to_json(const IterationTrace& t);
Json to_json(const std::vector<FiringEvent>& events);

/// Columns k,phi.
void write_trace_csv(std::ostream& os, const IterationTrace& t);

/// Columns time,firer,phase_other_before,phase_other_after. A synchronous
/// termination event has firer "AB".
void write_events_csv(std::ostream& os, const std::vector<FiringEvent>& events);

struct SweepRow {
  double eps;
  Verdict verdict;
  std::size_t iters;
  double final_phi;
};

/// Columns eps,verdict,iters,final_phi.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace pco
