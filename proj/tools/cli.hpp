#pragma once

#include <ostream>

namespace pco::cli {

/// Runs the command line. Data goes to `out`, diagnostics to `err`.
/// Returns 0 on success, 1 when a check or assertion fails, 2 on usage,
/// parse, or specification errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pco::cli
