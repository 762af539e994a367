#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace arw::cli {

/// Runs the command line `args` (without the program name). Reports go to
/// `out`; the run manifest and diagnostics go to `err`.
/// Exit codes: 0 success, 1 failure, 2 missing input file, other nonzero
/// values for malformed command lines.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace arw::cli
