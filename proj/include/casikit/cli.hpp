#pragma once

#include <string>
#include <vector>

namespace casikit::cli {

/// Run the command-line front end. Returns the process exit code:
/// 0 success, 1 usage/config/data error, 2 numerical non-convergence,
/// 3 I/O failure. All results are materialized before the output file is
/// opened, so a nonzero exit never leaves a partial output behind.
int run(const std::vector<std::string>& argv);

}  // namespace casikit::cli
