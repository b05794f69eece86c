#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sparsevar::cli {

/// Runs one command line (without the program name). Returns the process exit
/// status; failures are reported on `err` as a single JSON line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sparsevar::cli
