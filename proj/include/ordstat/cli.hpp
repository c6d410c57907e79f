#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ordstat::cli {

/// Runs the command line `args` (without the program name). Reports go to
/// `out`, diagnostics to `err`. Returns 0 on success, 2 for invalid input or
/// a violated precondition, 1 for a numeric failure or a failed check.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ordstat::cli
