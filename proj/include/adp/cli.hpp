#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace adp::cli {

/// Runs the `adpredict` command line. `args` excludes the program name.
/// Returns 0 on success, 1 when a pipeline stage fails and 2 on usage errors;
/// diagnostics go to `err` and name the failing stage and input.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace adp::cli
