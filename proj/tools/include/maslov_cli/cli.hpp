#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace maslov::cli {

/// Runs one pulsemaslov invocation. `args` excludes the program name.
/// Returns 0 on success, 2 on bad arguments, 1 on computational failure (an
/// error JSON object is written to `err`).
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace maslov::cli
