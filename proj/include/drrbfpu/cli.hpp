#pragma once

#include <string>
#include <vector>

namespace drrbfpu {

/// Parses and dispatches a command line (without the program name).
/// Exit status 0 on success, 2 on flag errors (with a usage message), 1 on
/// computational failures (with a one-line diagnostic).
int run_cli(std::vector<std::string> args);

}  // namespace drrbfpu
