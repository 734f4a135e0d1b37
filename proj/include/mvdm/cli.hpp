#pragma once

#include <string>
#include <vector>

namespace mvdm::cli {

// Runs one CLI invocation. `args` excludes the program name. Returns the
// process exit code: 0 success, 1 numeric failure, 2 configuration error.
// Messages go to stderr; data artifacts to files.
int run(const std::vector<std::string>& args);

} // namespace mvdm::cli
