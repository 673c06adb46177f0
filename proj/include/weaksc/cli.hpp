#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace weaksc::cli {

enum ExitCode : int { ok = 0, negative = 1, usage = 2, internal = 3 };

/// Runs the weaksc command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace weaksc::cli
