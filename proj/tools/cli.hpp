#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cycloid::cli {

/// Parses and dispatches one command line (without the program name).
/// Exit codes: 0 success / property holds, 1 property fails, 2 usage or
/// parameter error, 3 resource bound hit.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace cycloid::cli
