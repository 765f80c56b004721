#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rpkit::cli {

enum ExitCode : int {
    Pass = 0,
    Fail = 1,
    Usage = 2,
};

/// Runs one invocation. args excludes the program name. Envelopes and help go to out,
/// one-line diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace rpkit::cli
