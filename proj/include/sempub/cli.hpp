#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sempub::cli {

// Exit codes shared by every subcommand.
enum ExitCode : int {
    kOk = 0,
    kNegative = 1,  // no-match / not-covers / not-intersects
    kUsage = 2,
    kVerifyFail = 3,
    kMappingGap = 4,
};

// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sempub::cli
