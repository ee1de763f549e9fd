#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace plh::cli {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int {
    kExitOk = 0,
    kExitRefuted = 1,       ///< a verification found a violation
    kExitPrecondition = 2,  ///< bad input, domain or hypothesis gate
    kExitInconclusive = 3,
    kExitUsage = 64,
};

/// Runs one invocation. `args` excludes the program name. The report goes to
/// `out` unless --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Appends `--key=value` for every `key = value` line of the file whose key
/// is not already present in `args`, so command-line flags win.
std::vector<std::string> merge_config(const std::vector<std::string>& args, const std::string& path);

} // namespace plh::cli
