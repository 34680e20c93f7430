#pragma once

// Command-line front end. Subcommands: matrix, transform, fk, ik, sample,
// bench, simulate, noise-report.
//
// Exit codes: 0 success, 2 usage error (bad flags, unreadable or malformed
// input/config files), 3 domain or precondition error.

#include <iosfwd>
#include <string>
#include <vector>

namespace clarke::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDomain = 3;

inline constexpr unsigned long long kDefaultSeed = 42;

int run(int argc, char** argv, std::ostream& out, std::ostream& err);

/// Convenience wrapper: args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace clarke::cli
