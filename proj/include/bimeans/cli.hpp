#ifndef BIMEANS_CLI_HPP
#define BIMEANS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace bimeans::cli {

/// Exit codes: 0 success, 1 a check found a violation (or a scan failed),
/// 2 usage, configuration or numerical domain error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace bimeans::cli

#endif
