#ifndef ULTRAJET_CLI_APP_HPP
#define ULTRAJET_CLI_APP_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace ultrajet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitAssertion = 2;

/// args excludes the program name. The report goes to `out` (or the --out file);
/// diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ultrajet::cli

#endif
