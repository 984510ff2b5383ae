#ifndef ULTRAJET_CLI_CONFIG_HPP
#define ULTRAJET_CLI_CONFIG_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace ultrajet::cli {

class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigEntry {
  std::string key;
  std::string value;
  int line = 0;
};

/// Flat "key = value" lines; '#' starts a comment, blank lines are skipped. Keys are
/// long flag names without the leading dashes. Duplicate keys are an error.
std::vector<ConfigEntry> parse_config(const std::string& text, const std::string& origin);
std::vector<ConfigEntry> read_config(const std::string& path);

/// Appends "--key value" for every entry whose flag does not already appear in args.
/// The values true and false switch boolean flags on and off.
std::vector<std::string> merge_config(std::vector<std::string> args, const std::vector<ConfigEntry>& entries);

}  // namespace ultrajet::cli

#endif
