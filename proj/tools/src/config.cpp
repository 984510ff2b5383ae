#include "ultrajet/cli/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace ultrajet::cli {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  return std::all_of(k.begin(), k.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_'; });
}

}  // namespace

std::vector<ConfigEntry> parse_config(const std::string& text, const std::string& origin) {
  std::vector<ConfigEntry> out;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto hash = raw.find('#');
    std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    auto eq = s.find('=');
    if (eq == std::string::npos)
      throw UsageError(origin + ":" + std::to_string(line) + ": expected 'key = value'");
    std::string key = trim(s.substr(0, eq)), value = trim(s.substr(eq + 1));
    if (!valid_key(key)) throw UsageError(origin + ":" + std::to_string(line) + ": invalid key '" + key + "'");
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (!seen.insert(key).second)
      throw UsageError(origin + ":" + std::to_string(line) + ": duplicate key '" + key + "'");
    out.push_back({key, value, line});
  }
  return out;
}

std::vector<ConfigEntry> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::vector<std::string> merge_config(std::vector<std::string> args, const std::vector<ConfigEntry>& entries) {
  for (const auto& e : entries) {
    std::string flag = "--" + e.key;
    bool given = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
    if (given || e.value == "false") continue;
    args.push_back(flag);
    if (e.value != "true") args.push_back(e.value);
  }
  return args;
}

}  // namespace ultrajet::cli
