#pragma once

// key = value configuration files. Blank lines and lines starting with '#' are
// ignored; a trailing '# comment' after a value is stripped.

#include <stdexcept>
#include <string>
#include <vector>

namespace clarke::cli {

struct ConfigEntry {
  std::string key;
  std::string value;
  int line = 0;
};

/// Error carrying the 1-based line number of the offending entry.
class ConfigError : public std::runtime_error {
public:
  ConfigError(const std::string& source, int line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

private:
  int line_;
};

std::vector<ConfigEntry> parse_config(const std::string& text, const std::string& source = "config");
std::vector<ConfigEntry> read_config_file(const std::string& path);

}  // namespace clarke::cli
