#include "config_file.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace clarke::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    return {};
  }
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

bool valid_key(const std::string& key) {
  if (key.empty()) {
    return false;
  }
  for (const char c : key) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == '_';
    if (!ok) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::vector<ConfigEntry> parse_config(const std::string& text, const std::string& source) {
  std::vector<ConfigEntry> entries;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line.front() == '#') {
      continue;
    }
    const auto hash = line.find(" #");
    if (hash != std::string::npos) {
      line = trim(line.substr(0, hash));
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source, line_no, "expected 'key = value', got '" + line + "'");
    }
    ConfigEntry e{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no};
    if (!valid_key(e.key)) {
      throw ConfigError(source, line_no, "invalid key '" + e.key + "'");
    }
    if (e.value.empty()) {
      throw ConfigError(source, line_no, "missing value for key '" + e.key + "'");
    }
    if (!seen.insert(e.key).second) {
      throw ConfigError(source, line_no, "duplicate key '" + e.key + "'");
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<ConfigEntry> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file '" + path + "'");
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

}  // namespace clarke::cli
