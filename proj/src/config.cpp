#include "mcp/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "mcp/errors.hpp"

namespace mcp {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& source) {
  Config c;
  c.source_ = source;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(number) +
                        ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(source + ":" + std::to_string(number) + ": empty key");
    }
    if (c.entries_.count(key)) {
      throw ConfigError(source + ":" + std::to_string(number) + ": duplicate key '" +
                        key + "' (first on line " +
                        std::to_string(c.entries_[key].line) + ")");
    }
    c.entries_[key] = {value, number};
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  return parse(buf.str(), path);
}

void Config::set(const std::string& key, const std::string& value) {
  entries_[key] = {value, 0};
}

std::string Config::where(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end() || it->second.line == 0) {
    return "command line: key '" + key + "'";
  }
  return source_ + ":" + std::to_string(it->second.line) + ": key '" + key + "'";
}

const Config::Entry& Config::at(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) {
    throw ConfigError(source_ + ": missing required key '" + key + "'");
  }
  return it->second;
}

std::string Config::str(const std::string& key, const std::string& fallback) const {
  return has(key) ? at(key).value : fallback;
}

std::string Config::str(const std::string& key) const { return at(key).value; }

double Config::real(const std::string& key) const {
  const std::string& v = at(key).value;
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) {
    throw ConfigError(where(key) + " expects a number, got '" + v + "'");
  }
  return out;
}

double Config::real(const std::string& key, double fallback) const {
  return has(key) ? real(key) : fallback;
}

std::int64_t Config::integer(const std::string& key) const {
  const std::string& v = at(key).value;
  std::int64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(where(key) + " expects an integer, got '" + v + "'");
  }
  return out;
}

std::int64_t Config::integer(const std::string& key, std::int64_t fallback) const {
  return has(key) ? integer(key) : fallback;
}

bool Config::boolean(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string& v = at(key).value;
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(where(key) + " expects true or false, got '" + v + "'");
}

void Config::check_keys(const std::set<std::string>& known) const {
  for (const auto& [key, entry] : entries_) {
    if (!known.count(key)) throw ConfigError(where(key) + " is not recognised");
  }
}

}  // namespace mcp
