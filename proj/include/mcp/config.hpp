#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace mcp {

// Flat key = value text. '#' starts a comment; blank lines are ignored.
// Every lookup error names the source and line of the offending entry.
class Config {
 public:
  struct Entry {
    std::string value;
    int line = 0;
  };

  static Config parse(const std::string& text, const std::string& source = "<config>");
  static Config load(const std::string& path);

  // Later assignments win; used for command-line overrides.
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  std::string str(const std::string& key, const std::string& fallback) const;
  std::string str(const std::string& key) const;
  double real(const std::string& key, double fallback) const;
  double real(const std::string& key) const;
  std::int64_t integer(const std::string& key, std::int64_t fallback) const;
  std::int64_t integer(const std::string& key) const;
  bool boolean(const std::string& key, bool fallback) const;

  // Throws ConfigError at the first key outside `known`.
  void check_keys(const std::set<std::string>& known) const;

  const std::map<std::string, Entry>& entries() const { return entries_; }
  const std::string& source() const { return source_; }

 private:
  std::string where(const std::string& key) const;
  const Entry& at(const std::string& key) const;

  std::string source_;
  std::map<std::string, Entry> entries_;
};

}  // namespace mcp
