#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace ccast {

// Declarative run configuration: `[section]` headers over `key = value`
// lines, '#' comments. Unknown keys are rejected at lookup time by the
// commands, not here.
class Config {
 public:
  static Config parse(std::istream& in, const std::string& source_name = "<config>");
  static Config load(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  long long get_int(const std::string& section, const std::string& key, long long fallback) const;
  std::vector<std::string> get_list(const std::string& section, const std::string& key,
                                    const std::vector<std::string>& fallback) const;
  std::vector<int> get_int_list(const std::string& section, const std::string& key,
                                const std::vector<int>& fallback) const;

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

}  // namespace ccast
