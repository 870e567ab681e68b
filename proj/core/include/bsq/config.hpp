#pragma once
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bsq/errors.hpp"

namespace bsq {

// Flat dotted-key configuration:  key.subkey = value  per line, '#' starts a
// comment, blank lines ignored. Values are scalars or comma-separated lists.
// Insertion order is preserved so a parsed config serializes back
// byte-identically (modulo comments/whitespace).
class Config {
 public:
  static Config parse_text(const std::string& text);  // throws ConfigError
  static Config parse_file(const std::string& path);

  bool has(const std::string& key) const;
  std::string get_str(const std::string& key) const;  // throws if missing
  std::string get_str(const std::string& key, const std::string& dflt) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double dflt) const;
  long get_int(const std::string& key) const;
  long get_int(const std::string& key, long dflt) const;
  bool get_bool(const std::string& key, bool dflt) const;
  std::vector<double> get_list(const std::string& key) const;
  std::vector<std::string> get_str_list(const std::string& key) const;

  void set(const std::string& key, const std::string& value);
  std::string serialize() const;

  // Throws ConfigError when a key is outside the known set.
  void check_known_keys(const std::vector<std::string>& known) const;

  const std::vector<std::pair<std::string, std::string>>& items() const {
    return items_;
  }

 private:
  std::vector<std::pair<std::string, std::string>> items_;
  std::map<std::string, std::size_t> index_;
};

}  // namespace bsq
