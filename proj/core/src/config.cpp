#include "bsq/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace bsq {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  for (char c : k) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '.' ||
                    c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(v);
  while (std::getline(ss, cur, ',')) out.push_back(trim(cur));
  if (!v.empty() && v.back() == ',') out.push_back("");
  return out;
}

}  // namespace

Config Config::parse_text(const std::string& text) {
  Config c;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (!valid_key(key))
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": bad key '" + key + "'");
    if (c.index_.count(key))
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": duplicate key '" + key + "'");
    c.index_[key] = c.items_.size();
    c.items_.emplace_back(key, val);
  }
  return c;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

bool Config::has(const std::string& key) const { return index_.count(key) > 0; }

std::string Config::get_str(const std::string& key) const {
  auto it = index_.find(key);
  if (it == index_.end())
    throw ConfigError("missing config key '" + key + "'");
  return items_[it->second].second;
}

std::string Config::get_str(const std::string& key,
                            const std::string& dflt) const {
  return has(key) ? get_str(key) : dflt;
}

double Config::get_double(const std::string& key) const {
  const std::string v = get_str(key);
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    throw ConfigError("config key '" + key + "': not a number: '" + v + "'");
  return x;
}

double Config::get_double(const std::string& key, double dflt) const {
  return has(key) ? get_double(key) : dflt;
}

long Config::get_int(const std::string& key) const {
  const std::string v = get_str(key);
  char* end = nullptr;
  const long x = std::strtol(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0')
    throw ConfigError("config key '" + key + "': not an integer: '" + v +
                      "'");
  return x;
}

long Config::get_int(const std::string& key, long dflt) const {
  return has(key) ? get_int(key) : dflt;
}

bool Config::get_bool(const std::string& key, bool dflt) const {
  if (!has(key)) return dflt;
  std::string v = get_str(key);
  std::transform(v.begin(), v.end(), v.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config key '" + key + "': not a boolean: '" + v + "'");
}

std::vector<double> Config::get_list(const std::string& key) const {
  std::vector<double> out;
  for (const auto& tok : split_list(get_str(key))) {
    if (tok.empty())
      throw ConfigError("config key '" + key + "': empty list entry");
    char* end = nullptr;
    const double x = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
      throw ConfigError("config key '" + key + "': not a number: '" + tok +
                        "'");
    out.push_back(x);
  }
  return out;
}

std::vector<std::string> Config::get_str_list(const std::string& key) const {
  return split_list(get_str(key));
}

void Config::set(const std::string& key, const std::string& value) {
  if (!valid_key(key)) throw ConfigError("bad config key '" + key + "'");
  auto it = index_.find(key);
  if (it != index_.end()) {
    items_[it->second].second = value;
    return;
  }
  index_[key] = items_.size();
  items_.emplace_back(key, value);
}

std::string Config::serialize() const {
  std::string out;
  for (const auto& kv : items_) {
    out += kv.first;
    out += " = ";
    out += kv.second;
    out += "\n";
  }
  return out;
}

void Config::check_known_keys(const std::vector<std::string>& known) const {
  for (const auto& kv : items_) {
    if (std::find(known.begin(), known.end(), kv.first) == known.end())
      throw ConfigError("unknown config key '" + kv.first + "'");
  }
}

}  // namespace bsq
