// Copyright 2026 The lossychain Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LOSSYCHAIN_CONFIG_HPP
#define LOSSYCHAIN_CONFIG_HPP

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "core.hpp"

namespace lossychain {

/// Cannot read or write a file.
class IoError : public Error {
 public:
  IoError(const std::string& what, std::string path) : Error(what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Subcommand plus flat key = value parameters.
struct ExperimentConfig {
  std::string command;
  std::map<std::string, std::string> params;

  bool operator==(const ExperimentConfig&) const = default;

  const std::string& at(const std::string& key) const {
    const auto it = params.find(key);
    if (it == params.end()) throw ParameterError("missing parameter '" + key + "'");
    return it->second;
  }
};

namespace config {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

/// "key = value" lines; '#' starts a comment line; "command" names the subcommand.
inline ExperimentConfig parse(std::string_view text) {
  ExperimentConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ParameterError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string val = trim(std::string_view(t).substr(eq + 1));
    if (key.empty()) throw ParameterError("config line " + std::to_string(lineno) + ": empty key");
    if (key == "command") cfg.command = val;
    else if (!cfg.params.emplace(key, val).second)
      throw ParameterError("duplicate config key '" + key + "'");
  }
  return cfg;
}

inline std::string serialize(const ExperimentConfig& cfg, std::string_view prefix = "") {
  std::ostringstream os;
  os << prefix << "command = " << cfg.command << '\n';
  for (const auto& [k, v] : cfg.params) os << prefix << k << " = " << v << '\n';
  return os.str();
}

/// Reads the leading '#' block of an output file back into a config.
inline ExperimentConfig parse_header(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line, body;
  while (std::getline(in, line)) {
    if (line.rfind("#!", 0) == 0) continue;
    if (line.rfind("# ", 0) != 0) break;
    body += line.substr(2) + '\n';
  }
  return parse(body);
}

inline ExperimentConfig load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open config file '" + path + "'", path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

inline double to_double(const std::string& key, std::string_view s) {
  const std::string t = trim(s);
  double v = 0.0;
  const char* b = t.data();
  const char* e = t.data() + t.size();
  auto r = std::from_chars(b, e, v);
  if (t.empty() || r.ec != std::errc() || r.ptr != e || !std::isfinite(v))
    throw ParameterError("invalid number for '" + key + "': '" + t + "'");
  return v;
}

inline long long to_int(const std::string& key, std::string_view s) {
  const std::string t = trim(s);
  long long v = 0;
  auto r = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || r.ec != std::errc() || r.ptr != t.data() + t.size())
    throw ParameterError("invalid integer for '" + key + "': '" + t + "'");
  return v;
}

inline bool to_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ParameterError("invalid boolean for '" + key + "': '" + s + "'");
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto p = s.find(sep, start);
    out.push_back(trim(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start)));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

inline std::vector<double> to_doubles(const std::string& key, std::string_view s) {
  std::vector<double> v;
  for (const auto& x : split(s, ',')) v.push_back(to_double(key, x));
  return v;
}

/// Time with optional suffix T (multiples of 2 pi / F), e.g. "3T", "0.5T", "12.5".
inline double to_time(const std::string& key, const std::string& s, double F) {
  const std::string t = trim(s);
  if (!t.empty() && t.back() == 'T') {
    const std::string num = t.substr(0, t.size() - 1);
    const double m = num.empty() ? 1.0 : to_double(key, num);
    if (!(F > 0.0)) throw ParameterError("'" + key + "' in units of T needs F > 0");
    return m * 2.0 * pi / F;
  }
  return to_double(key, t);
}

/// "a:b:step" inclusive grid.
inline std::vector<double> to_sweep(const std::string& key, const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 3) throw ParameterError("invalid sweep for '" + key + "': expected a:b:step");
  const double a = to_double(key, parts[0]), b = to_double(key, parts[1]),
               h = to_double(key, parts[2]);
  if (!(h > 0.0) || b < a) throw ParameterError("invalid sweep for '" + key + "'");
  const auto n = static_cast<long long>(std::floor((b - a) / h + 1e-9));
  std::vector<double> v;
  for (long long i = 0; i <= n; ++i) v.push_back(a + static_cast<double>(i) * h);
  return v;
}

}  // namespace config
}  // namespace lossychain

#endif  // LOSSYCHAIN_CONFIG_HPP
