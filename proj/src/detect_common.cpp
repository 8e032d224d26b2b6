// Copyright 2026 The aedkit Authors.
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

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "aed/detect.hpp"
#include "aed/error.hpp"

namespace aed {

namespace {

struct MethodInfo {
  Method method;
  std::string_view code;
  bool scorer;
  bool text;
  bool token;  // token and span labeling
};

constexpr std::array<MethodInfo, 18> kMethods = {{
    {Method::kCL, "CL", false, true, true},
    {Method::kCS, "CS", true, true, false},
    {Method::kDE, "DE", false, true, true},
    {Method::kIRT, "IRT", false, true, true},
    {Method::kLA, "LA", false, true, true},
    {Method::kLS, "LS", true, true, false},
    {Method::kPE, "PE", false, true, true},
    {Method::kRE, "RE", false, true, true},
    {Method::kVN, "VN", false, false, true},
    {Method::kBC, "BC", true, true, true},
    {Method::kCU, "CU", true, true, true},
    {Method::kDM, "DM", true, true, false},
    {Method::kDU, "DU", true, true, true},
    {Method::kKNN, "KNN", true, true, true},
    {Method::kLE, "LE", true, false, true},
    {Method::kMD, "MD", true, true, true},
    {Method::kPM, "PM", true, true, true},
    {Method::kWD, "WD", true, false, true},
}};

const MethodInfo& info(Method m) {
  for (const MethodInfo& i : kMethods) {
    if (i.method == m) return i;
  }
  throw Error("unknown method");
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::string header_field(const std::string& header, const std::string& key) {
  std::istringstream ss(header);
  std::string tok;
  while (ss >> tok) {
    if (tok.rfind(key + "=", 0) == 0) return tok.substr(key.size() + 1);
  }
  return "";
}

template <typename T, typename Parse>
std::vector<T> read_body(const std::vector<std::string>& lines,
                         const std::filesystem::path& path,
                         std::span<const Unit> units, Parse parse) {
  std::vector<T> values(units.size());
  std::size_t next = 0;
  for (std::size_t l = 1; l < lines.size(); ++l) {
    if (lines[l].empty()) continue;
    const auto tab = lines[l].find('\t');
    if (tab == std::string::npos) {
      throw DataError(path.string() + ":" + std::to_string(l + 1) +
                      ": expected uid<TAB>value");
    }
    const std::string uid = lines[l].substr(0, tab);
    if (next >= units.size() || units[next].uid != uid) {
      throw DataError(path.string() + ":" + std::to_string(l + 1) +
                      ": unexpected uid '" + uid + "'");
    }
    values[next] = parse(lines[l].substr(tab + 1), l + 1);
    ++next;
  }
  if (next != units.size()) {
    throw DataError(path.string() + ": missing uid '" + units[next].uid + "'");
  }
  return values;
}

}  // namespace

std::string_view method_code(Method m) { return info(m).code; }

Method parse_method(std::string_view code) {
  std::string upper(code);
  for (char& c : upper) c = static_cast<char>(std::toupper(c));
  for (const MethodInfo& i : kMethods) {
    if (i.code == upper) return i.method;
  }
  throw ConfigError("unknown method '" + std::string(code) + "'");
}

std::vector<Method> all_methods() {
  std::vector<Method> out;
  for (const MethodInfo& i : kMethods) out.push_back(i.method);
  return out;
}

bool is_scorer(Method m) { return info(m).scorer; }

bool applies_to(Method m, Task task) {
  return task == Task::kText ? info(m).text : info(m).token;
}

Polarity method_polarity(Method m) {
  return (m == Method::kDM || m == Method::kPM) ? Polarity::kLowIsSuspicious
                                                : Polarity::kHighIsSuspicious;
}

std::string_view polarity_name(Polarity p) {
  return p == Polarity::kHighIsSuspicious ? "high" : "low";
}

std::size_t FlagVector::count() const {
  return static_cast<std::size_t>(std::count(flags.begin(), flags.end(), true));
}

void check_covers(const FlagVector& flags, std::span<const Unit> units) {
  if (flags.uids.size() != units.size() ||
      flags.flags.size() != units.size()) {
    throw DataError(flags.method + " flags do not cover the corpus");
  }
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (flags.uids[i] != units[i].uid) {
      throw DataError(flags.method + " flags: unexpected uid '" +
                      flags.uids[i] + "'");
    }
  }
}

void check_covers(const ScoreVector& scores, std::span<const Unit> units) {
  if (scores.uids.size() != units.size() ||
      scores.scores.size() != units.size()) {
    throw DataError(scores.method + " scores do not cover the corpus");
  }
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (scores.uids[i] != units[i].uid) {
      throw DataError(scores.method + " scores: unexpected uid '" +
                      scores.uids[i] + "'");
    }
    if (!std::isfinite(scores.scores[i])) {
      throw DataError(scores.method + " scores: non-finite value for '" +
                      scores.uids[i] + "'");
    }
  }
}

void write_flags(const FlagVector& flags, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "#aed-flags v1 method=" << flags.method << "\n";
  for (std::size_t i = 0; i < flags.size(); ++i) {
    out << flags.uids[i] << '\t' << (flags.flags[i] ? 1 : 0) << '\n';
  }
}

FlagVector read_flags(const std::filesystem::path& path,
                      std::span<const Unit> units) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty() || lines[0].rfind("#aed-flags v1", 0) != 0) {
    throw DataError(path.string() + ": missing #aed-flags v1 header");
  }
  FlagVector out;
  out.method = header_field(lines[0], "method");
  const std::vector<char> values = read_body<char>(
      lines, path, units, [&](const std::string& v, std::size_t line) {
        if (v != "0" && v != "1") {
          throw DataError(path.string() + ":" + std::to_string(line) +
                          ": flag must be 0 or 1");
        }
        return v == "1" ? char{1} : char{0};
      });
  for (std::size_t i = 0; i < units.size(); ++i) {
    out.uids.push_back(units[i].uid);
    out.flags.push_back(values[i] != 0);
  }
  return out;
}

void write_scores(const ScoreVector& scores,
                  const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "#aed-scores v1 method=" << scores.method
      << " polarity=" << polarity_name(scores.polarity) << "\n";
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out << scores.uids[i] << '\t' << format_double(scores.scores[i]) << '\n';
  }
}

ScoreVector read_scores(const std::filesystem::path& path,
                        std::span<const Unit> units) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty() || lines[0].rfind("#aed-scores v1", 0) != 0) {
    throw DataError(path.string() + ": missing #aed-scores v1 header");
  }
  ScoreVector out;
  out.method = header_field(lines[0], "method");
  const std::string pol = header_field(lines[0], "polarity");
  if (pol == "high") {
    out.polarity = Polarity::kHighIsSuspicious;
  } else if (pol == "low") {
    out.polarity = Polarity::kLowIsSuspicious;
  } else {
    throw DataError(path.string() + ": polarity must be high or low");
  }
  out.scores = read_body<double>(
      lines, path, units, [&](const std::string& v, std::size_t line) {
        std::size_t used = 0;
        double x = 0.0;
        try {
          x = std::stod(v, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != v.size() || !std::isfinite(x)) {
          throw DataError(path.string() + ":" + std::to_string(line) +
                          ": bad score '" + v + "'");
        }
        return x;
      });
  for (const Unit& u : units) out.uids.push_back(u.uid);
  return out;
}

}  // namespace aed
