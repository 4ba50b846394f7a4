// Copyright 2026 The Somrep Authors
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

#include "somrep/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace somrep::config {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_string(buf.str());
}

Config Config::from_string(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        " is not `key = value`");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("empty key or value on config line " +
                        std::to_string(lineno));
    cfg.values_[key] = value;
  }
  return cfg;
}

void Config::set(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("--set expects KEY=VALUE, got: " + assignment);
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void Config::set(const std::string& key, const std::string& value) {
  if (key.empty() || value.empty())
    throw ConfigError("empty key or value in override");
  values_[key] = value;
}

Config Config::resolve(const std::map<std::string, std::string>& defaults) const {
  Config out;
  out.values_ = defaults;
  for (const auto& [k, v] : values_) {
    if (!defaults.count(k)) throw ConfigError("unknown config key: " + k);
    out.values_[k] = v;
  }
  return out;
}

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

std::string Config::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing config key: " + key);
  return it->second;
}

double Config::get_double(const std::string& key) const {
  const std::string s = get_string(key);
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError("key " + key + " is not a number: " + s);
  }
  if (pos != s.size())
    throw ConfigError("key " + key + " has trailing characters: " + s);
  return v;
}

int Config::get_int(const std::string& key) const {
  const double v = get_double(key);
  const int i = static_cast<int>(std::llround(v));
  if (std::abs(v - i) > 1e-9)
    throw ConfigError("key " + key + " must be an integer");
  return i;
}

bool Config::get_bool(const std::string& key) const {
  const std::string s = get_string(key);
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ConfigError("key " + key + " must be true/false");
}

std::vector<double> Config::get_list(const std::string& key) const {
  std::vector<double> out;
  std::istringstream in(get_string(key));
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("key " + key + " has a non-numeric list entry: " + item);
    }
  }
  if (out.empty()) throw ConfigError("key " + key + " is an empty list");
  return out;
}

std::vector<int> Config::get_int_list(const std::string& key) const {
  std::vector<int> out;
  for (double v : get_list(key)) {
    const int i = static_cast<int>(std::llround(v));
    if (std::abs(v - i) > 1e-9)
      throw ConfigError("key " + key + " must list integers");
    out.push_back(i);
  }
  return out;
}

std::string format_g9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  // Normalize negative zero for stable goldens.
  std::string s(buf);
  if (s == "-0") s = "0";
  return s;
}

TableWriter::TableWriter(std::vector<std::string> columns, Format format)
    : columns_(std::move(columns)), format_(format) {}

void TableWriter::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_.size())
    throw ConfigError("row width does not match the header");
  rows_.push_back(cells);
}

void TableWriter::add_row(const std::vector<double>& cells) {
  std::vector<std::string> s;
  s.reserve(cells.size());
  for (double v : cells) s.push_back(format_g9(v));
  add_row(s);
}

void TableWriter::add_annotation(const std::string& key,
                                 const std::string& json_value) {
  annotations_.emplace_back(key, json_value);
}

namespace {

std::string json_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

bool looks_numeric(const std::string& s) {
  if (s.empty()) return false;
  std::size_t pos = 0;
  try {
    (void)std::stod(s, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == s.size();
}

}  // namespace

std::string TableWriter::str() const {
  std::ostringstream out;
  if (format_ == Format::Csv) {
    for (std::size_t i = 0; i < columns_.size(); ++i)
      out << (i ? "," : "") << columns_[i];
    out << '\n';
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i)
        out << (i ? "," : "") << row[i];
      out << '\n';
    }
    return out.str();
  }
  out << "{\n  \"columns\": [";
  for (std::size_t i = 0; i < columns_.size(); ++i)
    out << (i ? ", " : "") << json_quote(columns_[i]);
  out << "],\n  \"rows\": [\n";
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    out << "    [";
    for (std::size_t i = 0; i < rows_[r].size(); ++i) {
      out << (i ? ", " : "");
      if (looks_numeric(rows_[r][i]))
        out << rows_[r][i];
      else
        out << json_quote(rows_[r][i]);
    }
    out << "]" << (r + 1 < rows_.size() ? "," : "") << '\n';
  }
  out << "  ]";
  for (const auto& [k, v] : annotations_) out << ",\n  " << json_quote(k) << ": " << v;
  out << "\n}\n";
  return out.str();
}

void TableWriter::write_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file: " + path);
  out << str();
}

}  // namespace somrep::config
