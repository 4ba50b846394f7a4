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

#pragma once

#include <map>
#include <string>
#include <vector>

#include "somrep/common.hpp"

namespace somrep::config {

// Flat dotted-key configuration, one `key = value` per line, `#`
// comments. Keys carry explicit units as suffixes (_hz, _km, _s, _rel).
// Values override scenario defaults; keys without a default are rejected.

class Config {
 public:
  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text);

  /// Applies a `KEY=VALUE` command-line override.
  void set(const std::string& assignment);
  void set(const std::string& key, const std::string& value);

  /// Merges `*this` over `defaults`, rejecting keys absent there.
  Config resolve(const std::map<std::string, std::string>& defaults) const;

  bool has(const std::string& key) const;
  double get_double(const std::string& key) const;
  int get_int(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::vector<double> get_list(const std::string& key) const;
  std::vector<int> get_int_list(const std::string& key) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// Fixed 9-significant-digit formatting used for all emitted numbers;
/// this is the comparison precision of the golden files.
std::string format_g9(double v);

/// Tabular emitter with CSV and JSON back ends (comma separator, `.`
/// decimal point, header row, LF line endings).
class TableWriter {
 public:
  enum class Format { Csv, Json };

  TableWriter(std::vector<std::string> columns, Format format);
  void add_row(const std::vector<std::string>& cells);
  void add_row(const std::vector<double>& cells);
  /// Extra top-level JSON entries (ignored by the CSV back end).
  void add_annotation(const std::string& key, const std::string& json_value);
  std::string str() const;
  void write_file(const std::string& path) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::pair<std::string, std::string>> annotations_;
  Format format_;
};

}  // namespace somrep::config
