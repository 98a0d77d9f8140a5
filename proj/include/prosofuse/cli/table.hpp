// Copyright 2026 The Prosofuse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PROSOFUSE_CLI_TABLE_HPP_
#define PROSOFUSE_CLI_TABLE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "prosofuse/common.hpp"
#include "prosofuse/trainer/config.hpp"

namespace prosofuse {

struct RenderedTable {
  std::string text;
  std::string csv;
};

namespace table_detail {

// Two decimals, half rounded up. floor(v*100 + 0.5) alone misrounds values
// like 0.275 whose double is 0.27499...; the 1e-9 slack absorbs that without
// promoting genuinely smaller values.
inline std::string round2(double v) {
  const double scaled = std::floor(v * 100.0 + 0.5 + 1e-9) / 100.0;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", scaled);
  return buf;
}

inline std::string full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string variant_cell(const EvalReport& r) {
  std::string v = r.variant;
  if (r.gt_ped) v += " (+ GT PED)";
  return v;
}

}  // namespace table_detail

// Lays the reports out as an aligned text table plus a CSV twin. Columns are
// fixed (variant + the five metrics); metrics a report does not carry render
// as "-" in text and an empty CSV cell. Text cells round to two decimals,
// CSV keeps full precision.
inline RenderedTable report_table(const std::vector<EvalReport>& reports) {
  if (reports.empty()) throw ArgumentError("report_table: no reports");
  static const char* kHeaders[] = {"variant",      "pitch_mse", "energy_mse",
                                   "duration_mse", "mcd",       "log_f0_rmse"};
  constexpr std::size_t kCols = 6;

  std::vector<std::vector<std::string>> text_rows, csv_rows;
  for (const auto& r : reports) {
    r.validate();
    std::vector<std::string> t(kCols), c(kCols);
    t[0] = c[0] = table_detail::variant_cell(r);
    t[1] = table_detail::round2(r.pitch_mse);
    c[1] = table_detail::full(r.pitch_mse);
    t[2] = table_detail::round2(r.energy_mse);
    c[2] = table_detail::full(r.energy_mse);
    t[3] = table_detail::round2(r.duration_mse);
    c[3] = table_detail::full(r.duration_mse);
    t[4] = r.has_mcd ? table_detail::round2(r.mcd) : "-";
    c[4] = r.has_mcd ? table_detail::full(r.mcd) : "";
    t[5] = r.has_log_f0 ? table_detail::round2(r.log_f0_rmse) : "-";
    c[5] = r.has_log_f0 ? table_detail::full(r.log_f0_rmse) : "";
    text_rows.push_back(std::move(t));
    csv_rows.push_back(std::move(c));
  }

  std::size_t width[kCols];
  for (std::size_t j = 0; j < kCols; ++j) {
    width[j] = std::string(kHeaders[j]).size();
    for (const auto& row : text_rows)
      width[j] = std::max(width[j], row[j].size());
  }

  RenderedTable out;
  const auto emit_row = [&](const std::vector<std::string>& row) {
    for (std::size_t j = 0; j < kCols; ++j) {
      if (j > 0) out.text += "  ";
      out.text += row[j];
      // Left-align the variant column, right-align numbers.
      const std::size_t pad = width[j] - row[j].size();
      if (j == 0) {
        out.text.append(pad, ' ');
      } else {
        out.text.insert(out.text.size() - row[j].size(), pad, ' ');
      }
    }
    while (!out.text.empty() && out.text.back() == ' ') out.text.pop_back();
    out.text += "\n";
  };

  std::vector<std::string> header(kHeaders, kHeaders + kCols);
  emit_row(header);
  std::string rule;
  for (std::size_t j = 0; j < kCols; ++j) {
    if (j > 0) rule += "  ";
    rule.append(width[j], '-');
  }
  out.text += rule + "\n";
  for (const auto& row : text_rows) emit_row(row);

  for (std::size_t j = 0; j < kCols; ++j) {
    if (j > 0) out.csv += ",";
    out.csv += kHeaders[j];
  }
  out.csv += "\n";
  for (const auto& row : csv_rows) {
    for (std::size_t j = 0; j < kCols; ++j) {
      if (j > 0) out.csv += ",";
      out.csv += row[j];
    }
    out.csv += "\n";
  }
  return out;
}

}  // namespace prosofuse

#endif  // PROSOFUSE_CLI_TABLE_HPP_
