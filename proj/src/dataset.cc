// Copyright 2026 The Protoselect Authors.
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

#include "protoselect/dataset.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>

#include "protoselect/errors.h"

namespace protoselect {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInput:
      return "input";
    case ErrorKind::kNumeric:
      return "numeric";
    case ErrorKind::kDegenerate:
      return "degenerate";
    case ErrorKind::kSolver:
      return "solver";
    case ErrorKind::kGuard:
      return "guard";
  }
  return "unknown";
}

Dataset::Dataset(RowMatrix values) : values_(std::move(values)) {
  if (values_.rows() < 1 || values_.cols() < 1) {
    ThrowInput("dataset must have at least one row and one column");
  }
  if (!values_.allFinite()) ThrowInput("dataset contains non-finite values");
}

Dataset Dataset::FromRows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty()) {
    ThrowInput("dataset must have at least one row and one column");
  }
  RowMatrix values(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) {
      ThrowInput("row " + std::to_string(i) + " has " +
                 std::to_string(rows[i].size()) + " columns, expected " +
                 std::to_string(rows.front().size()));
    }
    for (std::size_t j = 0; j < rows[i].size(); ++j) values(i, j) = rows[i][j];
  }
  return Dataset(std::move(values));
}

void StandardizeJointly(std::span<Dataset* const> sets) {
  if (sets.empty()) return;
  const Index d = sets.front()->cols();
  Eigen::ArrayXd sum = Eigen::ArrayXd::Zero(d);
  double count = 0;
  for (const Dataset* set : sets) {
    if (set->cols() != d) ThrowInput("datasets disagree on feature count");
    sum += set->values().colwise().sum().transpose().array();
    count += static_cast<double>(set->rows());
  }
  const Eigen::ArrayXd mean = sum / count;
  Eigen::ArrayXd sq = Eigen::ArrayXd::Zero(d);
  for (const Dataset* set : sets) {
    sq += (set->values().array().rowwise() - mean.transpose())
              .square()
              .colwise()
              .sum()
              .transpose();
  }
  Eigen::ArrayXd scale = (sq / count).sqrt();
  for (Index j = 0; j < d; ++j) {
    if (!(scale(j) > 0)) scale(j) = 1.0;
  }
  for (Dataset* set : sets) {
    RowMatrix z = ((set->values().array().rowwise() - mean.transpose())
                       .rowwise() /
                   scale.transpose())
                      .matrix();
    *set = Dataset(std::move(z));
  }
}

namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double ParseCell(std::string_view cell, std::size_t line) {
  cell = Trim(cell);
  double value = 0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  if (!cell.empty() && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (cell.empty() || ec != std::errc() || ptr != end) {
    ThrowInput("line " + std::to_string(line) + ": non-numeric cell '" +
               std::string(cell) + "'");
  }
  if (!std::isfinite(value)) {
    ThrowInput("line " + std::to_string(line) + ": non-finite value");
  }
  return value;
}

}  // namespace

Dataset ParseCsv(const std::string& text, bool has_header) {
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  bool header_pending = has_header;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = Trim(line);
    if (view.empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    std::size_t n = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = view.find(',', start);
      const std::string_view cell =
          view.substr(start, comma == std::string_view::npos
                                 ? std::string_view::npos
                                 : comma - start);
      values.push_back(ParseCell(cell, line_no));
      ++n;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (rows == 0) {
      cols = n;
    } else if (n != cols) {
      ThrowInput("line " + std::to_string(line_no) + ": expected " +
                 std::to_string(cols) + " columns, found " +
                 std::to_string(n));
    }
    ++rows;
  }
  if (rows == 0) ThrowInput("CSV input contains no data rows");
  RowMatrix matrix(rows, cols);
  std::copy(values.begin(), values.end(), matrix.data());
  return Dataset(std::move(matrix));
}

Dataset LoadCsv(const std::string& path, bool has_header) {
  std::ifstream file(path, std::ios::binary);
  if (!file) ThrowInput("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << file.rdbuf();
  try {
    return ParseCsv(buffer.str(), has_header);
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

}  // namespace protoselect
