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

#ifndef PROTOSELECT_DATASET_H_
#define PROTOSELECT_DATASET_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace protoselect {

using Index = std::size_t;
using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Dense instances-by-features matrix. Always non-empty and finite.
class Dataset {
 public:
  // Throws an input error when the matrix is empty or has non-finite entries.
  explicit Dataset(RowMatrix values);

  static Dataset FromRows(const std::vector<std::vector<double>>& rows);

  Index rows() const { return static_cast<Index>(values_.rows()); }
  Index cols() const { return static_cast<Index>(values_.cols()); }

  std::span<const double> row(Index i) const {
    return {values_.data() + i * cols(), cols()};
  }

  const RowMatrix& values() const { return values_; }

 private:
  RowMatrix values_;
};

// Z-scores every column using mean and standard deviation pooled over all
// given datasets. Constant columns are centered but left unscaled.
void StandardizeJointly(std::span<Dataset* const> sets);

// Reads comma-separated numeric rows. Accepts LF or CRLF line endings and an
// optional single header row. Errors name the offending 1-based line.
Dataset LoadCsv(const std::string& path, bool has_header);
Dataset ParseCsv(const std::string& text, bool has_header);

}  // namespace protoselect

#endif  // PROTOSELECT_DATASET_H_
