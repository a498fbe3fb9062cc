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

#ifndef PROTOSELECT_EXPERIMENTS_H_
#define PROTOSELECT_EXPERIMENTS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "protoselect/dataset.h"
#include "protoselect/kernel.h"
#include "protoselect/selectors.h"

namespace protoselect {

struct BenchRow {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  std::size_t m = 0;
  double t_dash = 0;    // seconds, selection only
  double t_greedy = 0;  // seconds, selection only
  double f_dash = 0;
  double f_greedy = 0;

  double ratio() const { return t_dash > 0 ? t_greedy / t_dash : 0.0; }
};

// Times single-threaded ProtoDash and ProtoGreedy on one seeded gaussian
// instance (dim-dimensional, median-heuristic bandwidth). Kernel and mean
// map construction are excluded from the timings.
BenchRow RunBench(std::size_t n1, std::size_t n2, std::size_t m,
                  std::size_t dim, std::uint64_t seed);

struct CvEntry {
  double sigma = 0;
  double train_objective = 0;
  // Squared MMD between the held-out target rows and the weighted prototypes.
  double heldout_mmd2 = 0;
};

// Bandwidth hook: for each candidate sigma, selects on a seeded split of the
// target rows and scores the held-out part. Reports only; picks nothing.
std::vector<CvEntry> CrossValidateBandwidth(const Dataset& target,
                                            const Dataset& source,
                                            const KernelSpec& base,
                                            std::span<const double> sigmas,
                                            Method method,
                                            const SelectionConfig& config,
                                            double holdout_fraction);

}  // namespace protoselect

#endif  // PROTOSELECT_EXPERIMENTS_H_
