// Copyright 2026 The sykrl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace sykrl {

struct OptimizerConfig {
  int max_evaluations = 1000;
  double initial_step = 0.5;  // radians; simplex edge length
  double tolerance = 1e-10;   // spread of simplex values that counts as converged
  std::uint64_t seed = 0;     // drives the restart simplex orientation

  void validate() const;
};

struct OptimizeResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  int restarts = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

// Nelder-Mead with dimension-adaptive coefficients (Gao & Han, 2012). When the
// simplex collapses before the budget is spent, the search restarts once from
// the incumbent with a fresh simplex whose edge signs come from the seeded RNG.
// The returned point is the best one ever evaluated, so the result is never
// worse than x0.
OptimizeResult nelder_mead(const Objective& f, std::vector<double> x0, const OptimizerConfig& config);

}  // namespace sykrl
