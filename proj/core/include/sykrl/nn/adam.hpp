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
#include <iosfwd>
#include <vector>

#include "sykrl/nn/layers.hpp"

namespace sykrl::nn {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void validate() const;
};

// Bias-corrected Adam. Moment buffers are allocated on the first step and
// keyed by parameter order, so the same parameter list must be passed each time.
class Adam {
 public:
  explicit Adam(AdamConfig config = {});

  const AdamConfig& config() const { return cfg_; }
  std::uint64_t steps() const { return t_; }

  void step(const std::vector<Parameter*>& params);

  void save(std::ostream& os) const;
  void load(std::istream& is);

 private:
  AdamConfig cfg_;
  std::uint64_t t_ = 0;
  std::vector<std::vector<double>> m_, v_;
};

}  // namespace sykrl::nn
