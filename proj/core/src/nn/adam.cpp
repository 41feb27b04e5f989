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

#include "sykrl/nn/adam.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "sykrl/errors.hpp"

namespace sykrl::nn {

void AdamConfig::validate() const {
  if (!(learning_rate >= 0.0)) throw std::invalid_argument("Adam: learning rate must be >= 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw std::invalid_argument("Adam: betas must lie in [0, 1)");
  }
  if (!(epsilon > 0.0)) throw std::invalid_argument("Adam: epsilon must be > 0");
}

Adam::Adam(AdamConfig config) : cfg_(config) { cfg_.validate(); }

void Adam::step(const std::vector<Parameter*>& params) {
  if (m_.empty()) {
    for (Parameter* p : params) {
      m_.emplace_back(p->value.size(), 0.0);
      v_.emplace_back(p->value.size(), 0.0);
    }
  }
  if (m_.size() != params.size()) throw std::invalid_argument("Adam::step: parameter list changed");
  ++t_;
  const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (std::size_t k = 0; k < params.size(); ++k) {
    Parameter& p = *params[k];
    if (m_[k].size() != p.value.size()) throw std::invalid_argument("Adam::step: parameter size changed");
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      const double g = p.grad[i];
      m_[k][i] = cfg_.beta1 * m_[k][i] + (1.0 - cfg_.beta1) * g;
      v_[k][i] = cfg_.beta2 * v_[k][i] + (1.0 - cfg_.beta2) * g * g;
      const double mhat = m_[k][i] / c1;
      const double vhat = v_[k][i] / c2;
      p.value[i] -= cfg_.learning_rate * mhat / (std::sqrt(vhat) + cfg_.epsilon);
    }
  }
}

// Layout: step count, number of tensors, then per tensor its size, m and v.
void Adam::save(std::ostream& os) const {
  std::vector<double> header{static_cast<double>(t_), static_cast<double>(m_.size())};
  write_f64(os, header);
  for (std::size_t k = 0; k < m_.size(); ++k) {
    const double sz = static_cast<double>(m_[k].size());
    write_f64(os, std::span<const double>(&sz, 1));
    write_f64(os, m_[k]);
    write_f64(os, v_[k]);
  }
}

void Adam::load(std::istream& is) {
  std::vector<double> header(2);
  read_f64(is, header);
  if (header[0] < 0 || header[1] < 0) throw FormatError("Adam::load: corrupt header");
  t_ = static_cast<std::uint64_t>(header[0]);
  const auto count = static_cast<std::size_t>(header[1]);
  m_.assign(count, {});
  v_.assign(count, {});
  for (std::size_t k = 0; k < count; ++k) {
    double sz = 0;
    read_f64(is, std::span<double>(&sz, 1));
    if (sz < 0 || sz > 1e10) throw FormatError("Adam::load: corrupt tensor size");
    m_[k].resize(static_cast<std::size_t>(sz));
    v_[k].resize(static_cast<std::size_t>(sz));
    read_f64(is, m_[k]);
    read_f64(is, v_[k]);
  }
}

}  // namespace sykrl::nn
