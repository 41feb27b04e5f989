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
#include <memory>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "sykrl/nn/layers.hpp"
#include "sykrl/nn/ndarray.hpp"

namespace sykrl::nn {

enum class Architecture : std::uint8_t { CNN3D, FNN };

std::string to_string(Architecture a);
Architecture architecture_from_string(const std::string& s);

struct NetworkSpec {
  Architecture architecture = Architecture::CNN3D;
  std::vector<int> channels{32, 64, 128, 256};  // one conv block per entry (CNN3D)
  std::vector<int> neurons{1000, 1000, 1000, 1000};  // hidden widths (FNN)
  std::vector<int> head{};  // optional hidden widths between the conv stack and the output layer
  double leaky_slope = 0.01;
  double dropout = 0.0;

  void validate() const;
  nlohmann::json to_json() const;
  static NetworkSpec from_json(const nlohmann::json& j);
};

// Q-network mapping [B, C, D, H, W] observation planes to [B, num_actions].
// Weights use He-uniform initialization from the seed; biases start at zero.
class Network {
 public:
  Network(const NetworkSpec& spec, Shape input_shape, std::size_t num_actions, std::uint64_t seed);
  Network(const Network& other);
  Network& operator=(const Network& other);
  Network(Network&&) noexcept = default;
  Network& operator=(Network&&) noexcept = default;

  const NetworkSpec& spec() const { return spec_; }
  const Shape& input_shape() const { return input_shape_; }
  std::size_t num_actions() const { return num_actions_; }
  std::size_t num_layers() const { return layers_.size(); }
  const Layer& layer(std::size_t i) const { return *layers_.at(i); }

  NdArray forward(const NdArray& batch, bool training = false);
  // Returns the gradient with respect to the network input.
  NdArray backward(const NdArray& grad_out);

  std::vector<Parameter*> parameters();
  std::size_t parameter_count() const;
  void zero_grad();
  void copy_weights_from(const Network& other);

  std::vector<double> flat_parameters() const;
  void set_flat_parameters(std::span<const double> values);
  void save(std::ostream& os) const;
  void load(std::istream& is);

 private:
  void initialize(std::uint64_t seed);

  NetworkSpec spec_;
  Shape input_shape_;
  std::size_t num_actions_;
  std::vector<std::unique_ptr<Layer>> layers_;
  bool forward_done_ = false;
};

// Mean Huber loss over all entries; writes d loss / d prediction into grad.
double huber_loss(std::span<const double> prediction, std::span<const double> target, std::span<double> grad,
                  double delta = 1.0);

}  // namespace sykrl::nn
