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

#include "sykrl/nn/network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sykrl/errors.hpp"

namespace sykrl::nn {

std::string to_string(Architecture a) { return a == Architecture::CNN3D ? "cnn3d" : "fnn"; }

Architecture architecture_from_string(const std::string& s) {
  if (s == "cnn3d") return Architecture::CNN3D;
  if (s == "fnn") return Architecture::FNN;
  throw std::invalid_argument("unknown architecture '" + s + "'");
}

void NetworkSpec::validate() const {
  auto positive = [](const std::vector<int>& v, const char* what) {
    for (int x : v)
      if (x <= 0) throw std::invalid_argument(std::string("NetworkSpec: ") + what + " must be positive");
  };
  positive(channels, "channels");
  positive(neurons, "neurons");
  positive(head, "head widths");
  if (architecture == Architecture::CNN3D && channels.empty()) {
    throw std::invalid_argument("NetworkSpec: cnn3d needs at least one conv block");
  }
  if (!(leaky_slope >= 0.0 && leaky_slope < 1.0)) throw std::invalid_argument("NetworkSpec: leaky_slope in [0, 1)");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw std::invalid_argument("NetworkSpec: dropout in [0, 1)");
}

nlohmann::json NetworkSpec::to_json() const {
  return {{"architecture", to_string(architecture)},
          {"channels", channels},
          {"neurons", neurons},
          {"head", head},
          {"leaky_slope", leaky_slope},
          {"dropout", dropout}};
}

NetworkSpec NetworkSpec::from_json(const nlohmann::json& j) {
  static const std::vector<std::string> known{"architecture", "channels", "neurons", "head", "leaky_slope", "dropout"};
  NetworkSpec s;
  try {
    for (const auto& [k, _] : j.items()) {
      if (std::find(known.begin(), known.end(), k) == known.end()) {
        throw std::invalid_argument("network: unknown key '" + k + "'");
      }
    }
    if (j.contains("architecture")) s.architecture = architecture_from_string(j.at("architecture").get<std::string>());
    if (j.contains("channels")) s.channels = j.at("channels").get<std::vector<int>>();
    if (j.contains("neurons")) s.neurons = j.at("neurons").get<std::vector<int>>();
    if (j.contains("head")) s.head = j.at("head").get<std::vector<int>>();
    if (j.contains("leaky_slope")) s.leaky_slope = j.at("leaky_slope").get<double>();
    if (j.contains("dropout")) s.dropout = j.at("dropout").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("network: ") + e.what());
  }
  s.validate();
  return s;
}

Network::Network(const NetworkSpec& spec, Shape input_shape, std::size_t num_actions, std::uint64_t seed)
    : spec_(spec), input_shape_(std::move(input_shape)), num_actions_(num_actions) {
  spec_.validate();
  if (input_shape_.size() != 4 || shape_size(input_shape_) == 0) {
    throw std::invalid_argument("Network: input shape must be [C, D, H, W], got " + shape_to_string(input_shape_));
  }
  if (num_actions_ == 0) throw std::invalid_argument("Network: no actions");

  SplitMix64 dropout_seeds(seed ^ 0xD20F0F7ULL);
  Shape cur = input_shape_;
  auto push = [&](std::unique_ptr<Layer> l) {
    cur = l->output_shape(cur);
    layers_.push_back(std::move(l));
  };
  auto dense_block = [&](const std::vector<int>& widths) {
    for (int w : widths) {
      push(std::make_unique<Linear>(cur[0], static_cast<std::size_t>(w)));
      push(std::make_unique<LeakyReLU>(spec_.leaky_slope));
      if (spec_.dropout > 0.0) push(std::make_unique<Dropout>(spec_.dropout, dropout_seeds()));
    }
  };

  if (spec_.architecture == Architecture::CNN3D) {
    for (int c : spec_.channels) {
      push(std::make_unique<Conv3d>(cur[0], static_cast<std::size_t>(c)));
      push(std::make_unique<LeakyReLU>(spec_.leaky_slope));
      push(std::make_unique<MaxPool3d>());
    }
    push(std::make_unique<Flatten>());
    dense_block(spec_.head);
  } else {
    push(std::make_unique<Flatten>());
    dense_block(spec_.neurons);
  }
  push(std::make_unique<Linear>(cur[0], num_actions_));
  initialize(seed);
}

Network::Network(const Network& other)
    : spec_(other.spec_), input_shape_(other.input_shape_), num_actions_(other.num_actions_) {
  layers_.reserve(other.layers_.size());
  for (const auto& l : other.layers_) layers_.push_back(l->clone());
}

Network& Network::operator=(const Network& other) {
  if (this != &other) {
    Network tmp(other);
    *this = std::move(tmp);
  }
  return *this;
}

void Network::initialize(std::uint64_t seed) {
  SplitMix64 root(seed);
  std::uint64_t tag = 0;
  for (Parameter* p : parameters()) {
    SplitMix64 rng = root.fork(tag++);
    if (p->name == "bias") {
      p->value.fill(0.0);
      continue;
    }
    const double fan_in = static_cast<double>(p->value.dim(1));
    const double bound = std::sqrt(6.0 / fan_in);
    for (std::size_t i = 0; i < p->value.size(); ++i) p->value[i] = rng.uniform(-bound, bound);
  }
}

NdArray Network::forward(const NdArray& batch, bool training) {
  if (batch.rank() != 5 || Shape(batch.shape().begin() + 1, batch.shape().end()) != input_shape_) {
    throw std::invalid_argument("Network::forward: expected [B, " + shape_to_string(input_shape_) + "], got " +
                                shape_to_string(batch.shape()));
  }
  NdArray x = batch;
  for (auto& l : layers_) x = l->forward(x, training);
  if (!x.all_finite()) throw std::runtime_error("Network::forward: non-finite activations");
  forward_done_ = true;
  return x;
}

NdArray Network::backward(const NdArray& grad_out) {
  if (!forward_done_) throw std::logic_error("Network::backward: called before forward()");
  NdArray g = grad_out;
  for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) g = (*it)->backward(g);
  return g;
}

std::vector<Parameter*> Network::parameters() {
  std::vector<Parameter*> out;
  for (auto& l : layers_)
    for (Parameter* p : l->parameters()) out.push_back(p);
  return out;
}

std::size_t Network::parameter_count() const {
  std::size_t n = 0;
  for (Parameter* p : const_cast<Network*>(this)->parameters()) n += p->value.size();
  return n;
}

void Network::zero_grad() {
  for (Parameter* p : parameters()) p->grad.fill(0.0);
}

void Network::copy_weights_from(const Network& other) { set_flat_parameters(other.flat_parameters()); }

std::vector<double> Network::flat_parameters() const {
  std::vector<double> out;
  out.reserve(parameter_count());
  for (Parameter* p : const_cast<Network*>(this)->parameters())
    out.insert(out.end(), p->value.values().begin(), p->value.values().end());
  return out;
}

void Network::set_flat_parameters(std::span<const double> values) {
  if (values.size() != parameter_count()) {
    throw std::invalid_argument("Network: expected " + std::to_string(parameter_count()) + " parameters, got " +
                                std::to_string(values.size()));
  }
  std::size_t off = 0;
  for (Parameter* p : parameters()) {
    std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(off), p->value.size(), p->value.data());
    off += p->value.size();
  }
}

void Network::save(std::ostream& os) const { write_f64(os, flat_parameters()); }

void Network::load(std::istream& is) {
  std::vector<double> values(parameter_count());
  read_f64(is, values);
  set_flat_parameters(values);
}

double huber_loss(std::span<const double> prediction, std::span<const double> target, std::span<double> grad,
                  double delta) {
  if (prediction.size() != target.size() || grad.size() != prediction.size()) {
    throw std::invalid_argument("huber_loss: size mismatch");
  }
  if (prediction.empty()) throw std::invalid_argument("huber_loss: empty input");
  const double inv = 1.0 / static_cast<double>(prediction.size());
  double loss = 0.0;
  for (std::size_t i = 0; i < prediction.size(); ++i) {
    const double r = prediction[i] - target[i];
    const double a = std::abs(r);
    loss += a <= delta ? 0.5 * r * r : delta * (a - 0.5 * delta);
    grad[i] = std::clamp(r, -delta, delta) * inv;
  }
  return loss * inv;
}

}  // namespace sykrl::nn
