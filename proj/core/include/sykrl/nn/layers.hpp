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
#include <memory>
#include <string>
#include <vector>

#include "sykrl/nn/ndarray.hpp"
#include "sykrl/rng.hpp"

namespace sykrl::nn {

struct Parameter {
  std::string name;
  NdArray value;
  NdArray grad;
};

// Layers take a leading batch axis. backward() consumes the cache filled by
// the most recent forward() and accumulates parameter gradients.
class Layer {
 public:
  virtual ~Layer() = default;
  virtual NdArray forward(const NdArray& x, bool training) = 0;
  virtual NdArray backward(const NdArray& grad_out) = 0;
  virtual std::unique_ptr<Layer> clone() const = 0;
  virtual std::string name() const = 0;
  // Output shape for a single sample (no batch axis).
  virtual Shape output_shape(const Shape& in) const = 0;
  virtual std::vector<Parameter*> parameters() { return {}; }

 protected:
  void require_forward(bool has_cache) const;
};

// 3x3x3 kernel, stride 1, zero padding 1. Input [B, C, D, H, W].
class Conv3d final : public Layer {
 public:
  Conv3d(std::size_t in_channels, std::size_t out_channels);

  NdArray forward(const NdArray& x, bool training) override;
  NdArray backward(const NdArray& grad_out) override;
  std::unique_ptr<Layer> clone() const override { return std::make_unique<Conv3d>(*this); }
  std::string name() const override { return "conv3d"; }
  Shape output_shape(const Shape& in) const override;
  std::vector<Parameter*> parameters() override { return {&weight_, &bias_}; }

  std::size_t in_channels() const { return cin_; }
  std::size_t out_channels() const { return cout_; }

 private:
  std::size_t cin_, cout_;
  Parameter weight_;  // [cout, cin * 27]
  Parameter bias_;    // [cout]
  NdArray input_;
  bool cached_ = false;
};

class LeakyReLU final : public Layer {
 public:
  explicit LeakyReLU(double slope = 0.01) : slope_(slope) {}

  NdArray forward(const NdArray& x, bool training) override;
  NdArray backward(const NdArray& grad_out) override;
  std::unique_ptr<Layer> clone() const override { return std::make_unique<LeakyReLU>(*this); }
  std::string name() const override { return "leaky_relu"; }
  Shape output_shape(const Shape& in) const override { return in; }

 private:
  double slope_;
  NdArray input_;
  bool cached_ = false;
};

// Kernel 1, stride 2 over the three spatial axes: keeps every other voxel.
// Output extent of each axis is ceil(extent / 2).
class MaxPool3d final : public Layer {
 public:
  NdArray forward(const NdArray& x, bool training) override;
  NdArray backward(const NdArray& grad_out) override;
  std::unique_ptr<Layer> clone() const override { return std::make_unique<MaxPool3d>(*this); }
  std::string name() const override { return "max_pool3d"; }
  Shape output_shape(const Shape& in) const override;

 private:
  Shape input_shape_;
  bool cached_ = false;
};

class Flatten final : public Layer {
 public:
  NdArray forward(const NdArray& x, bool training) override;
  NdArray backward(const NdArray& grad_out) override;
  std::unique_ptr<Layer> clone() const override { return std::make_unique<Flatten>(*this); }
  std::string name() const override { return "flatten"; }
  Shape output_shape(const Shape& in) const override { return {shape_size(in)}; }

 private:
  Shape input_shape_;
  bool cached_ = false;
};

// y = x W^T + b with x [B, in].
class Linear final : public Layer {
 public:
  Linear(std::size_t in_features, std::size_t out_features);

  NdArray forward(const NdArray& x, bool training) override;
  NdArray backward(const NdArray& grad_out) override;
  std::unique_ptr<Layer> clone() const override { return std::make_unique<Linear>(*this); }
  std::string name() const override { return "linear"; }
  Shape output_shape(const Shape& in) const override;
  std::vector<Parameter*> parameters() override { return {&weight_, &bias_}; }

 private:
  std::size_t in_, out_;
  Parameter weight_;  // [out, in]
  Parameter bias_;    // [out]
  NdArray input_;
  bool cached_ = false;
};

// Inverted dropout; identity at inference or with p == 0.
class Dropout final : public Layer {
 public:
  Dropout(double p, std::uint64_t seed);

  NdArray forward(const NdArray& x, bool training) override;
  NdArray backward(const NdArray& grad_out) override;
  std::unique_ptr<Layer> clone() const override { return std::make_unique<Dropout>(*this); }
  std::string name() const override { return "dropout"; }
  Shape output_shape(const Shape& in) const override { return in; }

 private:
  double p_;
  SplitMix64 rng_;
  std::vector<double> mask_;
  bool cached_ = false;
};

}  // namespace sykrl::nn
