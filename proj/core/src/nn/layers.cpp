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

#include "sykrl/nn/layers.hpp"

#include <Eigen/Dense>
#include <stdexcept>

namespace sykrl::nn {
namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapRow = Eigen::Map<RowMat>;
using CMapRow = Eigen::Map<const RowMat>;

void require_rank(const NdArray& x, std::size_t rank, const char* who) {
  if (x.rank() != rank) {
    throw std::invalid_argument(std::string(who) + ": expected rank " + std::to_string(rank) + ", got " +
                                shape_to_string(x.shape()));
  }
}

struct Vol {
  std::size_t d, h, w;
  std::size_t size() const { return d * h * w; }
};

// cols[(c * 27 + k), v] = x[c, voxel v shifted by kernel offset k], zero outside.
void im2col(const double* x, std::size_t channels, Vol v, double* cols) {
  const std::size_t vs = v.size();
  for (std::size_t c = 0; c < channels; ++c) {
    const double* xc = x + c * vs;
    for (int kd = 0; kd < 3; ++kd)
      for (int kh = 0; kh < 3; ++kh)
        for (int kw = 0; kw < 3; ++kw) {
          double* row = cols + (c * 27 + static_cast<std::size_t>(kd * 9 + kh * 3 + kw)) * vs;
          for (std::size_t d = 0; d < v.d; ++d) {
            const long sd = static_cast<long>(d) + kd - 1;
            for (std::size_t h = 0; h < v.h; ++h) {
              const long sh = static_cast<long>(h) + kh - 1;
              double* out = row + (d * v.h + h) * v.w;
              if (sd < 0 || sd >= static_cast<long>(v.d) || sh < 0 || sh >= static_cast<long>(v.h)) {
                std::fill(out, out + v.w, 0.0);
                continue;
              }
              const double* src = xc + (static_cast<std::size_t>(sd) * v.h + static_cast<std::size_t>(sh)) * v.w;
              for (std::size_t w = 0; w < v.w; ++w) {
                const long sw = static_cast<long>(w) + kw - 1;
                out[w] = (sw < 0 || sw >= static_cast<long>(v.w)) ? 0.0 : src[sw];
              }
            }
          }
        }
  }
}

void col2im_add(const double* cols, std::size_t channels, Vol v, double* x) {
  const std::size_t vs = v.size();
  for (std::size_t c = 0; c < channels; ++c) {
    double* xc = x + c * vs;
    for (int kd = 0; kd < 3; ++kd)
      for (int kh = 0; kh < 3; ++kh)
        for (int kw = 0; kw < 3; ++kw) {
          const double* row = cols + (c * 27 + static_cast<std::size_t>(kd * 9 + kh * 3 + kw)) * vs;
          for (std::size_t d = 0; d < v.d; ++d) {
            const long sd = static_cast<long>(d) + kd - 1;
            if (sd < 0 || sd >= static_cast<long>(v.d)) continue;
            for (std::size_t h = 0; h < v.h; ++h) {
              const long sh = static_cast<long>(h) + kh - 1;
              if (sh < 0 || sh >= static_cast<long>(v.h)) continue;
              const double* in = row + (d * v.h + h) * v.w;
              double* dst = xc + (static_cast<std::size_t>(sd) * v.h + static_cast<std::size_t>(sh)) * v.w;
              for (std::size_t w = 0; w < v.w; ++w) {
                const long sw = static_cast<long>(w) + kw - 1;
                if (sw >= 0 && sw < static_cast<long>(v.w)) dst[sw] += in[w];
              }
            }
          }
        }
  }
}

std::size_t ceil_half(std::size_t n) { return (n + 1) / 2; }

}  // namespace

void Layer::require_forward(bool has_cache) const {
  if (!has_cache) throw std::logic_error(name() + ": backward() called before forward()");
}

// ---------------------------------------------------------------- Conv3d

Conv3d::Conv3d(std::size_t in_channels, std::size_t out_channels)
    : cin_(in_channels),
      cout_(out_channels),
      weight_{"weight", NdArray({out_channels, in_channels * 27}), NdArray({out_channels, in_channels * 27})},
      bias_{"bias", NdArray({out_channels}), NdArray({out_channels})} {
  if (in_channels == 0 || out_channels == 0) throw std::invalid_argument("Conv3d: channel counts must be positive");
}

Shape Conv3d::output_shape(const Shape& in) const {
  if (in.size() != 4 || in[0] != cin_) throw std::invalid_argument("Conv3d: bad input shape " + shape_to_string(in));
  return {cout_, in[1], in[2], in[3]};
}

NdArray Conv3d::forward(const NdArray& x, bool /*training*/) {
  require_rank(x, 5, "Conv3d");
  if (x.dim(1) != cin_) throw std::invalid_argument("Conv3d: channel mismatch " + shape_to_string(x.shape()));
  const std::size_t batch = x.dim(0);
  const Vol v{x.dim(2), x.dim(3), x.dim(4)};
  const std::size_t k = cin_ * 27;
  NdArray y({batch, cout_, v.d, v.h, v.w});
  std::vector<double> cols(k * v.size());
  CMapRow w(weight_.value.data(), static_cast<long>(cout_), static_cast<long>(k));
  Eigen::Map<const Eigen::VectorXd> b(bias_.value.data(), static_cast<long>(cout_));
  for (std::size_t s = 0; s < batch; ++s) {
    im2col(x.data() + s * cin_ * v.size(), cin_, v, cols.data());
    CMapRow c(cols.data(), static_cast<long>(k), static_cast<long>(v.size()));
    MapRow out(y.data() + s * cout_ * v.size(), static_cast<long>(cout_), static_cast<long>(v.size()));
    out.noalias() = w * c;
    out.colwise() += b;
  }
  input_ = x;
  cached_ = true;
  return y;
}

NdArray Conv3d::backward(const NdArray& grad_out) {
  require_forward(cached_);
  const std::size_t batch = input_.dim(0);
  const Vol v{input_.dim(2), input_.dim(3), input_.dim(4)};
  if (grad_out.shape() != Shape{batch, cout_, v.d, v.h, v.w}) {
    throw std::invalid_argument("Conv3d::backward: gradient shape " + shape_to_string(grad_out.shape()));
  }
  const std::size_t k = cin_ * 27;
  NdArray dx(input_.shape());
  std::vector<double> cols(k * v.size());
  std::vector<double> dcols(k * v.size());
  CMapRow w(weight_.value.data(), static_cast<long>(cout_), static_cast<long>(k));
  MapRow dw(weight_.grad.data(), static_cast<long>(cout_), static_cast<long>(k));
  for (std::size_t s = 0; s < batch; ++s) {
    im2col(input_.data() + s * cin_ * v.size(), cin_, v, cols.data());
    CMapRow c(cols.data(), static_cast<long>(k), static_cast<long>(v.size()));
    CMapRow g(grad_out.data() + s * cout_ * v.size(), static_cast<long>(cout_), static_cast<long>(v.size()));
    dw.noalias() += g * c.transpose();
    for (std::size_t o = 0; o < cout_; ++o) {
      const double* row = grad_out.data() + (s * cout_ + o) * v.size();
      double acc = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) acc += row[i];
      bias_.grad[o] += acc;
    }
    MapRow dc(dcols.data(), static_cast<long>(k), static_cast<long>(v.size()));
    dc.noalias() = w.transpose() * g;
    col2im_add(dcols.data(), cin_, v, dx.data() + s * cin_ * v.size());
  }
  return dx;
}

// ---------------------------------------------------------------- LeakyReLU

NdArray LeakyReLU::forward(const NdArray& x, bool /*training*/) {
  NdArray y = x;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (y[i] < 0.0) y[i] *= slope_;
  input_ = x;
  cached_ = true;
  return y;
}

NdArray LeakyReLU::backward(const NdArray& grad_out) {
  require_forward(cached_);
  if (grad_out.shape() != input_.shape()) throw std::invalid_argument("LeakyReLU::backward: shape mismatch");
  NdArray dx = grad_out;
  for (std::size_t i = 0; i < dx.size(); ++i)
    if (input_[i] < 0.0) dx[i] *= slope_;
  return dx;
}

// ---------------------------------------------------------------- MaxPool3d

Shape MaxPool3d::output_shape(const Shape& in) const {
  if (in.size() != 4) throw std::invalid_argument("MaxPool3d: bad input shape " + shape_to_string(in));
  return {in[0], ceil_half(in[1]), ceil_half(in[2]), ceil_half(in[3])};
}

NdArray MaxPool3d::forward(const NdArray& x, bool /*training*/) {
  require_rank(x, 5, "MaxPool3d");
  const std::size_t bc = x.dim(0) * x.dim(1);
  const Vol in{x.dim(2), x.dim(3), x.dim(4)};
  const Vol out{ceil_half(in.d), ceil_half(in.h), ceil_half(in.w)};
  NdArray y({x.dim(0), x.dim(1), out.d, out.h, out.w});
  for (std::size_t p = 0; p < bc; ++p) {
    const double* src = x.data() + p * in.size();
    double* dst = y.data() + p * out.size();
    for (std::size_t d = 0; d < out.d; ++d)
      for (std::size_t h = 0; h < out.h; ++h)
        for (std::size_t w = 0; w < out.w; ++w)
          dst[(d * out.h + h) * out.w + w] = src[((2 * d) * in.h + 2 * h) * in.w + 2 * w];
  }
  input_shape_ = x.shape();
  cached_ = true;
  return y;
}

NdArray MaxPool3d::backward(const NdArray& grad_out) {
  require_forward(cached_);
  const Shape& s = input_shape_;
  const Vol in{s[2], s[3], s[4]};
  const Vol out{ceil_half(in.d), ceil_half(in.h), ceil_half(in.w)};
  if (grad_out.shape() != Shape{s[0], s[1], out.d, out.h, out.w}) {
    throw std::invalid_argument("MaxPool3d::backward: gradient shape " + shape_to_string(grad_out.shape()));
  }
  NdArray dx(s);
  for (std::size_t p = 0; p < s[0] * s[1]; ++p) {
    const double* src = grad_out.data() + p * out.size();
    double* dst = dx.data() + p * in.size();
    for (std::size_t d = 0; d < out.d; ++d)
      for (std::size_t h = 0; h < out.h; ++h)
        for (std::size_t w = 0; w < out.w; ++w)
          dst[((2 * d) * in.h + 2 * h) * in.w + 2 * w] = src[(d * out.h + h) * out.w + w];
  }
  return dx;
}

// ---------------------------------------------------------------- Flatten

NdArray Flatten::forward(const NdArray& x, bool /*training*/) {
  if (x.rank() < 2) throw std::invalid_argument("Flatten: needs a batch axis");
  input_shape_ = x.shape();
  cached_ = true;
  return x.reshaped({x.dim(0), x.size() / x.dim(0)});
}

NdArray Flatten::backward(const NdArray& grad_out) {
  require_forward(cached_);
  return grad_out.reshaped(input_shape_);
}

// ---------------------------------------------------------------- Linear

Linear::Linear(std::size_t in_features, std::size_t out_features)
    : in_(in_features),
      out_(out_features),
      weight_{"weight", NdArray({out_features, in_features}), NdArray({out_features, in_features})},
      bias_{"bias", NdArray({out_features}), NdArray({out_features})} {
  if (in_features == 0 || out_features == 0) throw std::invalid_argument("Linear: sizes must be positive");
}

Shape Linear::output_shape(const Shape& in) const {
  if (shape_size(in) != in_) throw std::invalid_argument("Linear: bad input shape " + shape_to_string(in));
  return {out_};
}

NdArray Linear::forward(const NdArray& x, bool /*training*/) {
  require_rank(x, 2, "Linear");
  if (x.dim(1) != in_) throw std::invalid_argument("Linear: feature mismatch " + shape_to_string(x.shape()));
  const auto batch = static_cast<long>(x.dim(0));
  NdArray y({x.dim(0), out_});
  CMapRow xm(x.data(), batch, static_cast<long>(in_));
  CMapRow w(weight_.value.data(), static_cast<long>(out_), static_cast<long>(in_));
  Eigen::Map<const Eigen::RowVectorXd> b(bias_.value.data(), static_cast<long>(out_));
  MapRow ym(y.data(), batch, static_cast<long>(out_));
  ym.noalias() = xm * w.transpose();
  ym.rowwise() += b;
  input_ = x;
  cached_ = true;
  return y;
}

NdArray Linear::backward(const NdArray& grad_out) {
  require_forward(cached_);
  const auto batch = static_cast<long>(input_.dim(0));
  if (grad_out.shape() != Shape{input_.dim(0), out_}) {
    throw std::invalid_argument("Linear::backward: gradient shape " + shape_to_string(grad_out.shape()));
  }
  CMapRow g(grad_out.data(), batch, static_cast<long>(out_));
  CMapRow xm(input_.data(), batch, static_cast<long>(in_));
  CMapRow w(weight_.value.data(), static_cast<long>(out_), static_cast<long>(in_));
  MapRow dw(weight_.grad.data(), static_cast<long>(out_), static_cast<long>(in_));
  dw.noalias() += g.transpose() * xm;
  for (std::size_t r = 0; r < input_.dim(0); ++r)
    for (std::size_t o = 0; o < out_; ++o) bias_.grad[o] += grad_out[r * out_ + o];
  NdArray dx(input_.shape());
  MapRow dxm(dx.data(), batch, static_cast<long>(in_));
  dxm.noalias() = g * w;
  return dx;
}

// ---------------------------------------------------------------- Dropout

Dropout::Dropout(double p, std::uint64_t seed) : p_(p), rng_(seed) {
  if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("Dropout: p must lie in [0, 1)");
}

NdArray Dropout::forward(const NdArray& x, bool training) {
  cached_ = true;
  if (!training || p_ == 0.0) {
    mask_.clear();
    return x;
  }
  mask_.resize(x.size());
  NdArray y = x;
  const double keep = 1.0 / (1.0 - p_);
  for (std::size_t i = 0; i < y.size(); ++i) {
    mask_[i] = rng_.uniform() < p_ ? 0.0 : keep;
    y[i] *= mask_[i];
  }
  return y;
}

NdArray Dropout::backward(const NdArray& grad_out) {
  require_forward(cached_);
  if (mask_.empty()) return grad_out;
  if (grad_out.size() != mask_.size()) throw std::invalid_argument("Dropout::backward: shape mismatch");
  NdArray dx = grad_out;
  for (std::size_t i = 0; i < dx.size(); ++i) dx[i] *= mask_[i];
  return dx;
}

}  // namespace sykrl::nn
