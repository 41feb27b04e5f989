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

#include "sykrl/nn/ndarray.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "sykrl/errors.hpp"

namespace sykrl::nn {

std::size_t shape_size(const Shape& s) {
  std::size_t n = 1;
  for (auto d : s) n *= d;
  return n;
}

std::string shape_to_string(const Shape& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? ", " : "") + std::to_string(s[i]);
  return out + "]";
}

NdArray::NdArray(Shape shape, double fill) : shape_(std::move(shape)), data_(shape_size(shape_), fill) {}

NdArray::NdArray(Shape shape, std::vector<double> data) : shape_(std::move(shape)), data_(std::move(data)) {
  if (data_.size() != shape_size(shape_)) {
    throw std::invalid_argument("NdArray: data size does not match shape " + shape_to_string(shape_));
  }
}

NdArray& NdArray::reshape(Shape shape) {
  if (shape_size(shape) != data_.size()) {
    throw std::invalid_argument("NdArray::reshape: " + shape_to_string(shape_) + " -> " + shape_to_string(shape));
  }
  shape_ = std::move(shape);
  return *this;
}

NdArray NdArray::reshaped(Shape shape) const {
  NdArray copy = *this;
  copy.reshape(std::move(shape));
  return copy;
}

void NdArray::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

bool NdArray::all_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

void write_f64(std::ostream& os, std::span<const double> values) {
  if constexpr (std::endian::native == std::endian::little) {
    os.write(reinterpret_cast<const char*>(values.data()), static_cast<std::streamsize>(values.size_bytes()));
  } else {
    for (double v : values) {
      std::uint64_t bits = __builtin_bswap64(std::bit_cast<std::uint64_t>(v));
      os.write(reinterpret_cast<const char*>(&bits), sizeof bits);
    }
  }
  if (!os) throw std::runtime_error("write_f64: stream write failed");
}

void read_f64(std::istream& is, std::span<double> values) {
  is.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size_bytes()));
  if (is.gcount() != static_cast<std::streamsize>(values.size_bytes())) {
    throw FormatError("read_f64: truncated float64 payload");
  }
  if constexpr (std::endian::native != std::endian::little) {
    for (double& v : values) v = std::bit_cast<double>(__builtin_bswap64(std::bit_cast<std::uint64_t>(v)));
  }
}

}  // namespace sykrl::nn
