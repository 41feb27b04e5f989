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
#include <optional>
#include <string>
#include <vector>

#include "sykrl/backend.hpp"

namespace sykrl {

// Binary [depth][n + 3][n] occupancy tensor of a gate program.
//   row r < n        : CNOT with control r, column = target
//   row n + {0,1,2}  : RX / RY / RZ, column = acting qubit
// Depth index is the moment under greedy left packing; angles are not encoded.
class CircuitTensor {
 public:
  CircuitTensor() = default;
  CircuitTensor(int max_depth, int num_qubits);

  int max_depth() const { return depth_; }
  int num_qubits() const { return n_; }
  int rows() const { return n_ + 3; }
  std::size_t size() const { return bits_.size(); }

  std::uint8_t at(int d, int r, int c) const { return bits_[index(d, r, c)]; }
  void set(int d, int r, int c, std::uint8_t v) { bits_[index(d, r, c)] = v; }
  const std::vector<std::uint8_t>& data() const { return bits_; }

  int count() const;
  // Number of leading moments that hold at least one gate.
  int used_depth() const;

  // Row-major over (d, r, c); flat bit k lands in byte k / 8 at bit 7 - k % 8.
  std::vector<std::uint8_t> pack_bits() const;
  static CircuitTensor unpack_bits(int max_depth, int num_qubits, const std::vector<std::uint8_t>& bytes);

  // Grid of the used moments for logs.
  std::string to_grid() const;

  bool operator==(const CircuitTensor&) const = default;

 private:
  std::size_t index(int d, int r, int c) const {
    return (static_cast<std::size_t>(d) * static_cast<std::size_t>(n_ + 3) + static_cast<std::size_t>(r)) *
               static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(c);
  }

  int depth_ = 0;
  int n_ = 0;
  std::vector<std::uint8_t> bits_;
};

// Throws std::length_error when the packed circuit needs more than max_depth moments.
CircuitTensor encode(const std::vector<GateOp>& gates, int num_qubits, int max_depth);

// Gates in moment order; within a moment rows top-to-bottom, columns
// left-to-right. Angles are zero. Throws FormatError on qubit conflicts,
// diagonal CNOT bits, non-binary entries, or gates that greedy packing would
// have placed in an earlier moment.
std::vector<GateOp> decode(const CircuitTensor& tensor);

// Default tensor depth for a qubit count.
int default_max_depth(int num_qubits);

// Network input planes [channels][depth][n + 3][n] as doubles. With an energy
// value, a second plane broadcasts it.
std::vector<double> observation_planes(const CircuitTensor& tensor, std::optional<double> energy = std::nullopt);

}  // namespace sykrl
