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

#include "sykrl/codec.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "sykrl/errors.hpp"

namespace sykrl {

CircuitTensor::CircuitTensor(int max_depth, int num_qubits) : depth_(max_depth), n_(num_qubits) {
  if (max_depth < 1 || num_qubits < 1) throw std::invalid_argument("CircuitTensor: shape must be positive");
  bits_.assign(static_cast<std::size_t>(max_depth) * static_cast<std::size_t>(num_qubits + 3) *
                   static_cast<std::size_t>(num_qubits),
               0);
}

int CircuitTensor::count() const {
  return static_cast<int>(std::count_if(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b != 0; }));
}

int CircuitTensor::used_depth() const {
  const std::size_t slice = static_cast<std::size_t>(n_ + 3) * static_cast<std::size_t>(n_);
  for (int d = depth_; d > 0; --d) {
    const auto begin = bits_.begin() + static_cast<std::ptrdiff_t>((d - 1) * slice);
    if (std::any_of(begin, begin + static_cast<std::ptrdiff_t>(slice), [](std::uint8_t b) { return b != 0; })) return d;
  }
  return 0;
}

std::vector<std::uint8_t> CircuitTensor::pack_bits() const {
  std::vector<std::uint8_t> out((bits_.size() + 7) / 8, 0);
  for (std::size_t k = 0; k < bits_.size(); ++k)
    if (bits_[k]) out[k / 8] |= static_cast<std::uint8_t>(0x80U >> (k % 8));
  return out;
}

CircuitTensor CircuitTensor::unpack_bits(int max_depth, int num_qubits, const std::vector<std::uint8_t>& bytes) {
  CircuitTensor t(max_depth, num_qubits);
  if (bytes.size() != (t.bits_.size() + 7) / 8) throw FormatError("CircuitTensor: packed size mismatch");
  for (std::size_t k = 0; k < t.bits_.size(); ++k) t.bits_[k] = (bytes[k / 8] >> (7 - k % 8)) & 1U;
  return t;
}

std::string CircuitTensor::to_grid() const {
  std::ostringstream os;
  const int used = used_depth();
  for (int d = 0; d < used; ++d) {
    os << "moment " << d << '\n';
    for (int r = 0; r < rows(); ++r) {
      if (r < n_) os << "  c" << r << (r < 10 ? "  " : " ");
      else os << "  " << "XYZ"[r - n_] << "   ";
      for (int c = 0; c < n_; ++c) os << (at(d, r, c) ? '1' : '.');
      os << '\n';
    }
  }
  return os.str();
}

CircuitTensor encode(const std::vector<GateOp>& gates, int num_qubits, int max_depth) {
  if (static_cast<int>(gates.size()) > max_depth) {
    throw std::length_error("encode: circuit has more gates than the tensor depth");
  }
  CircuitTensor t(max_depth, num_qubits);
  std::vector<int> last(static_cast<std::size_t>(num_qubits), -1);
  for (const auto& g : gates) {
    g.validate(num_qubits);
    int d = last[static_cast<std::size_t>(g.qubit)] + 1;
    if (g.kind == GateKind::CNOT) d = std::max(d, last[static_cast<std::size_t>(g.target)] + 1);
    if (d >= max_depth) throw std::length_error("encode: circuit exceeds the tensor depth");
    if (g.kind == GateKind::CNOT) {
      t.set(d, g.qubit, g.target, 1);
      last[static_cast<std::size_t>(g.target)] = d;
    } else {
      t.set(d, num_qubits + static_cast<int>(g.kind), g.qubit, 1);
    }
    last[static_cast<std::size_t>(g.qubit)] = d;
  }
  return t;
}

std::vector<GateOp> decode(const CircuitTensor& tensor) {
  const int n = tensor.num_qubits();
  std::vector<GateOp> gates;
  std::vector<int> last(static_cast<std::size_t>(n), -1);
  for (int d = 0; d < tensor.max_depth(); ++d) {
    std::vector<bool> busy(static_cast<std::size_t>(n), false);
    auto claim = [&](int q) {
      if (busy[static_cast<std::size_t>(q)]) {
        throw FormatError("decode: qubit " + std::to_string(q) + " used twice in moment " + std::to_string(d));
      }
      busy[static_cast<std::size_t>(q)] = true;
    };
    for (int r = 0; r < tensor.rows(); ++r) {
      for (int c = 0; c < n; ++c) {
        const std::uint8_t v = tensor.at(d, r, c);
        if (v == 0) continue;
        if (v != 1) throw FormatError("decode: tensor entries must be 0 or 1");
        GateOp g;
        if (r < n) {
          if (r == c) throw FormatError("decode: CNOT bit on the diagonal");
          g = GateOp::cnot(r, c);
          claim(r);
          claim(c);
        } else {
          g = GateOp{static_cast<GateKind>(r - n), c, -1, 0.0};
          claim(c);
        }
        int earliest = last[static_cast<std::size_t>(g.qubit)] + 1;
        if (g.kind == GateKind::CNOT) earliest = std::max(earliest, last[static_cast<std::size_t>(g.target)] + 1);
        if (earliest != d) throw FormatError("decode: gate in moment " + std::to_string(d) + " is not left-packed");
        gates.push_back(g);
      }
    }
    for (int q = 0; q < n; ++q)
      if (busy[static_cast<std::size_t>(q)]) last[static_cast<std::size_t>(q)] = d;
  }
  return gates;
}

int default_max_depth(int num_qubits) { return num_qubits <= 5 ? 30 : 40; }

std::vector<double> observation_planes(const CircuitTensor& tensor, std::optional<double> energy) {
  std::vector<double> out;
  out.reserve(tensor.size() * (energy ? 2 : 1));
  for (auto b : tensor.data()) out.push_back(static_cast<double>(b));
  if (energy) out.insert(out.end(), tensor.size(), *energy);
  return out;
}

}  // namespace sykrl
