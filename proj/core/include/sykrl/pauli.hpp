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

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace sykrl {

using cdouble = std::complex<double>;

// Basis convention used everywhere in this library: qubit 0 is the leftmost
// tensor factor, i.e. qubit q lives at bit (n - 1 - q) of a basis index.
constexpr std::uint64_t qubit_bit(int n, int q) { return std::uint64_t{1} << (n - 1 - q); }

enum class PauliLetter : std::uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

// coefficient * P_0 (x) P_1 (x) ... (x) P_{n-1}, stored as symplectic masks
// (bit q of x_mask / z_mask describes qubit q; Y sets both).
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(int num_qubits, cdouble coefficient = 1.0);

  // Parses "XIZY"-style text; '_' is accepted for I.
  static PauliString from_letters(std::string_view letters, cdouble coefficient = 1.0);

  int num_qubits() const { return n_; }
  cdouble coefficient() const { return coeff_; }
  void set_coefficient(cdouble c) { coeff_ = c; }
  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }

  PauliLetter letter(int q) const;
  void set_letter(int q, PauliLetter p);
  int weight() const;
  bool is_identity() const { return (x_ | z_) == 0; }
  std::string letters() const;

  // Product with phase tracking. Both operands must act on the same qubit count.
  PauliString operator*(const PauliString& rhs) const;
  PauliString scaled(cdouble s) const;

  // <k| P |j> is nonzero only for k = j ^ flip_bits(); value = coefficient * phase(j).
  std::uint64_t flip_bits() const;
  cdouble phase(std::uint64_t basis_index) const;

  Eigen::MatrixXcd to_dense() const;

  bool same_letters(const PauliString& o) const { return n_ == o.n_ && x_ == o.x_ && z_ == o.z_; }

 private:
  int n_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
  cdouble coeff_{1.0, 0.0};
};

// Sum of Pauli strings kept in canonical form: sorted by letters, duplicates
// merged, numerically-zero terms dropped.
class PauliSum {
 public:
  PauliSum() = default;
  explicit PauliSum(int num_qubits) : n_(num_qubits) {}
  PauliSum(int num_qubits, std::vector<PauliString> terms);

  int num_qubits() const { return n_; }
  const std::vector<PauliString>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  // Adds without re-canonicalizing; call canonicalize() afterwards.
  void add(const PauliString& term);
  void canonicalize(double drop_tol = 1e-15);

  bool is_hermitian(double tol = 1e-12) const;
  // Tr(H) / 2^n, i.e. the identity coefficient.
  cdouble identity_coefficient() const;
  Eigen::MatrixXcd to_dense() const;

  PauliSum& operator*=(double s);

 private:
  int n_ = 0;
  std::vector<PauliString> terms_;
};

}  // namespace sykrl
