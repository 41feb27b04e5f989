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

#include "sykrl/pauli.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace sykrl {

namespace {

constexpr int kMaxQubits = 64;

// Position of a non-identity letter in the cyclic order X -> Y -> Z.
int cyclic_index(PauliLetter p) {
  switch (p) {
    case PauliLetter::X: return 0;
    case PauliLetter::Y: return 1;
    case PauliLetter::Z: return 2;
    default: return -1;
  }
}

cdouble i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

PauliString::PauliString(int num_qubits, cdouble coefficient) : n_(num_qubits), coeff_(coefficient) {
  if (num_qubits < 0 || num_qubits > kMaxQubits) {
    throw std::invalid_argument("PauliString: qubit count out of range");
  }
}

PauliString PauliString::from_letters(std::string_view letters, cdouble coefficient) {
  PauliString p(static_cast<int>(letters.size()), coefficient);
  for (std::size_t q = 0; q < letters.size(); ++q) {
    switch (letters[q]) {
      case 'I': case '_': break;
      case 'X': p.set_letter(static_cast<int>(q), PauliLetter::X); break;
      case 'Y': p.set_letter(static_cast<int>(q), PauliLetter::Y); break;
      case 'Z': p.set_letter(static_cast<int>(q), PauliLetter::Z); break;
      default: throw std::invalid_argument("PauliString: unknown letter");
    }
  }
  return p;
}

PauliLetter PauliString::letter(int q) const {
  const unsigned x = (x_ >> q) & 1U;
  const unsigned z = (z_ >> q) & 1U;
  return static_cast<PauliLetter>(x | (z << 1));
}

void PauliString::set_letter(int q, PauliLetter p) {
  if (q < 0 || q >= n_) throw std::out_of_range("PauliString: qubit index out of range");
  const auto v = static_cast<unsigned>(p);
  const std::uint64_t bit = std::uint64_t{1} << q;
  x_ = (v & 1U) ? (x_ | bit) : (x_ & ~bit);
  z_ = (v & 2U) ? (z_ | bit) : (z_ & ~bit);
}

int PauliString::weight() const { return std::popcount(x_ | z_); }

std::string PauliString::letters() const {
  std::string s(static_cast<std::size_t>(n_), 'I');
  for (int q = 0; q < n_; ++q) s[static_cast<std::size_t>(q)] = "IXZY"[static_cast<int>(letter(q))];
  return s;
}

PauliString PauliString::operator*(const PauliString& rhs) const {
  if (n_ != rhs.n_) throw std::invalid_argument("PauliString: qubit count mismatch in product");
  PauliString out(n_, coeff_ * rhs.coeff_);
  int phase = 0;
  for (int q = 0; q < n_; ++q) {
    const int a = cyclic_index(letter(q));
    const int b = cyclic_index(rhs.letter(q));
    if (a < 0 || b < 0 || a == b) continue;
    phase += ((b - a + 3) % 3 == 1) ? 1 : -1;
  }
  out.x_ = x_ ^ rhs.x_;
  out.z_ = z_ ^ rhs.z_;
  out.coeff_ *= i_power(phase);
  return out;
}

PauliString PauliString::scaled(cdouble s) const {
  PauliString out = *this;
  out.coeff_ *= s;
  return out;
}

std::uint64_t PauliString::flip_bits() const {
  std::uint64_t bits = 0;
  for (int q = 0; q < n_; ++q) {
    if ((x_ >> q) & 1U) bits |= qubit_bit(n_, q);
  }
  return bits;
}

cdouble PauliString::phase(std::uint64_t basis_index) const {
  // Y = i X Z, so P|j> = i^{#Y} (-1)^{|j & z|} |j ^ x>.
  std::uint64_t zbits = 0;
  for (int q = 0; q < n_; ++q) {
    if ((z_ >> q) & 1U) zbits |= qubit_bit(n_, q);
  }
  const int num_y = std::popcount(x_ & z_);
  const int sign = std::popcount(basis_index & zbits) & 1;
  return coeff_ * i_power(num_y + 2 * sign);
}

Eigen::MatrixXcd PauliString::to_dense() const {
  const Eigen::Index dim = Eigen::Index{1} << n_;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  const std::uint64_t flip = flip_bits();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const auto uj = static_cast<std::uint64_t>(j);
    m(static_cast<Eigen::Index>(uj ^ flip), j) = phase(uj);
  }
  return m;
}

PauliSum::PauliSum(int num_qubits, std::vector<PauliString> terms) : n_(num_qubits), terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (t.num_qubits() != n_) throw std::invalid_argument("PauliSum: qubit count mismatch");
  }
  canonicalize();
}

void PauliSum::add(const PauliString& term) {
  if (term.num_qubits() != n_) throw std::invalid_argument("PauliSum: qubit count mismatch");
  terms_.push_back(term);
}

void PauliSum::canonicalize(double drop_tol) {
  std::sort(terms_.begin(), terms_.end(), [](const PauliString& a, const PauliString& b) {
    return a.x_mask() != b.x_mask() ? a.x_mask() < b.x_mask() : a.z_mask() < b.z_mask();
  });
  std::vector<PauliString> merged;
  merged.reserve(terms_.size());
  for (const auto& t : terms_) {
    if (!merged.empty() && merged.back().same_letters(t)) {
      merged.back().set_coefficient(merged.back().coefficient() + t.coefficient());
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [drop_tol](const PauliString& t) { return std::abs(t.coefficient()) <= drop_tol; });
  terms_ = std::move(merged);
}

bool PauliSum::is_hermitian(double tol) const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [tol](const PauliString& t) { return std::abs(t.coefficient().imag()) <= tol; });
}

cdouble PauliSum::identity_coefficient() const {
  for (const auto& t : terms_) {
    if (t.is_identity()) return t.coefficient();
  }
  return 0.0;
}

Eigen::MatrixXcd PauliSum::to_dense() const {
  const Eigen::Index dim = Eigen::Index{1} << n_;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : terms_) {
    const std::uint64_t flip = t.flip_bits();
    for (Eigen::Index j = 0; j < dim; ++j) {
      const auto uj = static_cast<std::uint64_t>(j);
      m(static_cast<Eigen::Index>(uj ^ flip), j) += t.phase(uj);
    }
  }
  return m;
}

PauliSum& PauliSum::operator*=(double s) {
  for (auto& t : terms_) t.set_coefficient(t.coefficient() * s);
  return *this;
}

}  // namespace sykrl
