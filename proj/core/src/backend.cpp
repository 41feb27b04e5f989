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

#include "sykrl/backend.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "sykrl/errors.hpp"

namespace sykrl {

namespace {

struct Mat2 {
  cdouble m00, m01, m10, m11;
};

Mat2 rotation_matrix(GateKind kind, double angle) {
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  switch (kind) {
    case GateKind::RX: return {c, {0.0, -s}, {0.0, -s}, c};
    case GateKind::RY: return {c, -s, s, c};
    case GateKind::RZ: return {{c, -s}, 0.0, 0.0, {c, s}};
    default: throw std::logic_error("rotation_matrix: not a rotation");
  }
}

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(what) + ": probability must be in [0, 1]");
}

}  // namespace

std::string to_string(GateKind k) {
  switch (k) {
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::CNOT: return "CNOT";
  }
  return "?";
}

void GateOp::validate(int num_qubits) const {
  if (qubit < 0 || qubit >= num_qubits) throw std::out_of_range("GateOp: qubit index out of range");
  if (kind == GateKind::CNOT) {
    if (target < 0 || target >= num_qubits) throw std::out_of_range("GateOp: CNOT target out of range");
    if (target == qubit) throw std::invalid_argument("GateOp: CNOT control equals target");
  }
}

// ---------------------------------------------------------------- StateVector

StateVector::StateVector(int num_qubits) : n_(num_qubits) {
  if (num_qubits < 1 || num_qubits > 24) throw CapacityError("StateVector: unsupported qubit count");
  amp_.assign(std::size_t{1} << num_qubits, 0.0);
  amp_[0] = 1.0;
}

void StateVector::apply(const GateOp& g) {
  g.validate(n_);
  const std::size_t dim = amp_.size();
  const std::uint64_t b = qubit_bit(n_, g.qubit);
  if (g.kind == GateKind::CNOT) {
    const std::uint64_t t = qubit_bit(n_, g.target);
    for (std::size_t i = 0; i < dim; ++i) {
      if ((i & b) && !(i & t)) std::swap(amp_[i], amp_[i | t]);
    }
    return;
  }
  const Mat2 u = rotation_matrix(g.kind, g.angle);
  for (std::size_t i = 0; i < dim; ++i) {
    if (i & b) continue;
    const cdouble a0 = amp_[i];
    const cdouble a1 = amp_[i | b];
    amp_[i] = u.m00 * a0 + u.m01 * a1;
    amp_[i | b] = u.m10 * a0 + u.m11 * a1;
  }
}

double StateVector::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amp_) s += std::norm(a);
  return s;
}

// -------------------------------------------------------------- DensityMatrix

DensityMatrix::DensityMatrix(int num_qubits) : n_(num_qubits) {
  if (num_qubits < 1 || num_qubits > 12) throw CapacityError("DensityMatrix: unsupported qubit count");
  dim_ = std::size_t{1} << num_qubits;
  data_.assign(dim_ * dim_, 0.0);
  data_[0] = 1.0;
}

DensityMatrix DensityMatrix::from_diagonal(std::span<const double> probabilities) {
  int n = 0;
  while ((std::size_t{1} << n) < probabilities.size()) ++n;
  if ((std::size_t{1} << n) != probabilities.size() || n == 0) {
    throw std::invalid_argument("DensityMatrix: diagonal length must be a power of two >= 2");
  }
  DensityMatrix rho(n);
  rho.data_[0] = 0.0;
  for (std::size_t i = 0; i < rho.dim_; ++i) rho(i, i) = probabilities[i];
  return rho;
}

DensityMatrix DensityMatrix::from_state(const StateVector& psi) {
  DensityMatrix rho(psi.num_qubits());
  const auto a = psi.amplitudes();
  for (std::size_t r = 0; r < rho.dim_; ++r)
    for (std::size_t c = 0; c < rho.dim_; ++c) rho(r, c) = a[r] * std::conj(a[c]);
  return rho;
}

DensityMatrix DensityMatrix::maximally_mixed(int num_qubits) {
  std::vector<double> p(std::size_t{1} << num_qubits, 1.0 / static_cast<double>(std::size_t{1} << num_qubits));
  return from_diagonal(p);
}

DensityMatrix DensityMatrix::from_eigen(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("DensityMatrix: matrix must be square");
  int n = 0;
  while ((Eigen::Index{1} << n) < m.rows()) ++n;
  if ((Eigen::Index{1} << n) != m.rows() || n == 0) throw std::invalid_argument("DensityMatrix: dimension must be 2^n");
  DensityMatrix rho(n);
  for (std::size_t r = 0; r < rho.dim_; ++r)
    for (std::size_t c = 0; c < rho.dim_; ++c)
      rho(r, c) = m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  return rho;
}

void DensityMatrix::apply(const GateOp& g) {
  g.validate(n_);
  const std::size_t dim = dim_;
  const std::uint64_t b = qubit_bit(n_, g.qubit);
  cdouble* d = data_.data();

  if (g.kind == GateKind::CNOT) {
    const std::uint64_t t = qubit_bit(n_, g.target);
    for (std::size_t i = 0; i < dim; ++i) {
      if (!(i & b) || (i & t)) continue;
      std::swap_ranges(d + i * dim, d + (i + 1) * dim, d + (i | t) * dim);
    }
    for (std::size_t r = 0; r < dim; ++r) {
      cdouble* row = d + r * dim;
      for (std::size_t j = 0; j < dim; ++j) {
        if ((j & b) && !(j & t)) std::swap(row[j], row[j | t]);
      }
    }
    return;
  }

  if (g.kind == GateKind::RZ) {
    const cdouble lo = std::polar(1.0, -g.angle / 2.0);
    const cdouble hi = std::conj(lo);
    for (std::size_t r = 0; r < dim; ++r) {
      const cdouble pr = (r & b) ? hi : lo;
      cdouble* row = d + r * dim;
      for (std::size_t c = 0; c < dim; ++c) {
        if (((r ^ c) & b) == 0) continue;  // equal phases cancel
        row[c] *= pr * std::conj((c & b) ? hi : lo);
      }
    }
    return;
  }

  const Mat2 u = rotation_matrix(g.kind, g.angle);
  for (std::size_t i = 0; i < dim; ++i) {
    if (i & b) continue;
    cdouble* r0 = d + i * dim;
    cdouble* r1 = d + (i | b) * dim;
    for (std::size_t c = 0; c < dim; ++c) {
      const cdouble a0 = r0[c];
      const cdouble a1 = r1[c];
      r0[c] = u.m00 * a0 + u.m01 * a1;
      r1[c] = u.m10 * a0 + u.m11 * a1;
    }
  }
  const cdouble c00 = std::conj(u.m00), c01 = std::conj(u.m01), c10 = std::conj(u.m10), c11 = std::conj(u.m11);
  for (std::size_t r = 0; r < dim; ++r) {
    cdouble* row = d + r * dim;
    for (std::size_t j = 0; j < dim; ++j) {
      if (j & b) continue;
      const cdouble a0 = row[j];
      const cdouble a1 = row[j | b];
      row[j] = a0 * c00 + a1 * c01;
      row[j | b] = a0 * c10 + a1 * c11;
    }
  }
}

void DensityMatrix::apply_bitflip(int q, double p) {
  check_probability(p, "apply_bitflip");
  if (q < 0 || q >= n_) throw std::out_of_range("apply_bitflip: qubit index out of range");
  if (p == 0.0) return;
  const std::uint64_t b = qubit_bit(n_, q);
  std::vector<cdouble> out(data_.size());
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c)
      out[r * dim_ + c] = (1.0 - p) * data_[r * dim_ + c] + p * data_[(r ^ b) * dim_ + (c ^ b)];
  data_ = std::move(out);
}

void DensityMatrix::apply_depolarizing2(int q1, int q2, double p) {
  check_probability(p, "apply_depolarizing2");
  if (q1 < 0 || q1 >= n_ || q2 < 0 || q2 >= n_) throw std::out_of_range("apply_depolarizing2: qubit out of range");
  if (q1 == q2) throw std::invalid_argument("apply_depolarizing2: qubits must differ");
  if (p == 0.0) return;
  const std::uint64_t b1 = qubit_bit(n_, q1);
  const std::uint64_t b2 = qubit_bit(n_, q2);
  const std::uint64_t pair = b1 | b2;
  const std::uint64_t offsets[4] = {0, b1, b2, pair};
  std::vector<cdouble> out(data_.size());
  for (std::size_t k = 0; k < data_.size(); ++k) out[k] = (1.0 - p) * data_[k];
  for (std::size_t r0 = 0; r0 < dim_; ++r0) {
    if (r0 & pair) continue;
    for (std::size_t c0 = 0; c0 < dim_; ++c0) {
      if (c0 & pair) continue;
      cdouble s = 0.0;
      for (auto a : offsets) s += data_[(r0 | a) * dim_ + (c0 | a)];
      s *= p / 4.0;
      for (auto a : offsets) out[(r0 | a) * dim_ + (c0 | a)] += s;
    }
  }
  data_ = std::move(out);
}

cdouble DensityMatrix::trace() const {
  cdouble t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += data_[i * dim_ + i];
  return t;
}

Eigen::MatrixXcd DensityMatrix::to_eigen() const {
  const auto d = static_cast<Eigen::Index>(dim_);
  Eigen::MatrixXcd m(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) m(r, c) = data_[static_cast<std::size_t>(r) * dim_ + static_cast<std::size_t>(c)];
  return m;
}

bool DensityMatrix::is_valid(double tol, double psd_tol) const {
  const Eigen::MatrixXcd m = to_eigen();
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  if (std::abs(trace() - cdouble{1.0}) > tol) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(m, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff() >= -psd_tol;
}

// --------------------------------------------------------------- NoiseModel

void NoiseModel::validate() const {
  check_probability(p_bitflip_1q, "NoiseModel.p_bitflip_1q");
  check_probability(p_depol_2q, "NoiseModel.p_depol_2q");
}

// -------------------------------------------------------------- CouplingMap

CouplingMap::CouplingMap(std::string name, int num_qubits, std::vector<std::pair<int, int>> pairs)
    : name_(std::move(name)), n_(num_qubits), pairs_(std::move(pairs)) {
  if (num_qubits < 1) throw std::invalid_argument("CouplingMap: qubit count must be positive");
  for (const auto& [c, t] : pairs_) {
    if (c < 0 || c >= n_ || t < 0 || t >= n_) throw std::invalid_argument("CouplingMap: pair references invalid qubit");
    if (c == t) throw std::invalid_argument("CouplingMap: self-loop pair");
  }
  std::sort(pairs_.begin(), pairs_.end());
  pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
}

CouplingMap CouplingMap::all_to_all(int num_qubits) {
  std::vector<std::pair<int, int>> pairs;
  for (int c = 0; c < num_qubits; ++c)
    for (int t = 0; t < num_qubits; ++t)
      if (c != t) pairs.emplace_back(c, t);
  return CouplingMap("all-to-all", num_qubits, std::move(pairs));
}

CouplingMap CouplingMap::eagle_r3_t4() {
  return CouplingMap("eagle-r3-T4", 4, {{0, 1}, {1, 0}, {1, 2}, {2, 1}, {1, 3}, {3, 1}});
}

CouplingMap CouplingMap::from_json(const std::string& text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    std::vector<std::pair<int, int>> pairs;
    for (const auto& p : doc.at("pairs")) {
      if (!p.is_array() || p.size() != 2) throw FormatError("CouplingMap: pairs are [control, target]");
      pairs.emplace_back(p[0].get<int>(), p[1].get<int>());
    }
    return CouplingMap(doc.at("name").get<std::string>(), doc.at("n").get<int>(), std::move(pairs));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("CouplingMap: ") + e.what());
  }
}

std::string CouplingMap::to_json() const {
  nlohmann::json doc;
  doc["name"] = name_;
  doc["n"] = n_;
  doc["pairs"] = nlohmann::json::array();
  for (const auto& [c, t] : pairs_) doc["pairs"].push_back({c, t});
  return doc.dump();
}

bool CouplingMap::allows(int control, int target) const {
  return std::binary_search(pairs_.begin(), pairs_.end(), std::make_pair(control, target));
}

// -------------------------------------------------------------- free functions

StateVector apply_gate(StateVector psi, const GateOp& g) {
  psi.apply(g);
  return psi;
}

DensityMatrix apply_gate(DensityMatrix rho, const GateOp& g) {
  rho.apply(g);
  return rho;
}

DensityMatrix apply_bitflip(DensityMatrix rho, int q, double p) {
  rho.apply_bitflip(q, p);
  return rho;
}

DensityMatrix apply_depolarizing2(DensityMatrix rho, int q1, int q2, double p) {
  rho.apply_depolarizing2(q1, q2, p);
  return rho;
}

void apply_noisy(DensityMatrix& rho, const GateOp& g, const NoiseModel& noise) {
  rho.apply(g);
  if (!noise.active()) return;
  if (g.kind == GateKind::CNOT) {
    rho.apply_depolarizing2(g.qubit, g.target, noise.p_depol_2q);
  } else {
    rho.apply_bitflip(g.qubit, noise.p_bitflip_1q);
  }
}

std::vector<double> probabilities(const StateVector& psi) {
  std::vector<double> p(psi.dim());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(psi[i]);
  return p;
}

std::vector<double> probabilities(const DensityMatrix& rho) {
  std::vector<double> p(rho.dim());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::max(0.0, rho(i, i).real());
  return p;
}

std::vector<double> sample_frequencies(std::span<const double> probs, int shots, SplitMix64& rng) {
  if (shots <= 0) throw std::invalid_argument("sample_frequencies: shots must be positive");
  std::vector<double> cdf(probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) cdf[i] = (acc += probs[i]);
  std::vector<double> freq(probs.size(), 0.0);
  for (int s = 0; s < shots; ++s) {
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    freq[static_cast<std::size_t>(it - cdf.begin())] += 1.0;
  }
  for (auto& f : freq) f /= shots;
  return freq;
}

double expectation(const DensityMatrix& rho, const PauliSum& h) {
  if (h.num_qubits() != rho.num_qubits()) throw std::invalid_argument("expectation: qubit count mismatch");
  cdouble total = 0.0;
  for (const auto& term : h.terms()) {
    const std::uint64_t flip = term.flip_bits();
    for (std::size_t j = 0; j < rho.dim(); ++j) total += rho(j, j ^ flip) * term.phase(j);
  }
  return total.real();
}

double expectation(const DensityMatrix& rho, const Eigen::MatrixXcd& h) {
  const auto dim = static_cast<Eigen::Index>(rho.dim());
  if (h.rows() != dim || h.cols() != dim) throw std::invalid_argument("expectation: dimension mismatch");
  double total = 0.0;
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) {
      const cdouble a = rho(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
      const cdouble b = h(c, r);
      total += a.real() * b.real() - a.imag() * b.imag();
    }
  return total;
}

FidelityTarget::FidelityTarget(const Eigen::MatrixXcd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho);
  if (eig.info() != Eigen::Success) throw std::runtime_error("FidelityTarget: eigensolver failed");
  Eigen::VectorXd w = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  sqrt_rho_ = eig.eigenvectors() * w.cast<cdouble>().asDiagonal() * eig.eigenvectors().adjoint();
}

FidelityTarget::FidelityTarget(const Eigen::MatrixXcd& eigenvectors, const Eigen::VectorXd& weights) {
  Eigen::VectorXd w = weights.cwiseMax(0.0).cwiseSqrt();
  sqrt_rho_ = eigenvectors * w.cast<cdouble>().asDiagonal() * eigenvectors.adjoint();
}

double FidelityTarget::fidelity(const DensityMatrix& sigma) const {
  if (static_cast<Eigen::Index>(sigma.dim()) != sqrt_rho_.rows()) {
    throw std::invalid_argument("fidelity: dimension mismatch");
  }
  Eigen::MatrixXcd m = sqrt_rho_ * sigma.to_eigen() * sqrt_rho_;
  m = (0.5 * (m + m.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(m, Eigen::EigenvaluesOnly);
  double f = 0.0;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) f += std::sqrt(std::max(0.0, eig.eigenvalues()[i]));
  return std::clamp(f, 0.0, 1.0);
}

double uhlmann_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw std::invalid_argument("uhlmann_fidelity: dimension mismatch");
  return FidelityTarget(rho.to_eigen()).fidelity(sigma);
}

}  // namespace sykrl
