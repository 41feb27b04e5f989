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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sykrl/pauli.hpp"
#include "sykrl/rng.hpp"

namespace sykrl {

enum class GateKind : std::uint8_t { RX = 0, RY = 1, RZ = 2, CNOT = 3 };

std::string to_string(GateKind k);

// One gate of the {RX, RY, RZ, CNOT} set. Rotations are exp(-i angle P / 2).
struct GateOp {
  GateKind kind = GateKind::RX;
  int qubit = 0;    // acting qubit, or CNOT control
  int target = -1;  // CNOT target, -1 for rotations
  double angle = 0.0;

  static GateOp rx(int q, double a) { return {GateKind::RX, q, -1, a}; }
  static GateOp ry(int q, double a) { return {GateKind::RY, q, -1, a}; }
  static GateOp rz(int q, double a) { return {GateKind::RZ, q, -1, a}; }
  static GateOp cnot(int c, int t) { return {GateKind::CNOT, c, t, 0.0}; }

  bool is_rotation() const { return kind != GateKind::CNOT; }
  // Throws std::out_of_range / std::invalid_argument for illegal indices.
  void validate(int num_qubits) const;

  bool operator==(const GateOp&) const = default;
};

class StateVector {
 public:
  explicit StateVector(int num_qubits);  // |0...0>

  int num_qubits() const { return n_; }
  std::size_t dim() const { return amp_.size(); }
  std::span<const cdouble> amplitudes() const { return amp_; }
  std::span<cdouble> amplitudes() { return amp_; }
  cdouble operator[](std::size_t i) const { return amp_[i]; }

  void apply(const GateOp& g);
  double norm_squared() const;

 private:
  int n_;
  std::vector<cdouble> amp_;
};

// Dense row-major density matrix on n qubits.
class DensityMatrix {
 public:
  explicit DensityMatrix(int num_qubits);  // |0...0><0...0|

  static DensityMatrix from_diagonal(std::span<const double> probabilities);
  static DensityMatrix from_state(const StateVector& psi);
  static DensityMatrix maximally_mixed(int num_qubits);
  static DensityMatrix from_eigen(const Eigen::MatrixXcd& m);

  int num_qubits() const { return n_; }
  std::size_t dim() const { return dim_; }
  cdouble operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }
  cdouble& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }

  // rho -> U rho U^dagger
  void apply(const GateOp& g);
  // rho -> (1-p) rho + p X rho X on qubit q
  void apply_bitflip(int q, double p);
  // rho -> (1-p) rho + p Tr_{q1 q2}(rho) (x) I/4 on the pair
  void apply_depolarizing2(int q1, int q2, double p);

  cdouble trace() const;
  Eigen::MatrixXcd to_eigen() const;
  // Hermitian, unit trace and min eigenvalue >= -psd_tol.
  bool is_valid(double tol = 1e-10, double psd_tol = 1e-9) const;

 private:
  int n_;
  std::size_t dim_;
  std::vector<cdouble> data_;
};

// Per-gate noise: bit flip after each 1-qubit gate, two-qubit depolarizing
// after each CNOT.
struct NoiseModel {
  double p_bitflip_1q = 0.0;
  double p_depol_2q = 0.0;
  bool enabled = false;

  // Median single/two-qubit error rates of an IBM Eagle r3 device.
  static NoiseModel eagle_r3_median() { return {2.342e-4, 8.043e-3, true}; }
  void validate() const;
  bool active() const { return enabled && (p_bitflip_1q > 0.0 || p_depol_2q > 0.0); }
};

// Directed CNOT pairs allowed by the hardware.
class CouplingMap {
 public:
  CouplingMap() = default;
  CouplingMap(std::string name, int num_qubits, std::vector<std::pair<int, int>> pairs);

  static CouplingMap all_to_all(int num_qubits);
  // Line 0-1-2 with branch 1-3, both directions.
  static CouplingMap eagle_r3_t4();
  // {"name":..,"n":..,"pairs":[[c,t],...]}
  static CouplingMap from_json(const std::string& text);
  std::string to_json() const;

  const std::string& name() const { return name_; }
  int num_qubits() const { return n_; }
  const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }
  bool allows(int control, int target) const;

 private:
  std::string name_;
  int n_ = 0;
  std::vector<std::pair<int, int>> pairs_;  // sorted, unique
};

StateVector apply_gate(StateVector psi, const GateOp& g);
DensityMatrix apply_gate(DensityMatrix rho, const GateOp& g);
DensityMatrix apply_bitflip(DensityMatrix rho, int q, double p);
DensityMatrix apply_depolarizing2(DensityMatrix rho, int q1, int q2, double p);
// Gate followed by the channel the noise model attaches to it.
void apply_noisy(DensityMatrix& rho, const GateOp& g, const NoiseModel& noise);

std::vector<double> probabilities(const StateVector& psi);
std::vector<double> probabilities(const DensityMatrix& rho);

// Empirical frequencies from `shots` samples of a distribution.
std::vector<double> sample_frequencies(std::span<const double> probs, int shots, SplitMix64& rng);

double expectation(const DensityMatrix& rho, const PauliSum& h);
// Tr(rho H) for a dense Hermitian H.
double expectation(const DensityMatrix& rho, const Eigen::MatrixXcd& h);

// Tr sqrt(sqrt(rho) sigma sqrt(rho)), clamped to [0, 1].
double uhlmann_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

// Fidelity against a fixed state, with sqrt(rho) computed once.
class FidelityTarget {
 public:
  explicit FidelityTarget(const Eigen::MatrixXcd& rho);
  // From an eigendecomposition rho = V diag(w) V^dagger.
  FidelityTarget(const Eigen::MatrixXcd& eigenvectors, const Eigen::VectorXd& weights);

  double fidelity(const DensityMatrix& sigma) const;
  Eigen::Index dim() const { return sqrt_rho_.rows(); }

 private:
  Eigen::MatrixXcd sqrt_rho_;
};

}  // namespace sykrl
