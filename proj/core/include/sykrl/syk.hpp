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

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "sykrl/pauli.hpp"

namespace sykrl {

// Largest qubit count handled by dense exact diagonalization.
inline constexpr int kMaxDenseQubits = 8;

// 1-based Majorana indices i1 < i2 < i3 < i4.
using Quartet = std::array<int, 4>;
using CouplingMap4 = std::map<Quartet, double>;

// One disorder realization of the dense q = 4 SYK model.
struct SykInstance {
  int majorana_count = 0;
  std::uint64_t seed = 0;
  CouplingMap4 couplings;

  int qubit_count() const { return majorana_count / 2; }

  static SykInstance generate(int majorana_count, std::uint64_t seed);

  // {"N":..,"seed":..,"couplings":[[i1,i2,i3,i4,J],...]}, J at 17 significant digits.
  std::string to_json() const;
  static SykInstance from_json(const std::string& text);
};

// Gaussian couplings with mean 0 and variance 3!/N^3, drawn in lexicographic
// quartet order from SplitMix64(seed).
CouplingMap4 sample_couplings(int majorana_count, std::uint64_t seed);

double coupling_variance(int majorana_count);

// Jordan-Wigner image of Majorana i (1-based) on n qubits:
//   chi_{2k-1} = Z..Z X_k / sqrt(2),  chi_{2k} = Z..Z Y_k / sqrt(2).
PauliString majorana_to_pauli(int index, int num_qubits);

// H = prefactor * i^2 * sum_{i1<i2<i3<i4} J chi_i1 chi_i2 chi_i3 chi_i4.
// The ordered sum carries no 1/4! factor; pass prefactor = 1/24 to recover
// the symmetrized normalization.
PauliSum build_hamiltonian(const SykInstance& instance, double prefactor = 1.0);

// Exact Gibbs state of a Hamiltonian via dense diagonalization.
struct ExactThermalReference {
  double beta = 0.0;
  Eigen::MatrixXcd rho;
  Eigen::VectorXd spectrum;       // eigenvalues of H, ascending
  Eigen::MatrixXcd eigenvectors;  // columns match spectrum
  Eigen::VectorXd weights;        // Gibbs probabilities per eigenvector
  double energy = 0.0;
  double entropy = 0.0;
  double log_partition = 0.0;
  // Defined only for beta > 0.
  std::optional<double> free_energy;

  int num_qubits() const;
};

ExactThermalReference exact_thermal(const PauliSum& hamiltonian, double beta);

}  // namespace sykrl
