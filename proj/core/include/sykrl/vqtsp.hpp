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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sykrl/backend.hpp"
#include "sykrl/optimizer.hpp"
#include "sykrl/pauli.hpp"
#include "sykrl/syk.hpp"

namespace sykrl {

enum class Entangler : std::uint8_t { Ring, AllToAll };

// Entropy circuit: RZ-RY-RZ on every qubit (theta[3q..3q+2]) followed by a
// CNOT entangler. The ring uses CNOT(i, (i+1) mod n) for i = 0..n-1.
struct Pqc1Config {
  int num_qubits = 0;
  std::vector<double> theta;
  Entangler entangler = Entangler::Ring;

  static Pqc1Config zeros(int num_qubits, Entangler e = Entangler::Ring);
  std::vector<GateOp> gates() const;
  void validate() const;

  // Recovers theta from a gate list with exactly the structure gates() emits.
  static Pqc1Config from_gates(int num_qubits, const std::vector<GateOp>& gates);
};

// Energy circuit grown by the agent. Each rotation carries its own angle.
struct Pqc2Circuit {
  int num_qubits = 0;
  std::vector<GateOp> gates;

  std::size_t parameter_count() const;
  std::vector<double> parameters() const;
  void set_parameters(std::span<const double> phi);
  int cnot_count() const;
  int gate_count() const { return static_cast<int>(gates.size()); }
  // Throws if a gate is out of range or a CNOT is not in the coupling map.
  void validate(const CouplingMap* coupling = nullptr) const;
};

// One gate per line: "RX q angle", "RY q angle", "RZ q angle", "CNOT c t".
// Angles are written with 17 significant digits; a leading "# qubits n"
// comment records the width. Blank lines and other '#' lines are ignored.
std::string circuit_to_text(int num_qubits, const std::vector<GateOp>& gates);
std::vector<GateOp> circuit_from_text(const std::string& text, int* num_qubits = nullptr);

struct VqtspEvaluation {
  double energy = 0.0;
  double entropy = 0.0;  // nats
  double free_energy = 0.0;
  double fidelity = 0.0;
  double beta = 0.0;
};

struct EntropyResult {
  std::vector<double> probabilities;
  double entropy = 0.0;
};

// Shannon entropy in nats with 0 ln 0 = 0.
double shannon_entropy(std::span<const double> p);

// Evaluates the two-circuit protocol for a fixed Hamiltonian and temperature.
// PQC1 runs on |0..0>; its measured distribution p becomes rho1 = diag(p);
// PQC2 rotates rho1 into rho2 on which the energy is measured.
class ThermalObjective {
 public:
  ThermalObjective(const PauliSum& hamiltonian, const ExactThermalReference& reference, NoiseModel noise = {},
                   Entangler entangler = Entangler::Ring);

  int num_qubits() const { return n_; }
  double beta() const { return beta_; }
  const NoiseModel& noise() const { return noise_; }
  Entangler entangler() const { return entangler_; }
  const ExactThermalReference& reference() const { return *reference_; }

  // Exact outcome probabilities by default; a positive shot count replaces
  // them with seeded empirical frequencies.
  void set_shots(int shots, std::uint64_t seed);

  EntropyResult pqc1_entropy(std::span<const double> theta) const;
  DensityMatrix prepare(std::span<const double> probabilities, const Pqc2Circuit& circuit) const;
  // F only; skips the fidelity computation.
  double free_energy(std::span<const double> theta, const Pqc2Circuit& circuit) const;
  VqtspEvaluation evaluate(std::span<const double> theta, const Pqc2Circuit& circuit) const;

 private:
  int n_;
  double beta_;
  Eigen::MatrixXcd h_dense_;
  const ExactThermalReference* reference_;
  FidelityTarget target_;
  NoiseModel noise_;
  Entangler entangler_;
  int shots_ = 0;
  std::uint64_t shot_seed_ = 0;
};

EntropyResult entropy_of_pqc1(std::span<const double> theta, int num_qubits, const NoiseModel& noise = {},
                              Entangler entangler = Entangler::Ring);

VqtspEvaluation evaluate(std::span<const double> theta, const Pqc2Circuit& circuit, double beta,
                         const PauliSum& hamiltonian, const ExactThermalReference& reference,
                         const NoiseModel& noise = {});

struct VqtspSolution {
  std::vector<double> theta;
  Pqc2Circuit circuit;  // with optimized angles
  VqtspEvaluation evaluation;
  int evaluations = 0;
};

struct WarmStart {
  std::vector<double> theta;
  std::vector<double> phi;
};

// Jointly minimizes F over [theta; phi]. Without a warm start theta is drawn
// uniformly from [0, 2 pi) with the optimizer seed and phi starts from the
// circuit's current angles.
VqtspSolution minimize_free_energy(const Pqc2Circuit& circuit, const ThermalObjective& objective,
                                   const OptimizerConfig& config, const std::optional<WarmStart>& warm = std::nullopt);

}  // namespace sykrl
