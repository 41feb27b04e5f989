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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sykrl/backend.hpp"
#include "sykrl/codec.hpp"
#include "sykrl/optimizer.hpp"
#include "sykrl/rng.hpp"
#include "sykrl/syk.hpp"
#include "sykrl/vqtsp.hpp"

namespace sykrl {

enum class RewardMode : std::uint8_t { FreeEnergy, FreeEnergyFidelity };

std::string to_string(RewardMode m);
RewardMode reward_mode_from_string(const std::string& s);

struct EnvConfig {
  double beta = 5.2;
  double zeta_f = 1e-2;      // threshold on |F - F_exact|
  double zeta_fid = 0.9;     // threshold on fidelity (fidelity reward only)
  int max_depth = 30;        // D_max: actions per episode and tensor depth
  RewardMode reward_mode = RewardMode::FreeEnergy;
  double weight_energy = 0.6;
  double weight_fidelity = 0.4;
  NoiseModel noise;
  std::optional<CouplingMap> coupling;  // all-to-all when empty
  Entangler entangler = Entangler::Ring;
  OptimizerConfig step_optimizer{200, 0.5, 1e-10, 0};
  int final_evaluations = 1000;  // budget of the end-of-episode refinement
  bool energy_plane = false;
  std::uint64_t seed = 0;

  void validate() const;
};

// Append-one-gate actions: ids [0, 3n) are rotations (kind * n + qubit),
// followed by the coupling map's CNOT pairs in sorted order.
class ActionSpace {
 public:
  ActionSpace(int num_qubits, const CouplingMap& coupling);

  std::size_t size() const { return templates_.size(); }
  const GateOp& gate(std::size_t id) const { return templates_.at(id); }
  const std::vector<GateOp>& gates() const { return templates_; }

 private:
  std::vector<GateOp> templates_;
};

struct Observation {
  CircuitTensor tensor;
  double energy = 0.0;  // normalized incumbent free energy, used only with the energy plane
};

struct RewardInput {
  double f_prev = 0.0;
  double f_current = 0.0;
  double f_exact = 0.0;
  double fidelity = 0.0;
  int step = 0;  // 1-based index of the action just taken
};

struct Reward {
  double value = 0.0;
  bool done = false;
  bool success = false;
};

// clamp((f_prev - f_current) / |f_prev - f_exact|, -1, 1); 0 when f_prev is exact.
double energy_term(double f_prev, double f_current, double f_exact);
Reward reward_free_energy(const RewardInput& in, const EnvConfig& cfg);
Reward reward_free_energy_fidelity(const RewardInput& in, const EnvConfig& cfg);
Reward compute_reward(const RewardInput& in, const EnvConfig& cfg);

struct StepOutcome {
  Observation next;
  int action = -1;
  int step = 0;
  Reward reward;
  VqtspEvaluation evaluation;
  std::vector<double> theta;
  Pqc2Circuit circuit;
};

// {episode, step, action, F, E, S, Fid, reward, done, cnot_count, gate_count}
nlohmann::json step_record(int episode, const StepOutcome& out);

class Environment {
 public:
  Environment(const PauliSum& hamiltonian, EnvConfig config);

  const EnvConfig& config() const { return cfg_; }
  const ActionSpace& actions() const { return actions_; }
  const ExactThermalReference& reference() const { return *reference_; }
  const ThermalObjective& objective() const { return *objective_; }
  int num_qubits() const { return n_; }
  double exact_free_energy() const { return *reference_->free_energy; }

  Observation reset();
  StepOutcome step(int action);
  std::vector<bool> legal_mask() const;

  // Re-optimizes the incumbent with the final budget (warm start).
  VqtspSolution refine() const;

  int step_count() const { return step_; }
  double initial_free_energy() const { return f0_; }
  double previous_free_energy() const { return f_prev_; }
  const Pqc2Circuit& circuit() const { return circuit_; }
  const std::vector<double>& theta() const { return theta_; }
  Observation observation() const;

  SplitMix64& rng() { return rng_; }

 private:
  OptimizerConfig step_config();

  EnvConfig cfg_;
  int n_;
  CouplingMap coupling_;
  ActionSpace actions_;
  std::unique_ptr<ExactThermalReference> reference_;
  std::unique_ptr<ThermalObjective> objective_;
  SplitMix64 rng_;

  Pqc2Circuit circuit_;
  std::vector<double> theta_;
  int step_ = 0;
  double f0_ = 0.0;
  double f_prev_ = 0.0;
  bool active_ = false;
};

}  // namespace sykrl
