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

#include "sykrl/env.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sykrl/errors.hpp"

namespace sykrl {

std::string to_string(RewardMode m) {
  return m == RewardMode::FreeEnergy ? "free_energy" : "free_energy_fidelity";
}

RewardMode reward_mode_from_string(const std::string& s) {
  if (s == "free_energy") return RewardMode::FreeEnergy;
  if (s == "free_energy_fidelity") return RewardMode::FreeEnergyFidelity;
  throw std::invalid_argument("unknown reward mode '" + s + "'");
}

void EnvConfig::validate() const {
  if (!(beta > 0.0)) throw std::invalid_argument("EnvConfig: beta must be > 0");
  if (!(zeta_f > 0.0) || !(zeta_fid > 0.0)) throw std::invalid_argument("EnvConfig: thresholds must be positive");
  if (max_depth < 1) throw std::invalid_argument("EnvConfig: max_depth must be >= 1");
  if (!(weight_energy + weight_fidelity > 0.0)) throw std::invalid_argument("EnvConfig: a + b must be positive");
  if (final_evaluations < 1) throw std::invalid_argument("EnvConfig: final_evaluations must be >= 1");
  noise.validate();
  step_optimizer.validate();
}

ActionSpace::ActionSpace(int num_qubits, const CouplingMap& coupling) {
  if (coupling.num_qubits() != num_qubits) throw std::invalid_argument("ActionSpace: coupling map width mismatch");
  for (GateKind k : {GateKind::RX, GateKind::RY, GateKind::RZ})
    for (int q = 0; q < num_qubits; ++q) templates_.push_back(GateOp{k, q, -1, 0.0});
  for (const auto& [c, t] : coupling.pairs()) templates_.push_back(GateOp::cnot(c, t));
}

double energy_term(double f_prev, double f_current, double f_exact) {
  const double denom = std::abs(f_prev - f_exact);
  if (denom == 0.0) return 0.0;
  return std::clamp((f_prev - f_current) / denom, -1.0, 1.0);
}

Reward reward_free_energy(const RewardInput& in, const EnvConfig& cfg) {
  const double err = std::abs(in.f_current - in.f_exact);
  if (err <= cfg.zeta_f) return {5.0, true, true};
  if (in.step >= cfg.max_depth) return {-5.0, true, false};
  return {energy_term(in.f_prev, in.f_current, in.f_exact), false, false};
}

Reward reward_free_energy_fidelity(const RewardInput& in, const EnvConfig& cfg) {
  const double err = std::abs(in.f_current - in.f_exact);
  const bool last = in.step >= cfg.max_depth;
  if (err <= cfg.zeta_f && in.fidelity >= cfg.zeta_fid) return {5.0, true, true};
  if (in.fidelity < cfg.zeta_fid && last) return {-5.0, true, false};
  const double e = energy_term(in.f_prev, in.f_current, in.f_exact);
  return {cfg.weight_energy * e + cfg.weight_fidelity * (2.0 * in.fidelity - 1.0), last, false};
}

Reward compute_reward(const RewardInput& in, const EnvConfig& cfg) {
  return cfg.reward_mode == RewardMode::FreeEnergy ? reward_free_energy(in, cfg)
                                                   : reward_free_energy_fidelity(in, cfg);
}

nlohmann::json step_record(int episode, const StepOutcome& out) {
  return {{"episode", episode},
          {"step", out.step},
          {"action", out.action},
          {"F", out.evaluation.free_energy},
          {"E", out.evaluation.energy},
          {"S", out.evaluation.entropy},
          {"Fid", out.evaluation.fidelity},
          {"reward", out.reward.value},
          {"done", out.reward.done},
          {"cnot_count", out.circuit.cnot_count()},
          {"gate_count", out.circuit.gate_count()}};
}

Environment::Environment(const PauliSum& hamiltonian, EnvConfig config)
    : cfg_(std::move(config)),
      n_(hamiltonian.num_qubits()),
      coupling_(cfg_.coupling ? *cfg_.coupling : CouplingMap::all_to_all(hamiltonian.num_qubits())),
      actions_(n_, coupling_),
      rng_(cfg_.seed) {
  cfg_.validate();
  if (n_ > kMaxDenseQubits) throw CapacityError("Environment: exact reference needs n <= 8");
  reference_ = std::make_unique<ExactThermalReference>(exact_thermal(hamiltonian, cfg_.beta));
  objective_ = std::make_unique<ThermalObjective>(hamiltonian, *reference_, cfg_.noise, cfg_.entangler);
  circuit_.num_qubits = n_;
}

OptimizerConfig Environment::step_config() {
  OptimizerConfig c = cfg_.step_optimizer;
  c.seed = rng_();
  return c;
}

Observation Environment::observation() const {
  Observation obs{encode(circuit_.gates, n_, cfg_.max_depth), 0.0};
  if (cfg_.energy_plane) {
    const double scale = std::max(std::abs(exact_free_energy()), 1e-12);
    obs.energy = std::clamp((f_prev_ - exact_free_energy()) / scale, -1.0, 1.0);
  }
  return obs;
}

Observation Environment::reset() {
  circuit_ = Pqc2Circuit{n_, {}};
  theta_.assign(static_cast<std::size_t>(3 * n_), 0.0);
  for (auto& t : theta_) t = rng_.uniform(0.0, 2.0 * std::numbers::pi);
  step_ = 0;
  const VqtspSolution sol = minimize_free_energy(circuit_, *objective_, step_config(), WarmStart{theta_, {}});
  theta_ = sol.theta;
  f0_ = f_prev_ = sol.evaluation.free_energy;
  active_ = true;
  return observation();
}

std::vector<bool> Environment::legal_mask() const {
  return std::vector<bool>(actions_.size(), active_ && step_ < cfg_.max_depth);
}

StepOutcome Environment::step(int action) {
  if (!active_) throw std::logic_error("Environment::step: episode finished; call reset()");
  if (action < 0 || static_cast<std::size_t>(action) >= actions_.size()) {
    throw std::invalid_argument("Environment::step: illegal action " + std::to_string(action));
  }
  if (step_ >= cfg_.max_depth) throw std::logic_error("Environment::step: episode already at D_max");

  Pqc2Circuit grown = circuit_;
  grown.gates.push_back(actions_.gate(static_cast<std::size_t>(action)));
  grown.validate(&coupling_);

  WarmStart warm{theta_, grown.parameters()};
  const VqtspSolution sol = minimize_free_energy(grown, *objective_, step_config(), warm);
  ++step_;

  RewardInput in{f_prev_, sol.evaluation.free_energy, exact_free_energy(), sol.evaluation.fidelity, step_};
  StepOutcome out;
  out.reward = compute_reward(in, cfg_);
  out.action = action;
  out.step = step_;
  out.evaluation = sol.evaluation;
  out.theta = sol.theta;
  out.circuit = sol.circuit;

  circuit_ = sol.circuit;
  theta_ = sol.theta;
  f_prev_ = sol.evaluation.free_energy;
  if (out.reward.done) active_ = false;
  out.next = observation();
  return out;
}

VqtspSolution Environment::refine() const {
  OptimizerConfig c = cfg_.step_optimizer;
  c.max_evaluations = cfg_.final_evaluations;
  c.seed = rng_.at(rng_.counter()) ^ 0x5EEDULL;
  return minimize_free_energy(circuit_, *objective_, c, WarmStart{theta_, circuit_.parameters()});
}

}  // namespace sykrl
