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

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "sykrl/analysis.hpp"
#include "sykrl/codec.hpp"
#include "sykrl/env.hpp"
#include "sykrl/nn/adam.hpp"
#include "sykrl/nn/network.hpp"
#include "sykrl/rng.hpp"

namespace sykrl {

struct AgentConfig {
  int batch_size = 1000;
  int memory_size = 20000;
  int target_update_every = 500;  // training steps between hard target copies
  double gamma = 5e-3;
  double epsilon_start = 1.0;
  double epsilon_decay = 0.99995;  // per environment step
  double epsilon_min = 0.05;
  int max_episodes = 5000;
  double learning_rate = 1e-3;
  double wall_clock_hours = 48.0;
  int checkpoint_every = 50;  // episodes
  int stop_after_successes = 0;  // 0 runs to max_episodes / wall clock
  std::uint64_t seed = 0;
  nn::NetworkSpec network;

  void validate() const;
  nlohmann::json to_json() const;
  static AgentConfig from_json(const nlohmann::json& j);
};

// max(epsilon_start * decay^k, epsilon_min)
double epsilon_at(const AgentConfig& cfg, std::uint64_t env_steps);

struct Transition {
  CircuitTensor state;
  double state_energy = 0.0;
  int action = 0;
  double reward = 0.0;
  CircuitTensor next_state;
  double next_energy = 0.0;
  bool done = false;
};

// FIFO ring of transitions.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return items_.size(); }
  std::uint64_t inserted() const { return inserted_; }

  void push(Transition t);
  // i-th oldest stored transition.
  const Transition& at(std::size_t i) const;
  // Uniform sample of distinct stored transitions.
  std::vector<const Transition*> sample(std::size_t batch, SplitMix64& rng) const;

  void save(std::ostream& os) const;
  void load(std::istream& is);

 private:
  std::size_t capacity_;
  std::vector<Transition> items_;
  std::size_t head_ = 0;  // slot of the oldest item once full
  std::uint64_t inserted_ = 0;
};

nn::Shape observation_shape(int max_depth, int num_qubits, bool energy_plane);
nn::NdArray observation_batch(std::span<const Observation* const> obs, bool energy_plane);

// epsilon-greedy over legal ids. One uniform decides explore/exploit; exploring
// draws a second index among the legal actions.
int select_action(std::span<const double> q_values, double epsilon, const std::vector<bool>& legal, SplitMix64& rng);
int select_action(nn::Network& net, const Observation& state, bool energy_plane, double epsilon,
                  const std::vector<bool>& legal, SplitMix64& rng);

// Double-DQN targets y = r + (1 - done) gamma Q_target(s', argmax_legal Q_online(s', .)).
// Q tables are [B, A]; `legal` applies to every next state when given.
std::vector<double> td_targets(std::span<const double> rewards, std::span<const std::uint8_t> done,
                               const nn::NdArray& q_online_next, const nn::NdArray& q_target_next, double gamma,
                               const std::vector<bool>* legal = nullptr);

// One Huber-loss Adam step of the online net on a sampled batch. Increments
// `train_steps` and hard-copies online into target every target_update_every steps.
double train_step(const ReplayBuffer& buffer, nn::Network& online, nn::Network& target, nn::Adam& adam,
                  const AgentConfig& cfg, bool energy_plane, SplitMix64& rng, std::uint64_t& train_steps);

struct EpisodeMetrics {
  int episode = 0;
  double episode_return = 0.0;
  double terminal_reward = 0.0;
  double best_f_error = 0.0;
  double fidelity = 0.0;
  int cnot_count = 0;
  int steps = 0;
  double epsilon = 0.0;
  bool success = false;
  double loss = 0.0;  // mean training loss over the episode, 0 before training starts

  nlohmann::json to_json() const;
};

enum class TrainStatus : std::uint8_t { Completed, BudgetExhausted, SuccessTarget, Interrupted };
std::string to_string(TrainStatus s);

struct TrainSummary {
  TrainStatus status = TrainStatus::Completed;
  int episodes = 0;  // completed episodes, including earlier sessions
  std::uint64_t env_steps = 0;
  std::uint64_t train_steps = 0;
  int successes = 0;
  double elapsed_seconds = 0.0;
};

// Episode loop over one environment. Run directory layout:
//   metrics_steps.jsonl, metrics_episodes.jsonl, candidates.jsonl, checkpoint/
class Trainer {
 public:
  Trainer(const PauliSum& hamiltonian, const EnvConfig& env_config, const AgentConfig& agent_config,
          std::filesystem::path run_dir);

  // Restores the latest checkpoint if one exists and trims metric files to it.
  bool resume();
  // Runs until max_episodes, the wall-clock budget, the success target, or
  // the stop flag (checked between episodes).
  TrainSummary run(const std::atomic<bool>* stop = nullptr);
  void save_checkpoint() const;
  void on_episode(std::function<void(const EpisodeMetrics&)> callback) { on_episode_ = std::move(callback); }

  const Environment& environment() const { return env_; }
  const nn::Network& online() const { return online_; }
  const nn::Network& target() const { return target_; }
  const ReplayBuffer& buffer() const { return buffer_; }
  int episodes_done() const { return episode_; }
  std::uint64_t env_steps() const { return env_steps_; }
  std::uint64_t train_steps() const { return train_steps_; }

 private:
  EpisodeMetrics run_episode(std::vector<nlohmann::json>& step_lines, std::optional<CandidateRecord>& candidate);

  Environment env_;
  AgentConfig cfg_;
  std::filesystem::path dir_;
  nn::Network online_;
  nn::Network target_;
  nn::Adam adam_;
  ReplayBuffer buffer_;
  SplitMix64 rng_;
  int episode_ = 0;
  std::uint64_t env_steps_ = 0;
  std::uint64_t train_steps_ = 0;
  int successes_ = 0;
  double elapsed_before_ = 0.0;
  std::chrono::steady_clock::time_point session_start_ = std::chrono::steady_clock::now();
  std::function<void(const EpisodeMetrics&)> on_episode_;
  std::uint64_t lines_steps_ = 0, lines_episodes_ = 0, lines_candidates_ = 0;
};

}  // namespace sykrl
