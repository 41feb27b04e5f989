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

#include "sykrl/agent.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "sykrl/errors.hpp"

namespace sykrl {
namespace fs = std::filesystem;

// ---------------------------------------------------------------- config

void AgentConfig::validate() const {
  if (batch_size < 1) throw std::invalid_argument("agent: batch_size must be >= 1");
  if (memory_size < batch_size) throw std::invalid_argument("agent: memory_size must be >= batch_size");
  if (target_update_every < 1) throw std::invalid_argument("agent: target_update_every must be >= 1");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("agent: gamma must lie in [0, 1]");
  if (!(epsilon_min >= 0.0 && epsilon_min <= epsilon_start && epsilon_start <= 1.0)) {
    throw std::invalid_argument("agent: need 0 <= epsilon_min <= epsilon_start <= 1");
  }
  if (!(epsilon_decay > 0.0 && epsilon_decay <= 1.0)) throw std::invalid_argument("agent: epsilon_decay in (0, 1]");
  if (max_episodes < 1) throw std::invalid_argument("agent: max_episodes must be >= 1");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("agent: learning_rate must be > 0");
  if (!(wall_clock_hours >= 0.0)) throw std::invalid_argument("agent: wall_clock_hours must be >= 0");
  if (checkpoint_every < 1) throw std::invalid_argument("agent: checkpoint_every must be >= 1");
  if (stop_after_successes < 0) throw std::invalid_argument("agent: stop_after_successes must be >= 0");
  network.validate();
}

nlohmann::json AgentConfig::to_json() const {
  return {{"batch_size", batch_size},
          {"memory_size", memory_size},
          {"target_update_every", target_update_every},
          {"gamma", gamma},
          {"epsilon_start", epsilon_start},
          {"epsilon_decay", epsilon_decay},
          {"epsilon_min", epsilon_min},
          {"max_episodes", max_episodes},
          {"learning_rate", learning_rate},
          {"wall_clock_hours", wall_clock_hours},
          {"checkpoint_every", checkpoint_every},
          {"stop_after_successes", stop_after_successes},
          {"seed", seed},
          {"network", network.to_json()}};
}

AgentConfig AgentConfig::from_json(const nlohmann::json& j) {
  AgentConfig c;
  const nlohmann::json defaults = c.to_json();
  try {
    for (const auto& [k, v] : j.items()) {
      if (!defaults.contains(k)) throw std::invalid_argument("agent: unknown key '" + k + "'");
    }
    auto get = [&](const char* k, auto& dst) {
      if (j.contains(k)) dst = j.at(k).get<std::decay_t<decltype(dst)>>();
    };
    get("batch_size", c.batch_size);
    get("memory_size", c.memory_size);
    get("target_update_every", c.target_update_every);
    get("gamma", c.gamma);
    get("epsilon_start", c.epsilon_start);
    get("epsilon_decay", c.epsilon_decay);
    get("epsilon_min", c.epsilon_min);
    get("max_episodes", c.max_episodes);
    get("learning_rate", c.learning_rate);
    get("wall_clock_hours", c.wall_clock_hours);
    get("checkpoint_every", c.checkpoint_every);
    get("stop_after_successes", c.stop_after_successes);
    get("seed", c.seed);
    if (j.contains("network")) c.network = nn::NetworkSpec::from_json(j.at("network"));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("agent: ") + e.what());
  }
  c.validate();
  return c;
}

double epsilon_at(const AgentConfig& cfg, std::uint64_t env_steps) {
  return std::max(cfg.epsilon_start * std::pow(cfg.epsilon_decay, static_cast<double>(env_steps)), cfg.epsilon_min);
}

// ---------------------------------------------------------------- replay

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("ReplayBuffer: capacity must be positive");
}

void ReplayBuffer::push(Transition t) {
  if (items_.size() < capacity_) {
    items_.push_back(std::move(t));
  } else {
    items_[head_] = std::move(t);
    head_ = (head_ + 1) % capacity_;
  }
  ++inserted_;
}

const Transition& ReplayBuffer::at(std::size_t i) const {
  if (i >= items_.size()) throw std::out_of_range("ReplayBuffer::at");
  return items_[(head_ + i) % items_.size()];
}

std::vector<const Transition*> ReplayBuffer::sample(std::size_t batch, SplitMix64& rng) const {
  if (batch > items_.size()) throw std::invalid_argument("ReplayBuffer::sample: batch exceeds stored transitions");
  // Partial Fisher-Yates over the index range.
  std::vector<std::size_t> idx(items_.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<const Transition*> out;
  out.reserve(batch);
  for (std::size_t i = 0; i < batch; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(idx.size() - i));
    std::swap(idx[i], idx[j]);
    out.push_back(&items_[idx[i]]);
  }
  return out;
}

namespace {

void write_u64(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t read_u64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  if (is.gcount() != 8) throw FormatError("replay buffer: truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

void write_tensor(std::ostream& os, const CircuitTensor& t) {
  write_u64(os, static_cast<std::uint64_t>(t.max_depth()));
  write_u64(os, static_cast<std::uint64_t>(t.num_qubits()));
  const auto bytes = t.pack_bits();
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

CircuitTensor read_tensor(std::istream& is) {
  const auto depth = static_cast<int>(read_u64(is));
  const auto n = static_cast<int>(read_u64(is));
  if (depth < 1 || n < 1 || depth > 4096 || n > 64) throw FormatError("replay buffer: bad tensor header");
  const std::size_t bits = static_cast<std::size_t>(depth) * static_cast<std::size_t>(n + 3) * static_cast<std::size_t>(n);
  std::vector<std::uint8_t> bytes((bits + 7) / 8);
  is.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (is.gcount() != static_cast<std::streamsize>(bytes.size())) throw FormatError("replay buffer: truncated");
  return CircuitTensor::unpack_bits(depth, n, bytes);
}

}  // namespace

void ReplayBuffer::save(std::ostream& os) const {
  write_u64(os, capacity_);
  write_u64(os, inserted_);
  write_u64(os, items_.size());
  for (std::size_t i = 0; i < items_.size(); ++i) {
    const Transition& t = at(i);
    write_tensor(os, t.state);
    write_tensor(os, t.next_state);
    write_u64(os, static_cast<std::uint64_t>(t.action));
    write_u64(os, t.done ? 1 : 0);
    const double nums[3] = {t.reward, t.state_energy, t.next_energy};
    nn::write_f64(os, nums);
  }
  if (!os) throw std::runtime_error("replay buffer: write failed");
}

void ReplayBuffer::load(std::istream& is) {
  const std::uint64_t cap = read_u64(is);
  const std::uint64_t inserted = read_u64(is);
  const std::uint64_t count = read_u64(is);
  if (cap == 0 || count > cap || count > inserted) throw FormatError("replay buffer: inconsistent header");
  capacity_ = cap;
  inserted_ = inserted;
  head_ = 0;
  items_.clear();
  items_.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    Transition t;
    t.state = read_tensor(is);
    t.next_state = read_tensor(is);
    t.action = static_cast<int>(read_u64(is));
    t.done = read_u64(is) != 0;
    double nums[3];
    nn::read_f64(is, nums);
    t.reward = nums[0];
    t.state_energy = nums[1];
    t.next_energy = nums[2];
    items_.push_back(std::move(t));
  }
}

// ---------------------------------------------------------------- policy

nn::Shape observation_shape(int max_depth, int num_qubits, bool energy_plane) {
  return {energy_plane ? 2u : 1u, static_cast<std::size_t>(max_depth), static_cast<std::size_t>(num_qubits + 3),
          static_cast<std::size_t>(num_qubits)};
}

nn::NdArray observation_batch(std::span<const Observation* const> obs, bool energy_plane) {
  if (obs.empty()) throw std::invalid_argument("observation_batch: empty batch");
  const nn::Shape one = observation_shape(obs[0]->tensor.max_depth(), obs[0]->tensor.num_qubits(), energy_plane);
  nn::Shape shape{obs.size()};
  shape.insert(shape.end(), one.begin(), one.end());
  nn::NdArray out(shape);
  const std::size_t stride = nn::shape_size(one);
  for (std::size_t b = 0; b < obs.size(); ++b) {
    const auto planes = observation_planes(obs[b]->tensor, energy_plane ? std::optional<double>(obs[b]->energy)
                                                                         : std::nullopt);
    if (planes.size() != stride) throw std::invalid_argument("observation_batch: inconsistent observation shapes");
    std::copy(planes.begin(), planes.end(), out.data() + b * stride);
  }
  return out;
}

int select_action(std::span<const double> q_values, double epsilon, const std::vector<bool>& legal, SplitMix64& rng) {
  if (legal.size() != q_values.size()) throw std::invalid_argument("select_action: mask size mismatch");
  std::vector<int> ids;
  for (std::size_t i = 0; i < legal.size(); ++i)
    if (legal[i]) ids.push_back(static_cast<int>(i));
  if (ids.empty()) throw std::invalid_argument("select_action: no legal action");
  if (rng.uniform() < epsilon) return ids[rng.below(ids.size())];
  int best = ids[0];
  for (int id : ids)
    if (q_values[static_cast<std::size_t>(id)] > q_values[static_cast<std::size_t>(best)]) best = id;
  return best;
}

int select_action(nn::Network& net, const Observation& state, bool energy_plane, double epsilon,
                  const std::vector<bool>& legal, SplitMix64& rng) {
  // Draw first so the network is only evaluated on exploitation steps.
  const double u = rng.uniform();
  std::vector<int> ids;
  for (std::size_t i = 0; i < legal.size(); ++i)
    if (legal[i]) ids.push_back(static_cast<int>(i));
  if (legal.size() != net.num_actions()) throw std::invalid_argument("select_action: mask size mismatch");
  if (ids.empty()) throw std::invalid_argument("select_action: no legal action");
  if (u < epsilon) return ids[rng.below(ids.size())];
  const Observation* p = &state;
  const nn::NdArray q = net.forward(observation_batch(std::span<const Observation* const>(&p, 1), energy_plane));
  int best = ids[0];
  for (int id : ids)
    if (q[static_cast<std::size_t>(id)] > q[static_cast<std::size_t>(best)]) best = id;
  return best;
}

std::vector<double> td_targets(std::span<const double> rewards, std::span<const std::uint8_t> done,
                               const nn::NdArray& q_online_next, const nn::NdArray& q_target_next, double gamma,
                               const std::vector<bool>* legal) {
  const std::size_t b = rewards.size();
  if (done.size() != b || q_online_next.rank() != 2 || q_online_next.shape() != q_target_next.shape() ||
      q_online_next.dim(0) != b) {
    throw std::invalid_argument("td_targets: inconsistent batch shapes");
  }
  const std::size_t a = q_online_next.dim(1);
  if (legal && legal->size() != a) throw std::invalid_argument("td_targets: mask size mismatch");
  std::vector<double> y(b);
  for (std::size_t i = 0; i < b; ++i) {
    y[i] = rewards[i];
    if (done[i] || gamma == 0.0) continue;
    std::size_t best = a;
    for (std::size_t k = 0; k < a; ++k) {
      if (legal && !(*legal)[k]) continue;
      if (best == a || q_online_next[i * a + k] > q_online_next[i * a + best]) best = k;
    }
    if (best == a) continue;  // no legal successor action: treat as terminal
    y[i] += gamma * q_target_next[i * a + best];
  }
  return y;
}

double train_step(const ReplayBuffer& buffer, nn::Network& online, nn::Network& target, nn::Adam& adam,
                  const AgentConfig& cfg, bool energy_plane, SplitMix64& rng, std::uint64_t& train_steps) {
  const auto batch_size = static_cast<std::size_t>(cfg.batch_size);
  if (buffer.size() < batch_size) throw std::logic_error("train_step: buffer holds fewer than batch_size transitions");
  const auto batch = buffer.sample(batch_size, rng);

  std::vector<Observation> states, nexts;
  states.reserve(batch_size);
  nexts.reserve(batch_size);
  std::vector<double> rewards;
  std::vector<std::uint8_t> done;
  for (const Transition* t : batch) {
    states.push_back({t->state, t->state_energy});
    nexts.push_back({t->next_state, t->next_energy});
    rewards.push_back(t->reward);
    done.push_back(t->done ? 1 : 0);
  }
  std::vector<const Observation*> sp, np;
  for (std::size_t i = 0; i < batch_size; ++i) {
    sp.push_back(&states[i]);
    np.push_back(&nexts[i]);
  }

  std::vector<double> y(batch_size);
  const bool need_bootstrap = cfg.gamma != 0.0 && std::any_of(done.begin(), done.end(), [](auto d) { return !d; });
  if (need_bootstrap) {
    const nn::NdArray next_in = observation_batch(np, energy_plane);
    const nn::NdArray q_online_next = online.forward(next_in, false);
    const nn::NdArray q_target_next = target.forward(next_in, false);
    y = td_targets(rewards, done, q_online_next, q_target_next, cfg.gamma);
  } else {
    y = rewards;
  }

  const nn::NdArray q = online.forward(observation_batch(sp, energy_plane), true);
  const std::size_t a = q.dim(1);
  std::vector<double> chosen(batch_size), g(batch_size);
  for (std::size_t i = 0; i < batch_size; ++i) chosen[i] = q[i * a + static_cast<std::size_t>(batch[i]->action)];
  const double loss = nn::huber_loss(chosen, y, g);
  nn::NdArray grad(q.shape());
  for (std::size_t i = 0; i < batch_size; ++i) grad[i * a + static_cast<std::size_t>(batch[i]->action)] = g[i];

  online.zero_grad();
  online.backward(grad);
  adam.step(online.parameters());
  ++train_steps;
  if (train_steps % static_cast<std::uint64_t>(cfg.target_update_every) == 0) target.copy_weights_from(online);
  return loss;
}

// ---------------------------------------------------------------- trainer

nlohmann::json EpisodeMetrics::to_json() const {
  return {{"episode", episode},         {"return", episode_return}, {"terminal_reward", terminal_reward},
          {"best_f_error", best_f_error}, {"fidelity", fidelity},    {"cnot_count", cnot_count},
          {"steps", steps},             {"epsilon", epsilon},       {"success", success},
          {"loss", loss}};
}

std::string to_string(TrainStatus s) {
  switch (s) {
    case TrainStatus::Completed: return "completed";
    case TrainStatus::BudgetExhausted: return "budget_exhausted";
    case TrainStatus::SuccessTarget: return "success_target";
    case TrainStatus::Interrupted: return "interrupted";
  }
  return "unknown";
}

namespace {

void truncate_lines(const fs::path& p, std::uint64_t keep) {
  if (!fs::exists(p)) {
    if (keep != 0) throw FormatError("resume: missing " + p.string());
    return;
  }
  std::ifstream in(p);
  std::string content, line;
  std::uint64_t n = 0;
  while (n < keep && std::getline(in, line)) {
    content += line;
    content += '\n';
    ++n;
  }
  if (n != keep) throw FormatError("resume: " + p.string() + " is shorter than the checkpoint records");
  in.close();
  std::ofstream out(p, std::ios::trunc);
  out << content;
}

void append_lines(const fs::path& p, const std::vector<nlohmann::json>& lines) {
  std::ofstream out(p, std::ios::app);
  if (!out) throw std::runtime_error("cannot append to " + p.string());
  for (const auto& j : lines) out << j.dump() << '\n';
}

std::ofstream open_binary(const fs::path& p) {
  std::ofstream os(p, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  return os;
}

std::ifstream read_binary(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  if (!is) throw FormatError("cannot read " + p.string());
  return is;
}

}  // namespace

Trainer::Trainer(const PauliSum& hamiltonian, const EnvConfig& env_config, const AgentConfig& agent_config,
                 fs::path run_dir)
    : env_(hamiltonian, env_config),
      cfg_(agent_config),
      dir_(std::move(run_dir)),
      online_(cfg_.network, observation_shape(env_config.max_depth, hamiltonian.num_qubits(), env_config.energy_plane),
              env_.actions().size(), SplitMix64(cfg_.seed).fork(1)()),
      target_(online_),
      adam_(nn::AdamConfig{cfg_.learning_rate}),
      buffer_(static_cast<std::size_t>(cfg_.memory_size)),
      rng_(SplitMix64(cfg_.seed).fork(2)()) {
  cfg_.validate();
  fs::create_directories(dir_);
}

void Trainer::save_checkpoint() const {
  const fs::path tmp = dir_ / "checkpoint.tmp";
  const fs::path final_dir = dir_ / "checkpoint";
  fs::remove_all(tmp);
  fs::create_directories(tmp);
  {
    auto os = open_binary(tmp / "online.bin");
    online_.save(os);
  }
  {
    auto os = open_binary(tmp / "target.bin");
    target_.save(os);
  }
  {
    auto os = open_binary(tmp / "adam.bin");
    adam_.save(os);
  }
  {
    auto os = open_binary(tmp / "buffer.bin");
    buffer_.save(os);
  }
  const double elapsed =
      elapsed_before_ + std::chrono::duration<double>(std::chrono::steady_clock::now() - session_start_).count();
  const nlohmann::json manifest{{"format", "sykrl-checkpoint-1"},
                                {"network", cfg_.network.to_json()},
                                {"parameter_count", online_.parameter_count()},
                                {"episode", episode_},
                                {"env_steps", env_steps_},
                                {"train_steps", train_steps_},
                                {"successes", successes_},
                                {"elapsed_seconds", elapsed},
                                {"agent_seed", cfg_.seed},
                                {"agent_rng_counter", rng_.counter()},
                                {"env_seed", env_.config().seed},
                                {"env_rng_counter", const_cast<Environment&>(env_).rng().counter()},
                                {"lines_steps", lines_steps_},
                                {"lines_episodes", lines_episodes_},
                                {"lines_candidates", lines_candidates_}};
  std::ofstream(tmp / "manifest.json") << manifest.dump(2) << '\n';
  fs::remove_all(final_dir);
  fs::rename(tmp, final_dir);
}

bool Trainer::resume() {
  const fs::path ck = dir_ / "checkpoint";
  if (!fs::exists(ck / "manifest.json")) return false;
  nlohmann::json m;
  try {
    std::ifstream in(ck / "manifest.json");
    m = nlohmann::json::parse(in);
    if (m.at("format") != "sykrl-checkpoint-1") throw FormatError("checkpoint: unknown format");
    if (m.at("parameter_count").get<std::size_t>() != online_.parameter_count() ||
        nn::NetworkSpec::from_json(m.at("network")).to_json() != cfg_.network.to_json()) {
      throw FormatError("checkpoint: network does not match the configuration");
    }
    if (m.at("agent_seed").get<std::uint64_t>() != cfg_.seed || m.at("env_seed").get<std::uint64_t>() != env_.config().seed) {
      throw FormatError("checkpoint: seeds do not match the configuration");
    }
    episode_ = m.at("episode").get<int>();
    env_steps_ = m.at("env_steps").get<std::uint64_t>();
    train_steps_ = m.at("train_steps").get<std::uint64_t>();
    successes_ = m.at("successes").get<int>();
    elapsed_before_ = m.at("elapsed_seconds").get<double>();
    rng_.set_counter(m.at("agent_rng_counter").get<std::uint64_t>());
    env_.rng().set_counter(m.at("env_rng_counter").get<std::uint64_t>());
    lines_steps_ = m.at("lines_steps").get<std::uint64_t>();
    lines_episodes_ = m.at("lines_episodes").get<std::uint64_t>();
    lines_candidates_ = m.at("lines_candidates").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("checkpoint manifest: ") + e.what());
  }
  {
    auto is = read_binary(ck / "online.bin");
    online_.load(is);
  }
  {
    auto is = read_binary(ck / "target.bin");
    target_.load(is);
  }
  {
    auto is = read_binary(ck / "adam.bin");
    adam_.load(is);
  }
  {
    auto is = read_binary(ck / "buffer.bin");
    buffer_.load(is);
  }
  truncate_lines(dir_ / "metrics_steps.jsonl", lines_steps_);
  truncate_lines(dir_ / "metrics_episodes.jsonl", lines_episodes_);
  truncate_lines(dir_ / "candidates.jsonl", lines_candidates_);
  session_start_ = std::chrono::steady_clock::now();
  return true;
}

EpisodeMetrics Trainer::run_episode(std::vector<nlohmann::json>& step_lines, std::optional<CandidateRecord>& candidate) {
  const bool energy_plane = env_.config().energy_plane;
  EpisodeMetrics m;
  m.episode = episode_ + 1;
  m.best_f_error = std::numeric_limits<double>::infinity();
  double loss_sum = 0.0;
  int losses = 0;

  Observation obs = env_.reset();
  for (;;) {
    const double eps = epsilon_at(cfg_, env_steps_);
    const int action = select_action(online_, obs, energy_plane, eps, env_.legal_mask(), rng_);
    StepOutcome out = env_.step(action);
    ++env_steps_;
    buffer_.push(Transition{obs.tensor, obs.energy, action, out.reward.value, out.next.tensor, out.next.energy,
                            out.reward.done});
    step_lines.push_back(step_record(m.episode, out));

    m.episode_return += out.reward.value;
    m.best_f_error = std::min(m.best_f_error, std::abs(out.evaluation.free_energy - env_.exact_free_energy()));
    m.steps = out.step;
    m.epsilon = eps;

    if (buffer_.size() >= static_cast<std::size_t>(cfg_.batch_size)) {
      loss_sum += train_step(buffer_, online_, target_, adam_, cfg_, energy_plane, rng_, train_steps_);
      ++losses;
    }
    if (out.reward.done) {
      m.terminal_reward = out.reward.value;
      m.success = out.reward.success;
      break;
    }
    obs = std::move(out.next);
  }

  const VqtspSolution refined = env_.refine();
  candidate = make_candidate(refined, env_.reference(), m.episode, env_.config().seed, m.terminal_reward);
  m.fidelity = candidate->fidelity;
  m.cnot_count = candidate->cnot_count;
  m.loss = losses ? loss_sum / losses : 0.0;
  return m;
}

TrainSummary Trainer::run(const std::atomic<bool>* stop) {
  session_start_ = std::chrono::steady_clock::now();
  const double budget_s = cfg_.wall_clock_hours * 3600.0;
  auto elapsed = [&] {
    return elapsed_before_ + std::chrono::duration<double>(std::chrono::steady_clock::now() - session_start_).count();
  };

  TrainSummary s;
  s.status = TrainStatus::Completed;
  int since_checkpoint = 0;
  while (episode_ < cfg_.max_episodes) {
    if (stop && stop->load()) {
      s.status = TrainStatus::Interrupted;
      break;
    }
    if (elapsed() >= budget_s) {
      s.status = TrainStatus::BudgetExhausted;
      break;
    }
    if (cfg_.stop_after_successes > 0 && successes_ >= cfg_.stop_after_successes) {
      s.status = TrainStatus::SuccessTarget;
      break;
    }
    std::vector<nlohmann::json> step_lines;
    std::optional<CandidateRecord> candidate;
    const EpisodeMetrics m = run_episode(step_lines, candidate);
    ++episode_;
    if (m.success) ++successes_;

    append_lines(dir_ / "metrics_steps.jsonl", step_lines);
    append_lines(dir_ / "metrics_episodes.jsonl", {m.to_json()});
    lines_steps_ += step_lines.size();
    lines_episodes_ += 1;
    if (candidate) {
      append_lines(dir_ / "candidates.jsonl", {candidate->to_json()});
      lines_candidates_ += 1;
    }
    if (on_episode_) on_episode_(m);
    if (++since_checkpoint >= cfg_.checkpoint_every) {
      save_checkpoint();
      since_checkpoint = 0;
    }
  }
  if (s.status == TrainStatus::Completed && cfg_.stop_after_successes > 0 && successes_ >= cfg_.stop_after_successes) {
    s.status = TrainStatus::SuccessTarget;
  }
  save_checkpoint();
  s.episodes = episode_;
  s.env_steps = env_steps_;
  s.train_steps = train_steps_;
  s.successes = successes_;
  s.elapsed_seconds = elapsed();
  return s;
}

}  // namespace sykrl
