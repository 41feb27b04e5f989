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


#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <unistd.h>

#include <gtest/gtest.h>

#include "sykrl/agent.hpp"

namespace {

using namespace sykrl;
namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("sykrl_agent_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_lines(const fs::path& p) {
  std::string s = slurp(p);
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

CircuitTensor tensor_with(int bits, int n = 4, int depth = 5) {
  CircuitTensor t(depth, n);
  for (int k = 0; k < bits; ++k) t.set(k, n + k % 3, k % n, 1);
  return t;
}

Transition make_transition(int id, double reward = 0.0, bool done = false) {
  return Transition{tensor_with(id % 5), 0.0, id % 7, reward, tensor_with((id + 1) % 5), 0.0, done};
}

EnvConfig tiny_env() {
  EnvConfig e;
  e.beta = 5.2;
  e.max_depth = 4;
  e.reward_mode = RewardMode::FreeEnergyFidelity;
  e.step_optimizer = {20, 0.5, 1e-10, 0};
  e.final_evaluations = 30;
  e.seed = 3;
  return e;
}

AgentConfig tiny_agent() {
  AgentConfig a;
  a.batch_size = 8;
  a.memory_size = 40;
  a.target_update_every = 5;
  a.max_episodes = 6;
  a.checkpoint_every = 2;
  a.seed = 9;
  a.network.channels = {2};
  return a;
}

TEST(AgentConfig, Defaults) {
  AgentConfig c;
  EXPECT_EQ(c.batch_size, 1000);
  EXPECT_EQ(c.memory_size, 20000);
  EXPECT_EQ(c.target_update_every, 500);
  EXPECT_DOUBLE_EQ(c.gamma, 5e-3);
  EXPECT_DOUBLE_EQ(c.epsilon_decay, 0.99995);
  EXPECT_DOUBLE_EQ(c.epsilon_min, 0.05);
  EXPECT_DOUBLE_EQ(c.epsilon_start, 1.0);
  EXPECT_EQ(c.max_episodes, 5000);
  EXPECT_DOUBLE_EQ(c.learning_rate, 1e-3);
  EXPECT_DOUBLE_EQ(c.wall_clock_hours, 48.0);
  EXPECT_EQ(c.network.channels, (std::vector<int>{32, 64, 128, 256}));
  EXPECT_NO_THROW(c.validate());
}

TEST(AgentConfig, JsonRoundTripAndValidation) {
  auto c = tiny_agent();
  auto back = AgentConfig::from_json(c.to_json());
  EXPECT_EQ(back.to_json(), c.to_json());
  auto j = c.to_json();
  j["polyak"] = 0.5;
  EXPECT_THROW(AgentConfig::from_json(j), std::invalid_argument);
  c.memory_size = 4;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = tiny_agent();
  c.epsilon_min = 1.5;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(EpsilonSchedule, ExactFormula) {
  AgentConfig c;
  for (std::uint64_t k : {0ULL, 1ULL, 2ULL, 1000ULL, 59000ULL, 59914ULL, 59915ULL, 100000ULL, 1000000ULL})
    EXPECT_EQ(epsilon_at(c, k), std::max(std::pow(0.99995, static_cast<double>(k)), 0.05)) << k;
  EXPECT_EQ(epsilon_at(c, 0), 1.0);
  EXPECT_EQ(epsilon_at(c, 1000000), 0.05);
  double running = 1.0;
  for (std::uint64_t k = 0; k <= 100000; ++k) {
    EXPECT_NEAR(epsilon_at(c, k), std::max(running, 0.05), 1e-9);
    running *= 0.99995;
  }
}

TEST(ReplayBuffer, FifoEvictionAndCapacity) {
  ReplayBuffer buf(5);
  for (int i = 0; i < 12; ++i) {
    buf.push(make_transition(i, static_cast<double>(i)));
    EXPECT_EQ(buf.size(), std::min<std::size_t>(static_cast<std::size_t>(i + 1), 5));
  }
  EXPECT_EQ(buf.inserted(), 12u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(buf.at(i).reward, static_cast<double>(7 + i));
  EXPECT_THROW(buf.at(5), std::out_of_range);
}

TEST(ReplayBuffer, SamplesDistinctTransitions) {
  ReplayBuffer buf(50);
  for (int i = 0; i < 50; ++i) buf.push(make_transition(i, static_cast<double>(i)));
  SplitMix64 rng(1);
  for (int rep = 0; rep < 100; ++rep) {
    auto s = buf.sample(20, rng);
    std::set<const Transition*> uniq(s.begin(), s.end());
    EXPECT_EQ(uniq.size(), 20u);
  }
  EXPECT_THROW(buf.sample(51, rng), std::invalid_argument);
}

TEST(ReplayBuffer, SaveLoadRoundTrip) {
  ReplayBuffer buf(4);
  for (int i = 0; i < 6; ++i) buf.push(make_transition(i, 0.5 * i, i % 2 == 0));
  std::stringstream ss;
  buf.save(ss);
  ReplayBuffer back(4);
  back.load(ss);
  ASSERT_EQ(back.size(), buf.size());
  EXPECT_EQ(back.inserted(), buf.inserted());
  for (std::size_t i = 0; i < buf.size(); ++i) {
    EXPECT_EQ(back.at(i).state, buf.at(i).state);
    EXPECT_EQ(back.at(i).next_state, buf.at(i).next_state);
    EXPECT_EQ(back.at(i).action, buf.at(i).action);
    EXPECT_EQ(back.at(i).reward, buf.at(i).reward);
    EXPECT_EQ(back.at(i).done, buf.at(i).done);
  }
}

TEST(SelectAction, UniformWhenExploring) {
  std::vector<bool> legal(15, false);
  std::vector<int> ids{0, 2, 3, 5, 7, 8, 10, 11, 13, 14};
  for (int i : ids) legal[static_cast<std::size_t>(i)] = true;
  std::vector<double> q(15, 0.0);
  q[2] = 100.0;
  SplitMix64 rng(5);
  std::vector<int> counts(15, 0);
  const int draws = 10000;
  for (int k = 0; k < draws; ++k) ++counts[static_cast<std::size_t>(select_action(q, 1.0, legal, rng))];
  double chi2 = 0;
  const double expected = static_cast<double>(draws) / static_cast<double>(ids.size());
  for (int i = 0; i < 15; ++i) {
    if (!legal[static_cast<std::size_t>(i)]) {
      EXPECT_EQ(counts[static_cast<std::size_t>(i)], 0);
      continue;
    }
    double d = counts[static_cast<std::size_t>(i)] - expected;
    chi2 += d * d / expected;
  }
  // 99.9% quantile of chi-square with 9 degrees of freedom.
  EXPECT_LT(chi2, 27.877);
}

TEST(SelectAction, GreedyAndMasked) {
  std::vector<double> q{0.1, 0.9, 0.5, 2.0};
  std::vector<bool> legal{true, true, true, false};
  SplitMix64 rng(1);
  for (int k = 0; k < 50; ++k) EXPECT_EQ(select_action(q, 0.0, legal, rng), 1);
  std::vector<bool> one{false, false, true, false};
  for (int k = 0; k < 50; ++k) EXPECT_EQ(select_action(q, 0.7, one, rng), 2);
  std::vector<bool> none(4, false);
  EXPECT_THROW(select_action(q, 0.5, none, rng), std::invalid_argument);
}

TEST(TdTargets, HandComputedValues) {
  nn::NdArray online({1, 3}, std::vector<double>{0.1, 0.2, 0.9});
  nn::NdArray target({1, 3}, std::vector<double>{7.0, 8.0, 4.0});
  std::vector<double> r{1.0};
  std::vector<std::uint8_t> not_done{0}, done{1};
  EXPECT_DOUBLE_EQ(td_targets(r, not_done, online, target, 0.5)[0], 3.0);
  EXPECT_DOUBLE_EQ(td_targets(r, done, online, target, 0.5)[0], 1.0);
  EXPECT_DOUBLE_EQ(td_targets(r, not_done, online, target, 0.0)[0], 1.0);
  std::vector<bool> mask{true, true, false};
  EXPECT_DOUBLE_EQ(td_targets(r, not_done, online, target, 0.5, &mask)[0], 1.0 + 0.5 * 8.0);
}

TEST(TdTargets, BatchAndDecoupling) {
  nn::NdArray online({2, 2}, std::vector<double>{1.0, 3.0, 5.0, -1.0});
  nn::NdArray target({2, 2}, std::vector<double>{10.0, 20.0, 30.0, 40.0});
  std::vector<double> r{0.5, -0.5};
  std::vector<std::uint8_t> d{0, 0};
  auto y = td_targets(r, d, online, target, 0.1);
  EXPECT_DOUBLE_EQ(y[0], 0.5 + 0.1 * 20.0);
  EXPECT_DOUBLE_EQ(y[1], -0.5 + 0.1 * 30.0);
  // Raising the target's other entries changes nothing: selection comes from the online net.
  nn::NdArray target2({2, 2}, std::vector<double>{1000.0, 20.0, 30.0, 1000.0});
  auto y2 = td_targets(r, d, online, target2, 0.1);
  EXPECT_EQ(y, y2);
  nn::NdArray target3({2, 2}, std::vector<double>{10.0, 25.0, 35.0, 40.0});
  auto y3 = td_targets(r, d, online, target3, 0.1);
  EXPECT_NE(y3[0], y[0]);
  EXPECT_NE(y3[1], y[1]);
}

TEST(TrainStep, LossDecreasesAndTargetSyncs) {
  AgentConfig cfg = tiny_agent();
  cfg.target_update_every = 10;
  nn::NetworkSpec spec;
  spec.channels = {2};
  nn::Network online(spec, observation_shape(5, 4, false), 7, 1);
  nn::Network target(online);
  nn::Adam adam({1e-2, 0.9, 0.999, 1e-8});
  ReplayBuffer buf(40);
  for (int i = 0; i < 40; ++i) buf.push(Transition{tensor_with(2), 0.0, 3, 1.0, tensor_with(3), 0.0, false});
  SplitMix64 rng(2);
  std::uint64_t steps = 0;
  const auto target_initial = target.flat_parameters();
  double first = 0, last = 0;
  for (int k = 0; k < 50; ++k) {
    double loss = train_step(buf, online, target, adam, cfg, false, rng, steps);
    if (k == 0) first = loss;
    last = loss;
    if (steps < 10) EXPECT_EQ(target.flat_parameters(), target_initial);
    if (steps % 10 == 0) EXPECT_EQ(target.flat_parameters(), online.flat_parameters());
    if (steps % 10 == 3) EXPECT_NE(target.flat_parameters(), online.flat_parameters());
  }
  EXPECT_EQ(steps, 50u);
  EXPECT_LT(last, 0.1 * first);

  ReplayBuffer small(40);
  small.push(make_transition(1));
  EXPECT_THROW(train_step(small, online, target, adam, cfg, false, rng, steps), std::logic_error);
}

TEST(Observation, BatchLayout) {
  EXPECT_EQ(observation_shape(30, 4, false), (nn::Shape{1, 30, 7, 4}));
  EXPECT_EQ(observation_shape(30, 4, true), (nn::Shape{2, 30, 7, 4}));
  Observation a{tensor_with(1), 0.3}, b{tensor_with(2), -0.1};
  std::vector<const Observation*> obs{&a, &b};
  auto x = observation_batch(obs, true);
  EXPECT_EQ(x.shape(), (nn::Shape{2, 2, 5, 7, 4}));
  const std::size_t plane = 5 * 7 * 4;
  EXPECT_EQ(x[plane], 0.3);
  EXPECT_EQ(x[2 * plane + plane], -0.1);
  EXPECT_EQ(x[2 * plane + 4 * 4], 1.0);  // bit [0][n+0][0] of the second sample
}

TEST(Trainer, WritesArtifactsAndIsReproducible) {
  auto h = build_hamiltonian(SykInstance::generate(8, 1));
  auto d1 = scratch_dir("repro1"), d2 = scratch_dir("repro2");
  std::vector<EpisodeMetrics> seen;
  {
    Trainer t(h, tiny_env(), tiny_agent(), d1);
    t.on_episode([&](const EpisodeMetrics& m) { seen.push_back(m); });
    auto s = t.run();
    EXPECT_EQ(s.status, TrainStatus::Completed);
    EXPECT_EQ(s.episodes, 6);
    EXPECT_EQ(s.env_steps, t.env_steps());
    EXPECT_GT(s.train_steps, 0u);
  }
  {
    Trainer t(h, tiny_env(), tiny_agent(), d2);
    t.run();
  }
  ASSERT_EQ(seen.size(), 6u);
  for (const char* f : {"metrics_steps.jsonl", "metrics_episodes.jsonl", "candidates.jsonl"})
    EXPECT_EQ(slurp(d1 / f), slurp(d2 / f)) << f;
  EXPECT_EQ(count_lines(d1 / "metrics_episodes.jsonl"), 6u);
  EXPECT_EQ(count_lines(d1 / "candidates.jsonl"), 6u);
  EXPECT_TRUE(fs::exists(d1 / "checkpoint" / "manifest.json"));
  auto cands = read_candidates_jsonl((d1 / "candidates.jsonl").string());
  ASSERT_EQ(cands.size(), 6u);
  for (std::size_t i = 0; i < cands.size(); ++i) {
    EXPECT_EQ(cands[i].episode, static_cast<int>(i + 1));
    EXPECT_EQ(cands[i].terminal_reward, seen[i].terminal_reward);
  }
  auto j = seen[0].to_json();
  for (const char* key : {"episode", "return", "terminal_reward", "best_f_error", "fidelity", "cnot_count", "steps",
                          "epsilon", "success", "loss"})
    EXPECT_TRUE(j.contains(key)) << key;
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST(Trainer, ResumeContinuesIdentically) {
  auto h = build_hamiltonian(SykInstance::generate(8, 1));
  auto full = scratch_dir("full"), split = scratch_dir("split");
  {
    Trainer t(h, tiny_env(), tiny_agent(), full);
    t.run();
  }
  {
    auto a = tiny_agent();
    a.max_episodes = 3;
    Trainer t(h, tiny_env(), a, split);
    EXPECT_FALSE(t.resume());
    t.run();
  }
  // Simulate a crash that left partial lines after the checkpoint.
  std::ofstream(split / "metrics_episodes.jsonl", std::ios::app) << "{\"partial\":true}\n";
  {
    Trainer t(h, tiny_env(), tiny_agent(), split);
    EXPECT_TRUE(t.resume());
    EXPECT_EQ(t.episodes_done(), 3);
    auto s = t.run();
    EXPECT_EQ(s.episodes, 6);
  }
  for (const char* f : {"metrics_steps.jsonl", "metrics_episodes.jsonl", "candidates.jsonl"})
    EXPECT_EQ(slurp(full / f), slurp(split / f)) << f;

  auto other = tiny_agent();
  other.seed = 10;
  Trainer mismatch(h, tiny_env(), other, split);
  EXPECT_THROW(mismatch.resume(), std::exception);
  fs::remove_all(full);
  fs::remove_all(split);
}

TEST(Trainer, HonorsBudgetStopFlagAndSuccessTarget) {
  auto h = build_hamiltonian(SykInstance::generate(8, 1));
  auto dir = scratch_dir("budget");
  {
    auto a = tiny_agent();
    a.wall_clock_hours = 0.0;
    Trainer t(h, tiny_env(), a, dir);
    auto s = t.run();
    EXPECT_EQ(s.status, TrainStatus::BudgetExhausted);
    EXPECT_EQ(s.episodes, 0);
  }
  fs::remove_all(dir);
  {
    std::atomic<bool> stop{false};
    Trainer t(h, tiny_env(), tiny_agent(), dir);
    t.on_episode([&](const EpisodeMetrics& m) {
      if (m.episode == 2) stop = true;
    });
    auto s = t.run(&stop);
    EXPECT_EQ(s.status, TrainStatus::Interrupted);
    EXPECT_EQ(s.episodes, 2);
  }
  fs::remove_all(dir);
  {
    // A loose threshold makes the first accurate step a success.
    auto e = tiny_env();
    e.reward_mode = RewardMode::FreeEnergy;
    e.zeta_f = 10.0;
    auto a = tiny_agent();
    a.stop_after_successes = 2;
    Trainer t(h, e, a, dir);
    auto s = t.run();
    EXPECT_EQ(s.status, TrainStatus::SuccessTarget);
    EXPECT_EQ(s.successes, 2);
    EXPECT_EQ(s.episodes, 2);
    auto cands = read_candidates_jsonl((dir / "candidates.jsonl").string());
    ASSERT_EQ(cands.size(), 2u);
    for (const auto& c : cands) EXPECT_EQ(c.terminal_reward, 5.0);
  }
  fs::remove_all(dir);
  EXPECT_EQ(to_string(TrainStatus::BudgetExhausted), "budget_exhausted");
}

}  // namespace
