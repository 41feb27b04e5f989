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


#include <cmath>

#include <gtest/gtest.h>

#include "sykrl/env.hpp"
#include "sykrl/errors.hpp"

namespace {

using namespace sykrl;

EnvConfig fast_config(RewardMode mode = RewardMode::FreeEnergy) {
  EnvConfig cfg;
  cfg.reward_mode = mode;
  cfg.max_depth = 6;
  cfg.step_optimizer = {60, 0.5, 1e-10, 0};
  cfg.final_evaluations = 100;
  cfg.seed = 17;
  return cfg;
}

PauliSum instance8() { return build_hamiltonian(SykInstance::generate(8, 1)); }

TEST(EnergyTerm, Examples) {
  EXPECT_NEAR(energy_term(-1.0, -1.2, -1.5), 0.4, 1e-15);
  EXPECT_DOUBLE_EQ(energy_term(-1.0, -3.0, -1.5), 1.0);
  EXPECT_DOUBLE_EQ(energy_term(-1.0, 0.0, -1.5), -1.0);
  EXPECT_DOUBLE_EQ(energy_term(-1.5, -1.4, -1.5), 0.0);
}

TEST(RewardFreeEnergy, ThreeCases) {
  EnvConfig cfg;
  cfg.max_depth = 30;
  auto win = reward_free_energy({-1.0, -1.495, -1.5, 0.0, 3}, cfg);
  EXPECT_EQ(win.value, 5.0);
  EXPECT_TRUE(win.done);
  EXPECT_TRUE(win.success);

  auto lose = reward_free_energy({-1.0, -1.2, -1.5, 0.0, 30}, cfg);
  EXPECT_EQ(lose.value, -5.0);
  EXPECT_TRUE(lose.done);
  EXPECT_FALSE(lose.success);

  auto mid = reward_free_energy({-1.0, -1.2, -1.5, 0.0, 4}, cfg);
  EXPECT_NEAR(mid.value, 0.4, 1e-15);
  EXPECT_FALSE(mid.done);

  auto last_win = reward_free_energy({-1.0, -1.495, -1.5, 0.0, 30}, cfg);
  EXPECT_EQ(last_win.value, 5.0);
}

TEST(RewardFreeEnergyFidelity, ThreeCases) {
  EnvConfig cfg;
  cfg.reward_mode = RewardMode::FreeEnergyFidelity;
  cfg.max_depth = 30;

  auto win = reward_free_energy_fidelity({-1.0, -1.495, -1.5, 0.95, 2}, cfg);
  EXPECT_EQ(win.value, 5.0);
  EXPECT_TRUE(win.done);
  EXPECT_TRUE(win.success);

  auto composite = reward_free_energy_fidelity({-1.0, -1.2, -1.5, 0.9, 5}, cfg);
  EXPECT_NEAR(composite.value, 0.56, 1e-15);
  EXPECT_FALSE(composite.done);

  auto lose = reward_free_energy_fidelity({-1.0, -1.2, -1.5, 0.5, 30}, cfg);
  EXPECT_EQ(lose.value, -5.0);
  EXPECT_TRUE(lose.done);

  // Accurate energy but poor fidelity before the last step: shaped reward.
  auto shaped = reward_free_energy_fidelity({-1.0, -1.495, -1.5, 0.5, 5}, cfg);
  EXPECT_NEAR(shaped.value, 0.6 * 0.99 + 0.4 * 0.0, 1e-15);
  EXPECT_FALSE(shaped.done);

  // Good fidelity at the last step without energy accuracy: shaped and terminal.
  auto end = reward_free_energy_fidelity({-1.0, -1.2, -1.5, 0.95, 30}, cfg);
  EXPECT_NEAR(end.value, 0.6 * 0.4 + 0.4 * 0.9, 1e-15);
  EXPECT_TRUE(end.done);
  EXPECT_FALSE(end.success);
}

TEST(Reward, RangeOverGrid) {
  for (auto mode : {RewardMode::FreeEnergy, RewardMode::FreeEnergyFidelity}) {
    EnvConfig cfg;
    cfg.reward_mode = mode;
    for (double fc = -2.0; fc <= 0.5; fc += 0.1) {
      for (double fid = 0.0; fid <= 1.0; fid += 0.1) {
        for (int step : {1, 15, 30}) {
          auto r = compute_reward({-1.0, fc, -1.5, fid, step}, cfg);
          bool terminal_value = r.value == 5.0 || r.value == -5.0;
          EXPECT_TRUE(terminal_value || (r.value >= -1.0 && r.value <= 1.0)) << r.value;
          if (terminal_value) EXPECT_TRUE(r.done);
          if (step == 30) EXPECT_TRUE(r.done);
        }
      }
    }
  }
}

TEST(RewardMode, StringConversion) {
  EXPECT_EQ(to_string(RewardMode::FreeEnergy), "free_energy");
  EXPECT_EQ(reward_mode_from_string("free_energy_fidelity"), RewardMode::FreeEnergyFidelity);
  EXPECT_THROW(reward_mode_from_string("fidelity"), std::invalid_argument);
}

TEST(EnvConfig, Validation) {
  EnvConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_DOUBLE_EQ(cfg.zeta_f, 1e-2);
  EXPECT_DOUBLE_EQ(cfg.zeta_fid, 0.9);
  EXPECT_DOUBLE_EQ(cfg.weight_energy, 0.6);
  EXPECT_DOUBLE_EQ(cfg.weight_fidelity, 0.4);
  EXPECT_EQ(cfg.step_optimizer.max_evaluations, 200);
  cfg.zeta_f = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.weight_energy = 0;
  cfg.weight_fidelity = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.beta = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(ActionSpace, LayoutAndSize) {
  ActionSpace all(4, CouplingMap::all_to_all(4));
  EXPECT_EQ(all.size(), 12u + 12u);
  EXPECT_EQ(all.gate(0), GateOp::rx(0, 0));
  EXPECT_EQ(all.gate(5), GateOp::ry(1, 0));
  EXPECT_EQ(all.gate(11), GateOp::rz(3, 0));
  EXPECT_EQ(all.gate(12).kind, GateKind::CNOT);

  ActionSpace t(4, CouplingMap::eagle_r3_t4());
  EXPECT_EQ(t.size(), 12u + 6u);
  for (std::size_t id = 12; id < t.size(); ++id)
    EXPECT_TRUE(CouplingMap::eagle_r3_t4().allows(t.gate(id).qubit, t.gate(id).target));
  EXPECT_THROW(ActionSpace(3, CouplingMap::eagle_r3_t4()), std::invalid_argument);
}

TEST(Environment, ResetProperties) {
  auto h = instance8();
  Environment env(h, fast_config());
  auto obs = env.reset();
  EXPECT_EQ(obs.tensor.count(), 0);
  EXPECT_EQ(obs.tensor.max_depth(), 6);
  EXPECT_EQ(env.circuit().gate_count(), 0);
  EXPECT_GE(env.initial_free_energy(), env.exact_free_energy() - 1e-9);
  EXPECT_EQ(env.previous_free_energy(), env.initial_free_energy());

  Environment twin(h, fast_config());
  twin.reset();
  EXPECT_EQ(twin.initial_free_energy(), env.initial_free_energy());
  EXPECT_EQ(twin.theta(), env.theta());
}

TEST(Environment, StepsAreMonotoneAndDeterministic) {
  auto h = instance8();
  std::vector<int> actions{1, 14, 6, 20, 9, 3};
  std::vector<double> rewards_a, rewards_b;
  for (auto* rewards : {&rewards_a, &rewards_b}) {
    Environment env(h, fast_config(RewardMode::FreeEnergyFidelity));
    env.reset();
    double f_prev = env.initial_free_energy();
    for (std::size_t k = 0; k < actions.size(); ++k) {
      auto out = env.step(actions[k]);
      rewards->push_back(out.reward.value);
      EXPECT_EQ(out.step, static_cast<int>(k + 1));
      EXPECT_EQ(out.circuit.gate_count(), static_cast<int>(k + 1));
      EXPECT_EQ(out.next.tensor.count(), static_cast<int>(k + 1));
      EXPECT_LE(out.evaluation.free_energy, f_prev + 1e-12);
      EXPECT_GE(out.evaluation.free_energy, env.exact_free_energy() - 1e-9);
      f_prev = out.evaluation.free_energy;
      EXPECT_EQ(env.previous_free_energy(), f_prev);
      if (out.reward.done) break;
    }
  }
  ASSERT_EQ(rewards_a.size(), rewards_b.size());
  for (std::size_t i = 0; i < rewards_a.size(); ++i) EXPECT_NEAR(rewards_a[i], rewards_b[i], 1e-12);
}

TEST(Environment, EpisodeEndsAtDepthLimit) {
  Environment env(instance8(), fast_config());
  env.reset();
  int steps = 0;
  bool done = false;
  while (!done) {
    auto out = env.step(steps % 12);
    done = out.reward.done;
    ++steps;
    ASSERT_LE(steps, 6);
  }
  EXPECT_LE(env.step_count(), 6);
  for (bool legal : env.legal_mask()) EXPECT_FALSE(legal);
  EXPECT_THROW(env.step(0), std::logic_error);
  auto refined = env.refine();
  EXPECT_LE(refined.evaluation.free_energy, env.previous_free_energy() + 1e-12);
  env.reset();
  for (bool legal : env.legal_mask()) EXPECT_TRUE(legal);
}

TEST(Environment, RejectsBadActionsAndSizes) {
  Environment env(instance8(), fast_config());
  env.reset();
  EXPECT_THROW(env.step(-1), std::invalid_argument);
  EXPECT_THROW(env.step(static_cast<int>(env.actions().size())), std::invalid_argument);
  EXPECT_THROW(Environment(build_hamiltonian(SykInstance::generate(18, 1)), fast_config()), CapacityError);
}

TEST(Environment, TConfigurationRestrictsCnots) {
  auto cfg = fast_config();
  cfg.coupling = CouplingMap::eagle_r3_t4();
  cfg.noise = NoiseModel::eagle_r3_median();
  Environment env(instance8(), cfg);
  EXPECT_EQ(env.actions().size(), 18u);
  env.reset();
  auto out = env.step(12);
  EXPECT_TRUE(CouplingMap::eagle_r3_t4().allows(out.circuit.gates[0].qubit, out.circuit.gates[0].target));
}

TEST(Environment, StepRecordSchema) {
  Environment env(instance8(), fast_config());
  env.reset();
  auto rec = step_record(3, env.step(2));
  for (const char* key : {"episode", "step", "action", "F", "E", "S", "Fid", "reward", "done", "cnot_count", "gate_count"})
    EXPECT_TRUE(rec.contains(key)) << key;
  EXPECT_EQ(rec.size(), 11u);
  EXPECT_EQ(rec["episode"], 3);
  EXPECT_EQ(rec["action"], 2);
}

TEST(Environment, EnergyPlaneObservation) {
  auto cfg = fast_config();
  cfg.energy_plane = true;
  Environment env(instance8(), cfg);
  auto obs = env.reset();
  double expected = std::clamp((env.initial_free_energy() - env.exact_free_energy()) / std::abs(env.exact_free_energy()),
                               -1.0, 1.0);
  EXPECT_NEAR(obs.energy, expected, 1e-15);
}

}  // namespace
