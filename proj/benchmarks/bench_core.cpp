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


#include <numbers>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "sykrl/backend.hpp"
#include "sykrl/env.hpp"
#include "sykrl/nn/network.hpp"
#include "sykrl/syk.hpp"
#include "sykrl/vqtsp.hpp"

namespace {

using namespace sykrl;

struct Fixture {
  PauliSum h = build_hamiltonian(SykInstance::generate(8, 0));
  ExactThermalReference ref = exact_thermal(h, 5.2);
  std::vector<double> theta;
  Pqc2Circuit circuit{4, {}};

  Fixture() {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    for (int i = 0; i < 12; ++i) theta.push_back(u(rng));
    const ActionSpace actions(4, CouplingMap::all_to_all(4));
    for (int k = 0; k < 20; ++k) {
      GateOp g = actions.gate(rng() % actions.size());
      if (g.is_rotation()) g.angle = u(rng);
      circuit.gates.push_back(g);
    }
  }
};

void BM_ExactThermal(benchmark::State& state) {
  const PauliSum h = build_hamiltonian(SykInstance::generate(static_cast<int>(state.range(0)), 0));
  for (auto _ : state) benchmark::DoNotOptimize(exact_thermal(h, 5.2).energy);
}
BENCHMARK(BM_ExactThermal)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_FreeEnergy(benchmark::State& state) {
  Fixture f;
  const NoiseModel noise = state.range(0) ? NoiseModel::eagle_r3_median() : NoiseModel{};
  ThermalObjective obj(f.h, f.ref, noise);
  for (auto _ : state) benchmark::DoNotOptimize(obj.free_energy(f.theta, f.circuit));
}
BENCHMARK(BM_FreeEnergy)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_EvaluateWithFidelity(benchmark::State& state) {
  Fixture f;
  ThermalObjective obj(f.h, f.ref);
  for (auto _ : state) benchmark::DoNotOptimize(obj.evaluate(f.theta, f.circuit).fidelity);
}
BENCHMARK(BM_EvaluateWithFidelity)->Unit(benchmark::kMicrosecond);

void BM_StepOptimization(benchmark::State& state) {
  Fixture f;
  ThermalObjective obj(f.h, f.ref);
  for (auto _ : state)
    benchmark::DoNotOptimize(minimize_free_energy(f.circuit, obj, {200, 0.5, 1e-10, 0}).evaluation.free_energy);
}
BENCHMARK(BM_StepOptimization)->Unit(benchmark::kMillisecond);

void BM_ConvForward(benchmark::State& state) {
  nn::NetworkSpec spec;
  spec.channels = {8, 16};
  const std::size_t batch = static_cast<std::size_t>(state.range(0));
  nn::Network net(spec, {1, 30, 7, 4}, 24, 0);
  nn::NdArray x({batch, 1, 30, 7, 4}, std::vector<double>(batch * 30 * 7 * 4, 0.5));
  for (auto _ : state) benchmark::DoNotOptimize(net.forward(x)[0]);
}
BENCHMARK(BM_ConvForward)->Arg(1)->Arg(32)->Unit(benchmark::kMicrosecond);

void BM_ConvForwardBackward(benchmark::State& state) {
  nn::NetworkSpec spec;
  spec.channels = {8, 16};
  nn::Network net(spec, {1, 30, 7, 4}, 24, 0);
  nn::NdArray x({32, 1, 30, 7, 4}, std::vector<double>(32 * 30 * 7 * 4, 0.5));
  nn::NdArray g({32, 24}, std::vector<double>(32 * 24, 1.0));
  for (auto _ : state) {
    net.zero_grad();
    net.forward(x, true);
    benchmark::DoNotOptimize(net.backward(g)[0]);
  }
}
BENCHMARK(BM_ConvForwardBackward)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
