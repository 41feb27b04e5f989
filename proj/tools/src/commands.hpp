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
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sykrl::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kValidation = 2, kCapacity = 3, kInterrupted = 4 };

struct GenerateOptions {
  int majorana_count = 8;
  std::uint64_t seed = 0;
  std::string out;  // stdout when empty
};
int cmd_generate(const GenerateOptions& opt, std::ostream& out);

struct ExactOptions {
  std::string instance;
  std::vector<double> betas{5.2, 18.0, 35.0};
  double prefactor = 1.0;
  std::string out;
};
int cmd_exact(const ExactOptions& opt, std::ostream& out);

struct TrainOptions {
  std::string config;
  std::string output_dir;  // overrides the config when set
  bool resume = false;
  int threads = 1;
  bool quiet = false;
};
int cmd_train(const TrainOptions& opt, std::ostream& log, const std::atomic<bool>* stop);

struct FilterOptions {
  std::string run_dir;
  std::optional<double> w_a, w_b;
  std::string out;  // report JSON; defaults to <run_dir>/best.json
};
int cmd_filter(const FilterOptions& opt, std::ostream& out);

struct BenchOptions {
  std::string instance;
  std::string circuit;  // filter report, candidate JSON, or PQC2 text
  std::string label = "ours";
  int layers = 1;
  double prefactor = 1.0;
  std::string out_dir = ".";
  std::string scaling;  // optional CSV "qubits,cnots" of RL circuits for the cubic fit
  std::uint64_t trotter_seed = 0;
  int trotter_min_qubits = 3;
  int trotter_max_qubits = 10;
  double alpha = 0.05;
};
int cmd_bench(const BenchOptions& opt, std::ostream& out);

struct RunCircuitOptions {
  std::string instance;
  std::string pqc1;  // PQC1 gate text or JSON array of theta
  std::string pqc2;  // PQC2 gate text; empty circuit when unset
  double beta = 5.2;
  double prefactor = 1.0;
  bool noise = false;
  std::string coupling;  // validates CNOTs of PQC2 when set
  std::string entangler = "ring";
  int shots = 0;
  std::uint64_t shot_seed = 0;
  std::string out;
};
int cmd_run_circuit(const RunCircuitOptions& opt, std::ostream& out);

}  // namespace sykrl::cli
