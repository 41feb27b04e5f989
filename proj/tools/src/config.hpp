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
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sykrl/agent.hpp"
#include "sykrl/analysis.hpp"
#include "sykrl/env.hpp"
#include "sykrl/syk.hpp"

namespace sykrl::cli {

// Schema violation in a user-supplied configuration (exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct InstanceSpec {
  int majorana_count = 8;
  std::uint64_t seed = 0;
  std::string file;  // when set, the instance is read from this JSON file
  double prefactor = 1.0;  // overall scale of the Hamiltonian

  SykInstance load() const;
};

struct RunConfig {
  InstanceSpec instance;
  std::vector<double> betas{5.2, 18.0, 35.0};
  std::vector<std::uint64_t> seeds{0};
  EnvConfig env;  // beta and seed are filled per run
  std::string coupling = "all_to_all";
  AgentConfig agent;
  std::optional<FilterWeights> filter;
  std::string output_dir = "runs";

  // Canonical form with every default spelled out.
  nlohmann::json to_json() const;
};

RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

// "all_to_all", "eagle_r3_t4", or a path to a coupling-map JSON file.
CouplingMap resolve_coupling(const std::string& spec, int num_qubits);
Entangler entangler_from_string(const std::string& s);
std::string to_string(Entangler e);

nlohmann::json noise_to_json(const NoiseModel& noise);
NoiseModel noise_from_json(const nlohmann::json& j);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace sykrl::cli
