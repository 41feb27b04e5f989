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

#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "sykrl/errors.hpp"

namespace sykrl::cli {
namespace {

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [k, _] : j.items()) {
    if (!known.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
  }
}

template <typename T>
void take(const nlohmann::json& j, const char* key, T& dst, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(where + "." + key + ": wrong type");
  }
}

}  // namespace

SykInstance InstanceSpec::load() const {
  if (!file.empty()) return SykInstance::from_json(read_text_file(file));
  return SykInstance::generate(majorana_count, seed);
}

Entangler entangler_from_string(const std::string& s) {
  if (s == "ring") return Entangler::Ring;
  if (s == "all_to_all") return Entangler::AllToAll;
  throw ConfigError("unknown entangler '" + s + "' (ring | all_to_all)");
}

std::string to_string(Entangler e) { return e == Entangler::Ring ? "ring" : "all_to_all"; }

CouplingMap resolve_coupling(const std::string& spec, int num_qubits) {
  CouplingMap map;
  if (spec == "all_to_all") {
    map = CouplingMap::all_to_all(num_qubits);
  } else if (spec == "eagle_r3_t4") {
    map = CouplingMap::eagle_r3_t4();
  } else {
    map = CouplingMap::from_json(read_text_file(spec));
  }
  if (map.num_qubits() != num_qubits) {
    throw ConfigError("coupling map '" + spec + "' has " + std::to_string(map.num_qubits()) + " qubits, instance has " +
                      std::to_string(num_qubits));
  }
  return map;
}

nlohmann::json noise_to_json(const NoiseModel& noise) {
  return {{"enabled", noise.enabled}, {"p_bitflip", noise.p_bitflip_1q}, {"p_depolarizing", noise.p_depol_2q}};
}

NoiseModel noise_from_json(const nlohmann::json& j) {
  reject_unknown(j, {"enabled", "p_bitflip", "p_depolarizing"}, "noise");
  NoiseModel n = NoiseModel::eagle_r3_median();
  n.enabled = false;
  take(j, "enabled", n.enabled, "noise");
  take(j, "p_bitflip", n.p_bitflip_1q, "noise");
  take(j, "p_depolarizing", n.p_depol_2q, "noise");
  try {
    n.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return n;
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json inst = {{"N", instance.majorana_count}, {"seed", instance.seed}, {"prefactor", instance.prefactor}};
  if (!instance.file.empty()) inst["file"] = instance.file;
  nlohmann::json j{
      {"instance", inst},
      {"betas", betas},
      {"seeds", seeds},
      {"env",
       {{"zeta_F", env.zeta_f},
        {"zeta_Fid", env.zeta_fid},
        {"D_max", env.max_depth},
        {"reward_mode", sykrl::to_string(env.reward_mode)},
        {"a", env.weight_energy},
        {"b", env.weight_fidelity},
        {"coupling", coupling},
        {"entangler", to_string(env.entangler)},
        {"step_evaluations", env.step_optimizer.max_evaluations},
        {"initial_step", env.step_optimizer.initial_step},
        {"tolerance", env.step_optimizer.tolerance},
        {"final_evaluations", env.final_evaluations},
        {"energy_plane", env.energy_plane}}},
      {"noise", noise_to_json(env.noise)},
      {"agent", agent.to_json()},
      {"output_dir", output_dir}};
  if (filter) j["filter"] = {{"w_a", filter->w_a}, {"w_b", filter->w_b}};
  return j;
}

RunConfig parse_run_config(const nlohmann::json& j) {
  reject_unknown(j, {"instance", "betas", "seeds", "env", "noise", "agent", "filter", "output_dir"}, "config");
  RunConfig c;
  if (j.contains("instance")) {
    const auto& ji = j.at("instance");
    reject_unknown(ji, {"N", "seed", "file", "prefactor"}, "instance");
    take(ji, "prefactor", c.instance.prefactor, "instance");
    if (!std::isfinite(c.instance.prefactor) || c.instance.prefactor == 0.0) {
      throw ConfigError("instance.prefactor must be finite and non-zero");
    }
    take(ji, "N", c.instance.majorana_count, "instance");
    take(ji, "seed", c.instance.seed, "instance");
    take(ji, "file", c.instance.file, "instance");
    if (c.instance.file.empty() && (c.instance.majorana_count < 4 || c.instance.majorana_count % 2)) {
      throw ConfigError("instance.N must be even and >= 4");
    }
  }
  take(j, "betas", c.betas, "config");
  take(j, "seeds", c.seeds, "config");
  take(j, "output_dir", c.output_dir, "config");
  if (c.betas.empty()) throw ConfigError("betas: at least one temperature required");
  for (double b : c.betas)
    if (!(b > 0.0)) throw ConfigError("betas: training needs beta > 0");
  if (c.seeds.empty()) throw ConfigError("seeds: at least one seed required");

  if (j.contains("env")) {
    const auto& je = j.at("env");
    reject_unknown(je,
                   {"zeta_F", "zeta_Fid", "D_max", "reward_mode", "a", "b", "coupling", "entangler", "step_evaluations",
                    "initial_step", "tolerance", "final_evaluations", "energy_plane"},
                   "env");
    take(je, "zeta_F", c.env.zeta_f, "env");
    take(je, "zeta_Fid", c.env.zeta_fid, "env");
    take(je, "D_max", c.env.max_depth, "env");
    take(je, "a", c.env.weight_energy, "env");
    take(je, "b", c.env.weight_fidelity, "env");
    take(je, "coupling", c.coupling, "env");
    take(je, "step_evaluations", c.env.step_optimizer.max_evaluations, "env");
    take(je, "initial_step", c.env.step_optimizer.initial_step, "env");
    take(je, "tolerance", c.env.step_optimizer.tolerance, "env");
    take(je, "final_evaluations", c.env.final_evaluations, "env");
    take(je, "energy_plane", c.env.energy_plane, "env");
    std::string mode = sykrl::to_string(c.env.reward_mode), ent = to_string(c.env.entangler);
    take(je, "reward_mode", mode, "env");
    take(je, "entangler", ent, "env");
    try {
      c.env.reward_mode = reward_mode_from_string(mode);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    c.env.entangler = entangler_from_string(ent);
  }
  c.env.noise = noise_from_json(j.value("noise", nlohmann::json::object()));
  try {
    EnvConfig probe = c.env;
    probe.beta = c.betas.front();
    probe.validate();
    c.agent = AgentConfig::from_json(j.value("agent", nlohmann::json::object()));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (j.contains("filter")) {
    const auto& jf = j.at("filter");
    reject_unknown(jf, {"w_a", "w_b"}, "filter");
    FilterWeights w;
    take(jf, "w_a", w.w_a, "filter");
    take(jf, "w_b", w.w_b, "filter");
    if (w.w_a < 0 || w.w_b < 0) throw ConfigError("filter: weights must be non-negative");
    c.filter = w;
  }
  return c;
}

RunConfig load_run_config(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_run_config(j);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

}  // namespace sykrl::cli
