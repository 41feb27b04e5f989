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

#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "config.hpp"
#include "sykrl/agent.hpp"
#include "sykrl/analysis.hpp"
#include "sykrl/errors.hpp"
#include "sykrl/syk.hpp"
#include "sykrl/vqtsp.hpp"

namespace sykrl::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string beta_tag(double beta) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "beta_%g", beta);
  return buf;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_text_file(path, text);
  }
}

json instance_summary(const SykInstance& inst) {
  return {{"N", inst.majorana_count}, {"seed", inst.seed}, {"num_qubits", inst.qubit_count()},
          {"couplings", inst.couplings.size()}};
}

// PQC2 text, a candidate record, or a filter report holding one.
Pqc2Circuit load_pqc2(const std::string& path, int num_qubits) {
  const std::string text = read_text_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  Pqc2Circuit c;
  c.num_qubits = num_qubits;
  if (first != std::string::npos && text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw FormatError(path + ": " + e.what());
    }
    const json& rec = j.contains("candidate") ? j.at("candidate") : j;
    c = CandidateRecord::from_json(rec).circuit;
  } else {
    int n = num_qubits;
    c.gates = circuit_from_text(text, &n);
    c.num_qubits = n;
  }
  if (c.num_qubits != num_qubits) {
    throw FormatError(path + ": circuit has " + std::to_string(c.num_qubits) + " qubits, instance has " +
                      std::to_string(num_qubits));
  }
  c.validate();
  return c;
}

std::vector<double> load_theta(const std::string& path, int num_qubits, Entangler ent) {
  const std::string text = read_text_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    std::vector<double> theta;
    try {
      theta = json::parse(text).get<std::vector<double>>();
    } catch (const json::exception& e) {
      throw FormatError(path + ": " + e.what());
    }
    if (theta.size() != static_cast<std::size_t>(3 * num_qubits)) {
      throw FormatError(path + ": expected " + std::to_string(3 * num_qubits) + " angles");
    }
    return theta;
  }
  int n = num_qubits;
  const auto gates = circuit_from_text(text, &n);
  if (n != num_qubits) throw FormatError(path + ": PQC1 width does not match the instance");
  Pqc1Config cfg = Pqc1Config::from_gates(n, gates);
  if (cfg.entangler != ent) throw FormatError(path + ": PQC1 entangler differs from --entangler");
  return cfg.theta;
}

}  // namespace

// ---------------------------------------------------------------- generate

int cmd_generate(const GenerateOptions& opt, std::ostream& out) {
  const SykInstance inst = SykInstance::generate(opt.majorana_count, opt.seed);
  emit(opt.out, inst.to_json(), out);
  return kOk;
}

// ---------------------------------------------------------------- exact

int cmd_exact(const ExactOptions& opt, std::ostream& out) {
  if (opt.betas.empty()) throw ConfigError("exact: at least one beta required");
  const SykInstance inst = SykInstance::from_json(read_text_file(opt.instance));
  if (inst.qubit_count() > kMaxDenseQubits) {
    throw CapacityError("exact: " + std::to_string(inst.qubit_count()) + " qubits exceed the dense limit of " +
                        std::to_string(kMaxDenseQubits));
  }
  const PauliSum h = build_hamiltonian(inst, opt.prefactor);
  json rows = json::array();
  for (double beta : opt.betas) {
    const ExactThermalReference ref = exact_thermal(h, beta);
    rows.push_back({{"beta", beta},
                    {"energy", ref.energy},
                    {"entropy", ref.entropy},
                    {"free_energy", ref.free_energy ? json(*ref.free_energy) : json(nullptr)},
                    {"log_partition", ref.log_partition},
                    {"ground_energy", ref.spectrum[0]}});
  }
  const json doc{{"instance", instance_summary(inst)}, {"prefactor", opt.prefactor}, {"rows", rows}};
  emit(opt.out, doc.dump(2) + "\n", out);
  return kOk;
}

// ---------------------------------------------------------------- train

int cmd_train(const TrainOptions& opt, std::ostream& log, const std::atomic<bool>* stop) {
  RunConfig cfg = load_run_config(opt.config);
  if (!opt.output_dir.empty()) cfg.output_dir = opt.output_dir;
  const SykInstance inst = cfg.instance.load();
  if (inst.qubit_count() > kMaxDenseQubits) {
    throw CapacityError("train: the exact reference needs n <= " + std::to_string(kMaxDenseQubits) + " qubits");
  }
  cfg.instance.majorana_count = inst.majorana_count;
  cfg.instance.seed = inst.seed;
  const PauliSum h = build_hamiltonian(inst, cfg.instance.prefactor);
  const CouplingMap coupling = resolve_coupling(cfg.coupling, inst.qubit_count());

  const fs::path root(cfg.output_dir);
  fs::create_directories(root);
  write_text_file((root / "config.resolved.json").string(), cfg.to_json().dump(2) + "\n");
  write_text_file((root / "instance.json").string(), inst.to_json());

  struct Job {
    double beta;
    std::uint64_t seed;
    fs::path dir;
  };
  std::vector<Job> jobs;
  for (double beta : cfg.betas)
    for (std::uint64_t seed : cfg.seeds) jobs.push_back({beta, seed, root / beta_tag(beta) / ("seed_" + std::to_string(seed))});

  std::mutex log_mutex;
  std::vector<TrainSummary> results(jobs.size());
  std::vector<std::string> errors(jobs.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const Job& job = jobs[i];
      try {
        EnvConfig env = cfg.env;
        env.beta = job.beta;
        env.seed = job.seed;
        env.coupling = coupling;
        AgentConfig agent = cfg.agent;
        agent.seed = job.seed;

        Trainer trainer(h, env, agent, job.dir);
        const bool resumed = opt.resume && trainer.resume();
        if (!opt.quiet) {
          trainer.on_episode([&, i](const EpisodeMetrics& m) {
            std::lock_guard lock(log_mutex);
            log << beta_tag(jobs[i].beta) << " seed " << jobs[i].seed << " episode " << m.episode << " return "
                << m.episode_return << " terminal " << m.terminal_reward << " |dF| " << m.best_f_error << " fid "
                << m.fidelity << " cnots " << m.cnot_count << " eps " << m.epsilon << '\n';
          });
        }
        json manifest{{"version", kVersion},
                      {"instance", instance_summary(inst)},
                      {"beta", job.beta},
                      {"seeds", {{"instance", inst.seed}, {"env", env.seed}, {"agent", agent.seed}}},
                      {"exact_free_energy", trainer.environment().exact_free_energy()},
                      {"coupling", json::parse(coupling.to_json())},
                      {"config", cfg.to_json()},
                      {"resumed", resumed},
                      {"status", "running"}};
        write_text_file((job.dir / "manifest.json").string(), manifest.dump(2) + "\n");
        results[i] = trainer.run(stop);
        manifest["status"] = to_string(results[i].status);
        manifest["summary"] = {{"episodes", results[i].episodes},
                               {"env_steps", results[i].env_steps},
                               {"train_steps", results[i].train_steps},
                               {"successes", results[i].successes},
                               {"elapsed_seconds", results[i].elapsed_seconds}};
        write_text_file((job.dir / "manifest.json").string(), manifest.dump(2) + "\n");
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const int threads = std::max(1, std::min<int>(opt.threads, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int code = kOk;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!errors[i].empty()) {
      log << "run " << jobs[i].dir.string() << " failed: " << errors[i] << '\n';
      code = kFailure;
      continue;
    }
    log << jobs[i].dir.string() << ": " << to_string(results[i].status) << ", " << results[i].episodes
        << " episodes, " << results[i].successes << " successes\n";
    if (results[i].status == TrainStatus::Interrupted && code == kOk) code = kInterrupted;
  }
  return code;
}

// ---------------------------------------------------------------- filter

int cmd_filter(const FilterOptions& opt, std::ostream& out) {
  const fs::path root(opt.run_dir);
  if (!fs::is_directory(root)) throw ConfigError("filter: '" + opt.run_dir + "' is not a directory");
  std::vector<CandidateRecord> all;
  json sources = json::array();
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file() && e.path().filename() == "candidates.jsonl") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    auto recs = read_candidates_jsonl(f.string());
    sources.push_back({{"file", f.string()}, {"count", recs.size()}});
    all.insert(all.end(), recs.begin(), recs.end());
  }
  if (all.empty()) throw ConfigError("filter: no candidates found under '" + opt.run_dir + "'");

  // Weights: flags, then the run's config, then the tabulated defaults.
  std::optional<RunConfig> cfg;
  for (fs::path p = root; !p.empty(); p = p.parent_path()) {
    if (fs::exists(p / "config.resolved.json")) {
      cfg = load_run_config((p / "config.resolved.json").string());
      break;
    }
    if (p == p.parent_path()) break;
  }
  FilterWeights w;
  std::string weight_source = "flags";
  if (opt.w_a || opt.w_b) {
    w = {opt.w_a.value_or(0.0), opt.w_b.value_or(0.0)};
  } else if (cfg && cfg->filter) {
    w = *cfg->filter;
    weight_source = "config";
  } else if (cfg) {
    w = default_filter_weights(cfg->env.reward_mode, cfg->instance.majorana_count);
    weight_source = "default_table";
  } else {
    throw ConfigError("filter: no weights given and no config.resolved.json found");
  }
  if (w.w_a < 0 || w.w_b < 0) throw ConfigError("filter: weights must be non-negative");

  const CandidateRecord& best = filter_best(all, w);
  const Entangler ent = cfg ? cfg->env.entangler : Entangler::Ring;
  const Pqc1Config pqc1{best.circuit.num_qubits, best.theta, ent};
  const json report{{"weights", {{"w_a", w.w_a}, {"w_b", w.w_b}, {"source", weight_source}}},
                    {"score", filter_score(best, w)},
                    {"candidates_considered", all.size()},
                    {"sources", sources},
                    {"candidate", best.to_json()},
                    {"pqc1", circuit_to_text(pqc1.num_qubits, pqc1.gates())}};
  const fs::path report_path = opt.out.empty() ? root / "best.json" : fs::path(opt.out);
  write_text_file(report_path.string(), report.dump(2) + "\n");
  const fs::path stem = report_path.parent_path();
  write_text_file((stem / "best_pqc1.txt").string(), circuit_to_text(pqc1.num_qubits, pqc1.gates()));
  write_text_file((stem / "best_pqc2.txt").string(), circuit_to_text(best.circuit.num_qubits, best.circuit.gates));

  out << "| episode | seed | beta | dF | dE | dS | fidelity | CNOTs | gates | score |\n"
      << "|---:|---:|---:|---:|---:|---:|---:|---:|---:|---:|\n"
      << "| " << best.episode << " | " << best.seed << " | " << best.beta << " | " << best.delta_f << " | "
      << best.delta_energy << " | " << best.delta_entropy << " | " << best.fidelity << " | " << best.cnot_count
      << " | " << best.gate_count << " | " << filter_score(best, w) << " |\n"
      << "report: " << report_path.string() << '\n';
  return kOk;
}

// ---------------------------------------------------------------- bench

int cmd_bench(const BenchOptions& opt, std::ostream& out) {
  if (opt.layers < 1) throw ConfigError("bench: layers must be >= 1");
  if (opt.trotter_min_qubits < 2 || opt.trotter_max_qubits < opt.trotter_min_qubits + 3) {
    throw ConfigError("bench: the Trotter scaling range needs at least four qubit counts starting at 2");
  }
  const SykInstance inst = SykInstance::from_json(read_text_file(opt.instance));
  const PauliSum h = build_hamiltonian(inst, opt.prefactor);
  const fs::path dir(opt.out_dir);
  fs::create_directories(dir);
  json summary{{"instance", instance_summary(inst)}, {"layers", opt.layers}};

  const long long trotter = trotter_cnot_count(h, opt.layers);
  summary["trotter_cnots"] = trotter;
  std::vector<ImprovementRow> rows;
  if (!opt.circuit.empty()) {
    const Pqc2Circuit c = load_pqc2(opt.circuit, inst.qubit_count());
    double beta = 0.0;
    {
      const std::string text = read_text_file(opt.circuit);
      if (text.find_first_not_of(" \t\r\n") != std::string::npos && text[text.find_first_not_of(" \t\r\n")] == '{') {
        const json j = json::parse(text);
        beta = (j.contains("candidate") ? j.at("candidate") : j).value("beta", 0.0);
      }
    }
    ImprovementRow row{opt.label, inst.majorana_count, beta, trotter, c.cnot_count(), 0.0};
    row.ratio = cnot_improvement(trotter, c.cnot_count());
    rows.push_back(row);
    summary["rl_cnots"] = c.cnot_count();
    summary["improvement"] = row.ratio;
    write_text_file((dir / "improvement.md").string(), improvement_markdown(rows));
    write_text_file((dir / "improvement.csv").string(), improvement_csv(rows));
    out << improvement_markdown(rows);
  } else {
    out << "Trotter CNOTs (" << opt.layers << " layer(s)): " << trotter << '\n';
  }

  // Trotter per-layer counts across qubit numbers, exponential model.
  std::vector<Point> tpoints;
  for (int n = opt.trotter_min_qubits; n <= opt.trotter_max_qubits; ++n) {
    const SykInstance si = SykInstance::generate(2 * n, opt.trotter_seed);
    tpoints.push_back({static_cast<double>(n), static_cast<double>(trotter_cnot_count(build_hamiltonian(si), 1))});
  }
  auto grid = [&](double lo, double hi) {
    std::vector<double> xs;
    for (double x = lo; x <= hi + 1e-9; x += 0.25) xs.push_back(x);
    return xs;
  };
  auto fit_json = [](const FitResult& f, const Band* band) {
    json cov = json::array();
    for (long r = 0; r < f.covariance.rows(); ++r) {
      json row = json::array();
      for (long c = 0; c < f.covariance.cols(); ++c) row.push_back(f.covariance(r, c));
      cov.push_back(row);
    }
    json j{{"model", f.model == FitModel::Cubic ? "cubic" : "exponential"},
           {"params", std::vector<double>(f.params.data(), f.params.data() + f.params.size())},
           {"covariance", cov},
           {"rss", f.rss},
           {"dof", f.dof},
           {"converged", f.converged},
           {"degenerate", f.degenerate}};
    if (band) j["t_critical"] = band->critical;
    return j;
  };
  {
    const FitResult f = fit_exponential(tpoints, opt.trotter_seed);
    const auto xs = grid(opt.trotter_min_qubits, opt.trotter_max_qubits + 2);
    std::optional<Band> band;
    if (f.dof >= 1 && f.covariance.allFinite()) band = ci_delta_method(f, xs, opt.alpha);
    json pts = json::array();
    for (const auto& p : tpoints) pts.push_back({p.x, p.y});
    summary["trotter_scaling"] = fit_json(f, band ? &*band : nullptr);
    summary["trotter_scaling"]["points"] = pts;
    if (band) write_text_file((dir / "trotter_fit.csv").string(), band_csv(*band, tpoints));
  }
  if (!opt.scaling.empty()) {
    std::istringstream in(read_text_file(opt.scaling));
    std::string line;
    std::vector<Point> pts;
    while (std::getline(in, line)) {
      if (line.empty() || line.find_first_of("0123456789") != 0) continue;  // header or blank
      const auto comma = line.find(',');
      if (comma == std::string::npos) throw FormatError(opt.scaling + ": expected 'qubits,cnots' rows");
      pts.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
    }
    const FitResult f = fit_cubic(pts);
    double lo = pts.front().x, hi = pts.front().x;
    for (const auto& p : pts) {
      lo = std::min(lo, p.x);
      hi = std::max(hi, p.x);
    }
    std::optional<Band> band;
    if (f.dof >= 1 && f.covariance.allFinite()) band = ci_delta_method(f, grid(lo, hi + 2), opt.alpha);
    summary["rl_scaling"] = fit_json(f, band ? &*band : nullptr);
    if (band) write_text_file((dir / "rl_fit.csv").string(), band_csv(*band, pts));
  }
  write_text_file((dir / "bench.json").string(), summary.dump(2) + "\n");
  return kOk;
}

// ---------------------------------------------------------------- run-circuit

int cmd_run_circuit(const RunCircuitOptions& opt, std::ostream& out) {
  const SykInstance inst = SykInstance::from_json(read_text_file(opt.instance));
  const int n = inst.qubit_count();
  if (n > kMaxDenseQubits) throw CapacityError("run-circuit: dense simulation limited to 8 qubits");
  if (!(opt.beta > 0.0)) throw ConfigError("run-circuit: beta must be > 0");
  const Entangler ent = entangler_from_string(opt.entangler);
  const std::vector<double> theta = load_theta(opt.pqc1, n, ent);
  Pqc2Circuit c{n, {}};
  if (!opt.pqc2.empty()) c = load_pqc2(opt.pqc2, n);
  if (!opt.coupling.empty()) {
    const CouplingMap map = resolve_coupling(opt.coupling, n);
    c.validate(&map);
  }
  const PauliSum h = build_hamiltonian(inst, opt.prefactor);
  const ExactThermalReference ref = exact_thermal(h, opt.beta);
  const NoiseModel noise = opt.noise ? NoiseModel::eagle_r3_median() : NoiseModel{};
  ThermalObjective obj(h, ref, noise, ent);
  if (opt.shots > 0) obj.set_shots(opt.shots, opt.shot_seed);
  const VqtspEvaluation ev = obj.evaluate(theta, c);
  const json doc{{"beta", ev.beta},
                 {"energy", ev.energy},
                 {"entropy", ev.entropy},
                 {"free_energy", ev.free_energy},
                 {"fidelity", ev.fidelity},
                 {"noise", noise_to_json(noise)},
                 {"cnot_count", c.cnot_count()},
                 {"gate_count", c.gate_count()},
                 {"exact",
                  {{"energy", ref.energy}, {"entropy", ref.entropy}, {"free_energy", *ref.free_energy}}},
                 {"delta_F", std::abs(ev.free_energy - *ref.free_energy)}};
  emit(opt.out, doc.dump(2) + "\n", out);
  return kOk;
}

}  // namespace sykrl::cli
