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
#include <csignal>
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "sykrl/errors.hpp"

namespace {

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop.store(true); }

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace sykrl::cli;

  CLI::App app{"sykrl: reinforcement-learned thermal state circuits for the SYK model"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "sykrl 0.1.0");

  GenerateOptions gen;
  auto* g = app.add_subcommand("generate", "Draw a seeded SYK coupling set and write it as JSON");
  g->add_option("-N,--majoranas", gen.majorana_count, "Number of Majorana fermions (even, >= 4)")->required();
  g->add_option("-s,--seed", gen.seed, "Coupling seed");
  g->add_option("-o,--out", gen.out, "Output file (stdout when omitted)");

  ExactOptions ex;
  auto* e = app.add_subcommand("exact", "Exact thermal energy, entropy and free energy per beta");
  e->add_option("-i,--instance", ex.instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  e->add_option("-b,--beta", ex.betas, "Inverse temperatures (repeatable)")->capture_default_str();
  e->add_option("--prefactor", ex.prefactor, "Overall Hamiltonian scale")->capture_default_str();
  e->add_option("-o,--out", ex.out, "Output file (stdout when omitted)");

  TrainOptions tr;
  tr.threads = std::max(1, std::atoi(env_or("SYKRL_THREADS", "1").c_str()));
  tr.output_dir = env_or("SYKRL_OUTPUT_DIR", "");
  auto* t = app.add_subcommand("train", "Train the agent for every (beta, seed) pair of a run config");
  t->add_option("-c,--config", tr.config, "Run configuration JSON")->required()->check(CLI::ExistingFile);
  t->add_option("-o,--output-dir", tr.output_dir, "Run directory (overrides config and SYKRL_OUTPUT_DIR)");
  t->add_flag("--resume", tr.resume, "Continue from existing checkpoints");
  t->add_option("-j,--threads", tr.threads, "Parallel runs (default SYKRL_THREADS or 1)")->check(CLI::PositiveNumber);
  t->add_flag("-q,--quiet", tr.quiet, "Suppress per-episode progress");

  FilterOptions fi;
  double w_a = 0, w_b = 0;
  auto* f = app.add_subcommand("filter", "Select the best candidate circuit of a run directory");
  f->add_option("-r,--run", fi.run_dir, "Run directory (searched recursively)")->required();
  auto* wa = f->add_option("--w-a", w_a, "Energy-error weight");
  auto* wb = f->add_option("--w-b", w_b, "Entropy-error weight");
  f->add_option("-o,--out", fi.out, "Report path (default <run>/best.json)");

  BenchOptions be;
  auto* b = app.add_subcommand("bench", "CNOT improvement against first-order Trotterization and scaling fits");
  b->add_option("-i,--instance", be.instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  b->add_option("-c,--circuit", be.circuit, "Filter report, candidate JSON, or PQC2 text");
  b->add_option("--label", be.label, "Row label");
  b->add_option("-l,--layers", be.layers, "Trotter layers")->capture_default_str();
  b->add_option("--prefactor", be.prefactor, "Overall Hamiltonian scale")->capture_default_str();
  b->add_option("-o,--out-dir", be.out_dir, "Output directory")->capture_default_str();
  b->add_option("--scaling", be.scaling, "CSV of RL CNOT counts per qubit number for the cubic fit");
  b->add_option("--trotter-seed", be.trotter_seed, "Seed of the instances used for the Trotter scaling fit");
  b->add_option("--trotter-min", be.trotter_min_qubits, "Smallest qubit number in the Trotter fit")->capture_default_str();
  b->add_option("--trotter-max", be.trotter_max_qubits, "Largest qubit number in the Trotter fit")->capture_default_str();
  b->add_option("--alpha", be.alpha, "Confidence band level")->capture_default_str();

  RunCircuitOptions rc;
  auto* r = app.add_subcommand("run-circuit", "Evaluate a PQC1/PQC2 pair against the exact thermal state");
  r->add_option("-i,--instance", rc.instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  r->add_option("--pqc1", rc.pqc1, "PQC1 gate text or JSON angle array")->required()->check(CLI::ExistingFile);
  r->add_option("--pqc2", rc.pqc2, "PQC2 gate text, candidate or report JSON");
  r->add_option("-b,--beta", rc.beta, "Inverse temperature")->capture_default_str();
  r->add_option("--prefactor", rc.prefactor, "Overall Hamiltonian scale")->capture_default_str();
  r->add_flag("--noise", rc.noise, "Apply the default device noise model");
  r->add_option("--coupling", rc.coupling, "Coupling map to validate PQC2 against");
  r->add_option("--entangler", rc.entangler, "PQC1 entangler: ring | all_to_all")->capture_default_str();
  r->add_option("--shots", rc.shots, "Sample PQC1 with this many shots (exact when 0)");
  r->add_option("--shot-seed", rc.shot_seed, "Shot sampling seed");
  r->add_option("-o,--out", rc.out, "Output file (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*g) return cmd_generate(gen, std::cout);
    if (*e) return cmd_exact(ex, std::cout);
    if (*t) {
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      return cmd_train(tr, std::cerr, &g_stop);
    }
    if (*f) {
      if (*wa) fi.w_a = w_a;
      if (*wb) fi.w_b = w_b;
      return cmd_filter(fi, std::cout);
    }
    if (*b) return cmd_bench(be, std::cout);
    if (*r) return cmd_run_circuit(rc, std::cout);
  } catch (const sykrl::CapacityError& err) {
    std::cerr << "capacity error: " << err.what() << '\n';
    return kCapacity;
  } catch (const sykrl::FormatError& err) {
    std::cerr << "format error: " << err.what() << '\n';
    return kValidation;
  } catch (const std::invalid_argument& err) {
    std::cerr << "validation error: " << err.what() << '\n';
    return kValidation;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
