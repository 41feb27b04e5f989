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

#include "sykrl/vqtsp.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "sykrl/errors.hpp"
#include "sykrl/rng.hpp"

namespace sykrl {

// ------------------------------------------------------------------ PQC1

Pqc1Config Pqc1Config::zeros(int num_qubits, Entangler e) {
  return Pqc1Config{num_qubits, std::vector<double>(static_cast<std::size_t>(3 * num_qubits), 0.0), e};
}

void Pqc1Config::validate() const {
  if (num_qubits < 1) throw std::invalid_argument("Pqc1Config: qubit count must be positive");
  if (theta.size() != static_cast<std::size_t>(3 * num_qubits)) {
    throw std::invalid_argument("Pqc1Config: expected 3n parameters");
  }
}

namespace {

std::vector<std::pair<int, int>> entangler_pairs(int n, Entangler e) {
  std::vector<std::pair<int, int>> pairs;
  if (e == Entangler::Ring) {
    for (int i = 0; i < n; ++i) {
      const int t = (i + 1) % n;
      if (t != i) pairs.emplace_back(i, t);
    }
  } else {
    for (int c = 0; c < n; ++c)
      for (int t = c + 1; t < n; ++t) pairs.emplace_back(c, t);
  }
  return pairs;
}

}  // namespace

std::vector<GateOp> Pqc1Config::gates() const {
  validate();
  std::vector<GateOp> g;
  g.reserve(static_cast<std::size_t>(4 * num_qubits));
  for (int q = 0; q < num_qubits; ++q) {
    const auto k = static_cast<std::size_t>(3 * q);
    g.push_back(GateOp::rz(q, theta[k]));
    g.push_back(GateOp::ry(q, theta[k + 1]));
    g.push_back(GateOp::rz(q, theta[k + 2]));
  }
  for (const auto& [c, t] : entangler_pairs(num_qubits, entangler)) g.push_back(GateOp::cnot(c, t));
  return g;
}

Pqc1Config Pqc1Config::from_gates(int num_qubits, const std::vector<GateOp>& gates) {
  for (Entangler e : {Entangler::Ring, Entangler::AllToAll}) {
    const auto pairs = entangler_pairs(num_qubits, e);
    if (gates.size() != static_cast<std::size_t>(3 * num_qubits) + pairs.size()) continue;
    Pqc1Config cfg = zeros(num_qubits, e);
    bool ok = true;
    for (int q = 0; q < num_qubits && ok; ++q) {
      const auto k = static_cast<std::size_t>(3 * q);
      const GateKind expect[3] = {GateKind::RZ, GateKind::RY, GateKind::RZ};
      for (std::size_t j = 0; j < 3; ++j) {
        if (gates[k + j].kind != expect[j] || gates[k + j].qubit != q) ok = false;
        cfg.theta[k + j] = gates[k + j].angle;
      }
    }
    for (std::size_t i = 0; i < pairs.size() && ok; ++i) {
      const GateOp& g = gates[static_cast<std::size_t>(3 * num_qubits) + i];
      if (g.kind != GateKind::CNOT || g.qubit != pairs[i].first || g.target != pairs[i].second) ok = false;
    }
    if (ok) return cfg;
  }
  throw FormatError("PQC1: gate list does not match the RZ-RY-RZ + entangler layout");
}

// ------------------------------------------------------------------ PQC2

std::size_t Pqc2Circuit::parameter_count() const {
  std::size_t k = 0;
  for (const auto& g : gates) k += g.is_rotation() ? 1 : 0;
  return k;
}

std::vector<double> Pqc2Circuit::parameters() const {
  std::vector<double> phi;
  phi.reserve(gates.size());
  for (const auto& g : gates)
    if (g.is_rotation()) phi.push_back(g.angle);
  return phi;
}

void Pqc2Circuit::set_parameters(std::span<const double> phi) {
  if (phi.size() != parameter_count()) throw std::invalid_argument("Pqc2Circuit: parameter count mismatch");
  std::size_t k = 0;
  for (auto& g : gates)
    if (g.is_rotation()) g.angle = phi[k++];
}

int Pqc2Circuit::cnot_count() const {
  int k = 0;
  for (const auto& g : gates) k += g.kind == GateKind::CNOT ? 1 : 0;
  return k;
}

void Pqc2Circuit::validate(const CouplingMap* coupling) const {
  for (const auto& g : gates) {
    g.validate(num_qubits);
    if (coupling && g.kind == GateKind::CNOT && !coupling->allows(g.qubit, g.target)) {
      throw std::invalid_argument("Pqc2Circuit: CNOT(" + std::to_string(g.qubit) + "," + std::to_string(g.target) +
                                  ") not allowed by coupling map " + coupling->name());
    }
  }
}

std::string circuit_to_text(int num_qubits, const std::vector<GateOp>& gates) {
  std::ostringstream os;
  os << "# qubits " << num_qubits << '\n';
  char buf[64];
  for (const auto& g : gates) {
    if (g.kind == GateKind::CNOT) {
      os << "CNOT " << g.qubit << ' ' << g.target << '\n';
    } else {
      std::snprintf(buf, sizeof(buf), "%.17g", g.angle);
      os << to_string(g.kind) << ' ' << g.qubit << ' ' << buf << '\n';
    }
  }
  return os.str();
}

std::vector<GateOp> circuit_from_text(const std::string& text, int* num_qubits) {
  std::istringstream in(text);
  std::string line;
  std::vector<GateOp> gates;
  int width = -1;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    if (word[0] == '#') {
      std::string key;
      if (word == "#" && (ls >> key) && key == "qubits") ls >> width;
      continue;
    }
    GateOp g;
    if (word == "RX") g.kind = GateKind::RX;
    else if (word == "RY") g.kind = GateKind::RY;
    else if (word == "RZ") g.kind = GateKind::RZ;
    else if (word == "CNOT") g.kind = GateKind::CNOT;
    else throw FormatError("circuit line " + std::to_string(line_no) + ": unknown gate '" + word + "'");
    bool ok = false;
    if (g.kind == GateKind::CNOT) {
      ok = static_cast<bool>(ls >> g.qubit >> g.target);
    } else {
      std::string angle;
      ok = static_cast<bool>(ls >> g.qubit >> angle);
      if (ok) {
        char* end = nullptr;
        g.angle = std::strtod(angle.c_str(), &end);
        ok = end && *end == '\0';
      }
    }
    std::string extra;
    if (!ok || (ls >> extra)) throw FormatError("circuit line " + std::to_string(line_no) + ": malformed gate");
    if (g.qubit < 0 || (g.kind == GateKind::CNOT && (g.target < 0 || g.target == g.qubit))) {
      throw FormatError("circuit line " + std::to_string(line_no) + ": invalid qubit index");
    }
    gates.push_back(g);
  }
  if (num_qubits) *num_qubits = width;
  return gates;
}

// ----------------------------------------------------------- evaluation

double shannon_entropy(std::span<const double> p) {
  double s = 0.0;
  for (double v : p)
    if (v > 0.0) s -= v * std::log(v);
  return s;
}

ThermalObjective::ThermalObjective(const PauliSum& hamiltonian, const ExactThermalReference& reference,
                                   NoiseModel noise, Entangler entangler)
    : n_(hamiltonian.num_qubits()),
      beta_(reference.beta),
      h_dense_(hamiltonian.to_dense()),
      reference_(&reference),
      target_(reference.eigenvectors, reference.weights),
      noise_(noise),
      entangler_(entangler) {
  noise_.validate();
  if (reference.rho.rows() != h_dense_.rows()) throw std::invalid_argument("ThermalObjective: reference dimension mismatch");
}

void ThermalObjective::set_shots(int shots, std::uint64_t seed) {
  if (shots < 0) throw std::invalid_argument("ThermalObjective: shots must be >= 0");
  shots_ = shots;
  shot_seed_ = seed;
}

EntropyResult ThermalObjective::pqc1_entropy(std::span<const double> theta) const {
  EntropyResult r = entropy_of_pqc1(theta, n_, noise_, entangler_);
  if (shots_ > 0) {
    SplitMix64 rng(shot_seed_);
    r.probabilities = sample_frequencies(r.probabilities, shots_, rng);
    r.entropy = shannon_entropy(r.probabilities);
  }
  return r;
}

DensityMatrix ThermalObjective::prepare(std::span<const double> probabilities, const Pqc2Circuit& circuit) const {
  DensityMatrix rho = DensityMatrix::from_diagonal(probabilities);
  for (const auto& g : circuit.gates) apply_noisy(rho, g, noise_);
  return rho;
}

double ThermalObjective::free_energy(std::span<const double> theta, const Pqc2Circuit& circuit) const {
  const EntropyResult e = pqc1_entropy(theta);
  const DensityMatrix rho = prepare(e.probabilities, circuit);
  return expectation(rho, h_dense_) - e.entropy / beta_;
}

VqtspEvaluation ThermalObjective::evaluate(std::span<const double> theta, const Pqc2Circuit& circuit) const {
  const EntropyResult e = pqc1_entropy(theta);
  const DensityMatrix rho = prepare(e.probabilities, circuit);
  VqtspEvaluation out;
  out.beta = beta_;
  out.energy = expectation(rho, h_dense_);
  out.entropy = e.entropy;
  out.free_energy = out.energy - out.entropy / beta_;
  out.fidelity = target_.fidelity(rho);
  return out;
}

EntropyResult entropy_of_pqc1(std::span<const double> theta, int num_qubits, const NoiseModel& noise,
                              Entangler entangler) {
  Pqc1Config cfg{num_qubits, std::vector<double>(theta.begin(), theta.end()), entangler};
  const auto gates = cfg.gates();
  EntropyResult r;
  if (noise.active()) {
    DensityMatrix rho(num_qubits);
    for (const auto& g : gates) apply_noisy(rho, g, noise);
    r.probabilities = probabilities(rho);
  } else {
    StateVector psi(num_qubits);
    for (const auto& g : gates) psi.apply(g);
    r.probabilities = probabilities(psi);
  }
  r.entropy = shannon_entropy(r.probabilities);
  return r;
}

VqtspEvaluation evaluate(std::span<const double> theta, const Pqc2Circuit& circuit, double beta,
                         const PauliSum& hamiltonian, const ExactThermalReference& reference,
                         const NoiseModel& noise) {
  if (!(beta > 0.0)) throw std::invalid_argument("evaluate: beta must be > 0");
  if (std::abs(reference.beta - beta) > 1e-12 * std::max(1.0, beta)) {
    throw std::invalid_argument("evaluate: reference computed at a different beta");
  }
  return ThermalObjective(hamiltonian, reference, noise).evaluate(theta, circuit);
}

VqtspSolution minimize_free_energy(const Pqc2Circuit& circuit, const ThermalObjective& objective,
                                   const OptimizerConfig& config, const std::optional<WarmStart>& warm) {
  config.validate();
  if (!(objective.beta() > 0.0)) throw std::invalid_argument("minimize_free_energy: beta must be > 0");
  const std::size_t n_theta = static_cast<std::size_t>(3 * objective.num_qubits());
  const std::size_t n_phi = circuit.parameter_count();

  std::vector<double> x0;
  x0.reserve(n_theta + n_phi);
  if (warm) {
    if (warm->theta.size() != n_theta || warm->phi.size() != n_phi) {
      throw std::invalid_argument("minimize_free_energy: warm start has wrong parameter count");
    }
    x0.insert(x0.end(), warm->theta.begin(), warm->theta.end());
    x0.insert(x0.end(), warm->phi.begin(), warm->phi.end());
  } else {
    SplitMix64 rng(config.seed);
    for (std::size_t i = 0; i < n_theta; ++i) x0.push_back(rng.uniform(0.0, 2.0 * std::numbers::pi));
    const auto phi = circuit.parameters();
    x0.insert(x0.end(), phi.begin(), phi.end());
  }

  Pqc2Circuit work = circuit;
  const Objective f = [&](std::span<const double> x) {
    work.set_parameters(x.subspan(n_theta));
    return objective.free_energy(x.first(n_theta), work);
  };
  const OptimizeResult r = nelder_mead(f, std::move(x0), config);

  VqtspSolution sol;
  sol.theta.assign(r.x.begin(), r.x.begin() + static_cast<std::ptrdiff_t>(n_theta));
  sol.circuit = circuit;
  sol.circuit.set_parameters(std::span<const double>(r.x).subspan(n_theta));
  sol.evaluation = objective.evaluate(sol.theta, sol.circuit);
  sol.evaluations = r.evaluations;
  return sol;
}

}  // namespace sykrl
