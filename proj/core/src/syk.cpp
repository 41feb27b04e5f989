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

#include "sykrl/syk.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "sykrl/errors.hpp"
#include "sykrl/rng.hpp"

namespace sykrl {

namespace {

void check_majorana_count(int n) {
  if (n < 4 || n % 2 != 0) {
    throw std::invalid_argument("SYK: Majorana count must be even and >= 4, got " + std::to_string(n));
  }
  if (n / 2 > 64) throw CapacityError("SYK: Majorana count exceeds 128");
}

std::string format_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

double coupling_variance(int majorana_count) {
  const double n = majorana_count;
  return 6.0 / (n * n * n);
}

CouplingMap4 sample_couplings(int majorana_count, std::uint64_t seed) {
  check_majorana_count(majorana_count);
  const double sigma = std::sqrt(coupling_variance(majorana_count));
  SplitMix64 rng(seed);
  CouplingMap4 out;
  const int n = majorana_count;
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b)
      for (int c = b + 1; c <= n; ++c)
        for (int d = c + 1; d <= n; ++d) out.emplace(Quartet{a, b, c, d}, sigma * rng.normal());
  return out;
}

SykInstance SykInstance::generate(int majorana_count, std::uint64_t seed) {
  return SykInstance{majorana_count, seed, sample_couplings(majorana_count, seed)};
}

std::string SykInstance::to_json() const {
  std::ostringstream os;
  os << "{\"N\": " << majorana_count << ", \"seed\": " << seed << ", \"couplings\": [";
  bool first = true;
  for (const auto& [q, j] : couplings) {
    os << (first ? "\n  " : ",\n  ") << '[' << q[0] << ", " << q[1] << ", " << q[2] << ", " << q[3] << ", "
       << format_g17(j) << ']';
    first = false;
  }
  os << "\n]}\n";
  return os.str();
}

SykInstance SykInstance::from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("SYK instance: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("N") || !doc.contains("seed") || !doc.contains("couplings")) {
    throw FormatError("SYK instance: expected keys N, seed, couplings");
  }
  SykInstance inst;
  inst.majorana_count = doc.at("N").get<int>();
  inst.seed = doc.at("seed").get<std::uint64_t>();
  check_majorana_count(inst.majorana_count);
  for (const auto& row : doc.at("couplings")) {
    if (!row.is_array() || row.size() != 5) throw FormatError("SYK instance: coupling rows are [i1,i2,i3,i4,J]");
    Quartet q{row[0].get<int>(), row[1].get<int>(), row[2].get<int>(), row[3].get<int>()};
    if (!(1 <= q[0] && q[0] < q[1] && q[1] < q[2] && q[2] < q[3] && q[3] <= inst.majorana_count)) {
      throw FormatError("SYK instance: quartet indices must satisfy 1 <= i1 < i2 < i3 < i4 <= N");
    }
    if (!inst.couplings.emplace(q, row[4].get<double>()).second) {
      throw FormatError("SYK instance: duplicate quartet");
    }
  }
  return inst;
}

PauliString majorana_to_pauli(int index, int num_qubits) {
  if (num_qubits < 1 || index < 1 || index > 2 * num_qubits) {
    throw std::invalid_argument("majorana_to_pauli: index out of range");
  }
  const int k = (index - 1) / 2;  // 0-based qubit
  PauliString p(num_qubits, 1.0 / std::sqrt(2.0));
  for (int j = 0; j < k; ++j) p.set_letter(j, PauliLetter::Z);
  p.set_letter(k, index % 2 == 1 ? PauliLetter::X : PauliLetter::Y);
  return p;
}

PauliSum build_hamiltonian(const SykInstance& instance, double prefactor) {
  check_majorana_count(instance.majorana_count);
  const int n = instance.qubit_count();
  std::vector<PauliString> chi;
  chi.reserve(static_cast<std::size_t>(instance.majorana_count));
  for (int i = 1; i <= instance.majorana_count; ++i) chi.push_back(majorana_to_pauli(i, n));

  PauliSum h(n);
  for (const auto& [q, j] : instance.couplings) {
    PauliString term = chi[q[0] - 1] * chi[q[1] - 1] * chi[q[2] - 1] * chi[q[3] - 1];
    h.add(term.scaled(-prefactor * j));  // i^{q/2} = -1 for q = 4
  }
  h.canonicalize();
  return h;
}

int ExactThermalReference::num_qubits() const {
  int n = 0;
  while ((Eigen::Index{1} << n) < rho.rows()) ++n;
  return n;
}

ExactThermalReference exact_thermal(const PauliSum& hamiltonian, double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::invalid_argument("exact_thermal: beta must be >= 0");
  const int n = hamiltonian.num_qubits();
  if (n > kMaxDenseQubits) {
    throw CapacityError("exact_thermal: " + std::to_string(n) + " qubits exceeds dense limit of " +
                        std::to_string(kMaxDenseQubits));
  }
  const Eigen::MatrixXcd h = hamiltonian.to_dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
  if (eig.info() != Eigen::Success) throw std::runtime_error("exact_thermal: eigensolver failed");

  ExactThermalReference ref;
  ref.beta = beta;
  ref.spectrum = eig.eigenvalues();
  ref.eigenvectors = eig.eigenvectors();

  const double e0 = ref.spectrum.minCoeff();
  Eigen::VectorXd w = (-beta * (ref.spectrum.array() - e0)).exp();
  const double z_shifted = w.sum();
  w /= z_shifted;
  ref.weights = w;
  ref.log_partition = std::log(z_shifted) - beta * e0;
  ref.energy = w.dot(ref.spectrum);
  double s = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w[i] > 0.0) s -= w[i] * std::log(w[i]);
  }
  ref.entropy = s;
  if (beta > 0.0) ref.free_energy = -ref.log_partition / beta;
  ref.rho = ref.eigenvectors * w.cast<cdouble>().asDiagonal() * ref.eigenvectors.adjoint();
  return ref;
}

}  // namespace sykrl
