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
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "sykrl/env.hpp"
#include "sykrl/pauli.hpp"
#include "sykrl/syk.hpp"
#include "sykrl/vqtsp.hpp"

namespace sykrl {

// ---------------------------------------------------------------- candidates

struct CandidateRecord {
  int episode = 0;
  std::uint64_t seed = 0;
  double beta = 0.0;
  std::vector<double> theta;  // PQC1 angles
  Pqc2Circuit circuit;        // PQC2 with angles
  VqtspEvaluation evaluation;
  double delta_f = 0.0;        // |F - F_exact|
  double delta_energy = 0.0;   // |E - E_exact|
  double delta_entropy = 0.0;  // |S - S_exact|
  double fidelity = 0.0;
  int cnot_count = 0;
  int gate_count = 0;
  double terminal_reward = 0.0;

  void validate() const;
  nlohmann::json to_json() const;
  static CandidateRecord from_json(const nlohmann::json& j);
};

CandidateRecord make_candidate(const VqtspSolution& solution, const ExactThermalReference& reference, int episode,
                               std::uint64_t seed, double terminal_reward = 0.0);

std::vector<CandidateRecord> read_candidates_jsonl(const std::string& path);

struct FilterWeights {
  double w_a = 0.0;  // energy error weight
  double w_b = 0.0;  // entropy error weight
};

// Tabulated selection weights per reward mode and Majorana count.
// Throws std::invalid_argument for sizes without a tabulated entry.
FilterWeights default_filter_weights(RewardMode mode, int majorana_count);

double filter_score(const CandidateRecord& c, const FilterWeights& w);
// argmin of the score; ties: fewer CNOTs, then fewer gates, then earlier episode.
const CandidateRecord& filter_best(std::span<const CandidateRecord> candidates, const FilterWeights& w);

// ---------------------------------------------------------------- CNOT accounting

// Per layer, 2 (weight - 1) CNOTs per non-identity term (staircase exponential).
long long trotter_cnot_count(const PauliSum& hamiltonian, int layers = 1);
double cnot_improvement(long long trotter_count, long long rl_count);

struct ImprovementRow {
  std::string label;
  int majorana_count = 0;
  double beta = 0.0;
  long long trotter_cnots = 0;
  long long rl_cnots = 0;
  double ratio = 0.0;
};

std::string improvement_markdown(std::span<const ImprovementRow> rows);
std::string improvement_csv(std::span<const ImprovementRow> rows);

// ---------------------------------------------------------------- fits

enum class FitModel : std::uint8_t { Cubic, Exponential };

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct FitResult {
  FitModel model = FitModel::Cubic;
  // Cubic: (c3, c2, c1, c0) for c3 x^3 + c2 x^2 + c1 x + c0.
  // Exponential: (a, b, c) for a exp(b x) + c.
  Eigen::VectorXd params;
  Eigen::MatrixXd covariance;
  Eigen::VectorXd residuals;
  std::vector<Point> data;
  double rss = 0.0;
  double sigma2 = 0.0;
  int dof = 0;
  int iterations = 0;
  bool converged = true;
  bool degenerate = false;

  double predict(double x) const;
  Eigen::VectorXd gradient(double x) const;  // d prediction / d params
};

FitResult fit_cubic(std::span<const Point> points);
FitResult fit_exponential(std::span<const Point> points, std::uint64_t seed = 0, int max_iterations = 500);

double regularized_incomplete_beta(double a, double b, double x);
double student_t_cdf(double t, double dof);
// Bisection on the CDF to an absolute tolerance of 1e-10 in t.
double student_t_quantile(double p, double dof);

struct Band {
  std::vector<double> x, fit, lower, upper;
  double critical = 0.0;
};

Band ci_delta_method(const FitResult& fit, std::span<const double> xs, double alpha = 0.05);

// Columns x, y, fit, lower, upper; y is left empty where no observation exists.
std::string band_csv(const Band& band, std::span<const Point> observed = {});

}  // namespace sykrl
