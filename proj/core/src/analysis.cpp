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

#include "sykrl/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "sykrl/errors.hpp"
#include "sykrl/rng.hpp"

namespace sykrl {
namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------- candidates

void CandidateRecord::validate() const {
  if (delta_f < 0 || delta_energy < 0 || delta_entropy < 0) throw std::invalid_argument("candidate: negative error");
  if (cnot_count != circuit.cnot_count() || gate_count != circuit.gate_count()) {
    throw std::invalid_argument("candidate: gate counts disagree with the circuit");
  }
  if (theta.size() != static_cast<std::size_t>(3 * circuit.num_qubits)) {
    throw std::invalid_argument("candidate: theta length does not match the qubit count");
  }
}

nlohmann::json CandidateRecord::to_json() const {
  return {{"episode", episode},
          {"seed", seed},
          {"beta", beta},
          {"num_qubits", circuit.num_qubits},
          {"theta", theta},
          {"circuit", circuit_to_text(circuit.num_qubits, circuit.gates)},
          {"F", evaluation.free_energy},
          {"E", evaluation.energy},
          {"S", evaluation.entropy},
          {"fidelity", fidelity},
          {"delta_F", delta_f},
          {"delta_E", delta_energy},
          {"delta_S", delta_entropy},
          {"cnot_count", cnot_count},
          {"gate_count", gate_count},
          {"terminal_reward", terminal_reward}};
}

CandidateRecord CandidateRecord::from_json(const nlohmann::json& j) {
  CandidateRecord c;
  try {
    c.episode = j.at("episode").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.beta = j.at("beta").get<double>();
    c.theta = j.at("theta").get<std::vector<double>>();
    int n = j.at("num_qubits").get<int>();
    c.circuit.gates = circuit_from_text(j.at("circuit").get<std::string>(), &n);
    c.circuit.num_qubits = n;
    c.evaluation = {j.at("E").get<double>(), j.at("S").get<double>(), j.at("F").get<double>(),
                    j.at("fidelity").get<double>(), c.beta};
    c.fidelity = c.evaluation.fidelity;
    c.delta_f = j.at("delta_F").get<double>();
    c.delta_energy = j.at("delta_E").get<double>();
    c.delta_entropy = j.at("delta_S").get<double>();
    c.cnot_count = j.at("cnot_count").get<int>();
    c.gate_count = j.at("gate_count").get<int>();
    c.terminal_reward = j.value("terminal_reward", 0.0);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("candidate record: ") + e.what());
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  return c;
}

CandidateRecord make_candidate(const VqtspSolution& solution, const ExactThermalReference& reference, int episode,
                               std::uint64_t seed, double terminal_reward) {
  if (!reference.free_energy) throw std::invalid_argument("make_candidate: reference needs beta > 0");
  CandidateRecord c;
  c.episode = episode;
  c.seed = seed;
  c.beta = reference.beta;
  c.theta = solution.theta;
  c.circuit = solution.circuit;
  c.evaluation = solution.evaluation;
  c.delta_f = std::abs(solution.evaluation.free_energy - *reference.free_energy);
  c.delta_energy = std::abs(solution.evaluation.energy - reference.energy);
  c.delta_entropy = std::abs(solution.evaluation.entropy - reference.entropy);
  c.fidelity = solution.evaluation.fidelity;
  c.cnot_count = solution.circuit.cnot_count();
  c.gate_count = solution.circuit.gate_count();
  c.terminal_reward = terminal_reward;
  return c;
}

std::vector<CandidateRecord> read_candidates_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open candidate store '" + path + "'");
  std::vector<CandidateRecord> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    out.push_back(CandidateRecord::from_json(j));
  }
  return out;
}

FilterWeights default_filter_weights(RewardMode mode, int majorana_count) {
  const bool fid = mode == RewardMode::FreeEnergyFidelity;
  switch (majorana_count) {
    case 8: return {fid ? 0.8 : 0.5, 0.0};
    case 10: return {1.02, 0.0};
    case 12: return {fid ? 1.16 : 2.0, 0.0};
    case 14: return {0.0, 2.0};
    default:
      throw std::invalid_argument("no tabulated filter weights for N = " + std::to_string(majorana_count));
  }
}

double filter_score(const CandidateRecord& c, const FilterWeights& w) {
  return c.delta_f + w.w_a * c.delta_energy + w.w_b * c.delta_entropy;
}

const CandidateRecord& filter_best(std::span<const CandidateRecord> candidates, const FilterWeights& w) {
  if (candidates.empty()) throw std::invalid_argument("filter_best: empty candidate set");
  const CandidateRecord* best = &candidates[0];
  double best_score = filter_score(*best, w);
  for (const auto& c : candidates.subspan(1)) {
    const double s = filter_score(c, w);
    const bool better = s < best_score ||
                        (s == best_score && std::tie(c.cnot_count, c.gate_count, c.episode) <
                                                std::tie(best->cnot_count, best->gate_count, best->episode));
    if (better) {
      best = &c;
      best_score = s;
    }
  }
  return *best;
}

// ---------------------------------------------------------------- CNOT accounting

long long trotter_cnot_count(const PauliSum& hamiltonian, int layers) {
  if (layers < 1) throw std::invalid_argument("trotter_cnot_count: layers must be >= 1");
  long long per_layer = 0;
  for (const auto& t : hamiltonian.terms()) {
    const int w = t.weight();
    if (w > 0) per_layer += 2LL * (w - 1);
  }
  return per_layer * layers;
}

double cnot_improvement(long long trotter_count, long long rl_count) {
  if (rl_count < 1) throw std::invalid_argument("cnot_improvement: RL circuit must contain at least one CNOT");
  if (trotter_count < 0) throw std::invalid_argument("cnot_improvement: negative Trotter count");
  return static_cast<double>(trotter_count) / static_cast<double>(rl_count);
}

std::string improvement_markdown(std::span<const ImprovementRow> rows) {
  std::ostringstream os;
  os << "| label | N | beta | Trotter CNOTs | RL CNOTs | improvement |\n";
  os << "|---|---:|---:|---:|---:|---:|\n";
  char ratio[32], beta[32];
  for (const auto& r : rows) {
    std::snprintf(ratio, sizeof ratio, "%.4f", r.ratio);
    std::snprintf(beta, sizeof beta, "%g", r.beta);
    os << "| " << r.label << " | " << r.majorana_count << " | " << beta << " | " << r.trotter_cnots << " | "
       << r.rl_cnots << " | " << ratio << " |\n";
  }
  return os.str();
}

std::string improvement_csv(std::span<const ImprovementRow> rows) {
  std::ostringstream os;
  os << "label,N,beta,trotter_cnots,rl_cnots,improvement\n";
  for (const auto& r : rows) {
    os << r.label << ',' << r.majorana_count << ',' << g17(r.beta) << ',' << r.trotter_cnots << ',' << r.rl_cnots
       << ',' << g17(r.ratio) << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------- fits

double FitResult::predict(double x) const {
  if (model == FitModel::Cubic) return ((params[0] * x + params[1]) * x + params[2]) * x + params[3];
  return params[0] * std::exp(params[1] * x) + params[2];
}

Eigen::VectorXd FitResult::gradient(double x) const {
  Eigen::VectorXd g(params.size());
  if (model == FitModel::Cubic) {
    g << x * x * x, x * x, x, 1.0;
  } else {
    const double e = std::exp(params[1] * x);
    g << e, params[0] * x * e, 1.0;
  }
  return g;
}

namespace {

void finish_statistics(FitResult& r, const Eigen::MatrixXd& jacobian) {
  const int n = static_cast<int>(r.data.size());
  const int p = static_cast<int>(r.params.size());
  r.residuals.resize(n);
  for (int i = 0; i < n; ++i) r.residuals[i] = r.data[i].y - r.predict(r.data[i].x);
  r.rss = r.residuals.squaredNorm();
  r.dof = n - p;
  const Eigen::MatrixXd jtj = jacobian.transpose() * jacobian;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(jacobian);
  if (qr.rank() < p) r.degenerate = true;
  if (r.dof <= 0) {
    r.sigma2 = std::numeric_limits<double>::quiet_NaN();
    r.covariance = Eigen::MatrixXd::Constant(p, p, std::numeric_limits<double>::quiet_NaN());
    return;
  }
  r.sigma2 = r.rss / r.dof;
  if (r.degenerate) {
    r.covariance = Eigen::MatrixXd::Constant(p, p, std::numeric_limits<double>::quiet_NaN());
    return;
  }
  Eigen::MatrixXd inv = jtj.ldlt().solve(Eigen::MatrixXd::Identity(p, p));
  r.covariance = r.sigma2 * 0.5 * (inv + inv.transpose());
}

void require_points(std::span<const Point> points, std::size_t p, const char* who) {
  if (points.size() < p) {
    throw std::invalid_argument(std::string(who) + ": need at least " + std::to_string(p) + " points, got " +
                                std::to_string(points.size()));
  }
  for (const auto& pt : points)
    if (!std::isfinite(pt.x) || !std::isfinite(pt.y)) throw std::invalid_argument(std::string(who) + ": non-finite data");
}

Eigen::MatrixXd exp_jacobian(std::span<const Point> pts, const Eigen::Vector3d& q) {
  Eigen::MatrixXd j(static_cast<long>(pts.size()), 3);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double e = std::exp(q[1] * pts[i].x);
    j.row(static_cast<long>(i)) << e, q[0] * pts[i].x * e, 1.0;
  }
  return j;
}

double exp_sse(std::span<const Point> pts, const Eigen::Vector3d& q) {
  double s = 0.0;
  for (const auto& p : pts) {
    const double r = p.y - (q[0] * std::exp(q[1] * p.x) + q[2]);
    s += r * r;
  }
  return std::isfinite(s) ? s : std::numeric_limits<double>::infinity();
}

struct LmOutcome {
  Eigen::Vector3d q;
  double sse;
  int iterations;
  bool converged;
};

LmOutcome levenberg_marquardt(std::span<const Point> pts, Eigen::Vector3d q, int max_iterations, double y_scale) {
  double sse = exp_sse(pts, q);
  double lambda = 1e-3;
  const double sse_floor = 1e-30 * y_scale * y_scale * static_cast<double>(pts.size());
  for (int it = 1; it <= max_iterations; ++it) {
    if (sse <= sse_floor) return {q, sse, it - 1, true};
    const Eigen::MatrixXd j = exp_jacobian(pts, q);
    Eigen::VectorXd r(static_cast<long>(pts.size()));
    for (std::size_t i = 0; i < pts.size(); ++i)
      r[static_cast<long>(i)] = pts[i].y - (q[0] * std::exp(q[1] * pts[i].x) + q[2]);
    const Eigen::Matrix3d jtj = j.transpose() * j;
    const Eigen::Vector3d jtr = j.transpose() * r;
    bool accepted = false;
    while (lambda < 1e16) {
      Eigen::Matrix3d a = jtj;
      for (int k = 0; k < 3; ++k) a(k, k) += lambda * std::max(jtj(k, k), 1e-300);
      const Eigen::Vector3d step = a.ldlt().solve(jtr);
      const Eigen::Vector3d trial = q + step;
      const double trial_sse = exp_sse(pts, trial);
      if (step.allFinite() && trial_sse < sse) {
        const bool tiny = step.norm() <= 1e-14 * (q.norm() + 1e-14);
        const bool flat = sse - trial_sse <= 1e-15 * sse;
        q = trial;
        sse = trial_sse;
        lambda = std::max(lambda / 10.0, 1e-15);
        accepted = true;
        if (tiny || flat) return {q, sse, it, true};
        break;
      }
      lambda *= 10.0;
    }
    if (!accepted) return {q, sse, it, true};  // no descent direction left: stationary
  }
  return {q, sse, max_iterations, false};
}

}  // namespace

FitResult fit_cubic(std::span<const Point> points) {
  require_points(points, 4, "fit_cubic");
  const auto n = static_cast<long>(points.size());
  Eigen::MatrixXd x(n, 4);
  Eigen::VectorXd y(n);
  for (long i = 0; i < n; ++i) {
    const double v = points[static_cast<std::size_t>(i)].x;
    x.row(i) << v * v * v, v * v, v, 1.0;
    y[i] = points[static_cast<std::size_t>(i)].y;
  }
  FitResult r;
  r.model = FitModel::Cubic;
  r.data.assign(points.begin(), points.end());
  r.params = x.colPivHouseholderQr().solve(y);
  finish_statistics(r, x);
  return r;
}

FitResult fit_exponential(std::span<const Point> points, std::uint64_t seed, int max_iterations) {
  require_points(points, 3, "fit_exponential");
  if (max_iterations < 1) throw std::invalid_argument("fit_exponential: max_iterations must be >= 1");
  FitResult r;
  r.model = FitModel::Exponential;
  r.data.assign(points.begin(), points.end());

  double ymin = points[0].y, ymax = points[0].y, ymean = 0.0;
  double xmin = points[0].x, xmax = points[0].x;
  for (const auto& p : points) {
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymean += p.y;
  }
  ymean /= static_cast<double>(points.size());
  const double y_scale = std::max({std::abs(ymin), std::abs(ymax), 1.0});
  if (ymax - ymin <= 1e-12 * y_scale || xmax - xmin <= 0.0) {
    r.params = Eigen::Vector3d(0.0, 0.0, ymean);
    r.degenerate = true;
    finish_statistics(r, exp_jacobian(points, r.params));
    r.degenerate = true;
    return r;
  }

  // Starting rates spread over the scale of the abscissa, plus seeded jitter.
  const double span = xmax - xmin;
  std::vector<double> starts;
  for (double s : {0.1, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    starts.push_back(s / span);
    starts.push_back(-s / span);
  }
  SplitMix64 rng(seed);
  for (int k = 0; k < 8; ++k) starts.push_back(rng.uniform(-10.0, 10.0) / span);

  LmOutcome best{Eigen::Vector3d::Zero(), std::numeric_limits<double>::infinity(), 0, false};
  int total_iterations = 0;
  for (double b0 : starts) {
    // Given b, the model is linear in (a, c).
    Eigen::MatrixXd lin(static_cast<long>(points.size()), 2);
    Eigen::VectorXd y(static_cast<long>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i) {
      lin.row(static_cast<long>(i)) << std::exp(b0 * points[i].x), 1.0;
      y[static_cast<long>(i)] = points[i].y;
    }
    const Eigen::Vector2d ac = lin.colPivHouseholderQr().solve(y);
    if (!ac.allFinite()) continue;
    const LmOutcome out = levenberg_marquardt(points, Eigen::Vector3d(ac[0], b0, ac[1]), max_iterations, y_scale);
    total_iterations += out.iterations;
    if (out.sse < best.sse) best = out;
  }
  if (!std::isfinite(best.sse)) throw std::runtime_error("fit_exponential: every start diverged");
  r.params = best.q;
  r.iterations = total_iterations;
  r.converged = best.converged;
  finish_statistics(r, exp_jacobian(points, best.q));
  if (std::abs(best.q[0]) <= 1e-12 * y_scale || std::abs(best.q[1]) * span <= 1e-12) r.degenerate = true;
  return r;
}

// Continued fraction for the incomplete beta function (modified Lentz).
double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("incomplete beta: a, b must be > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("incomplete beta: x outside [0, 1]");
  if (x == 0.0 || x == 1.0) return x;
  if (x > (a + 1.0) / (a + b + 2.0)) return 1.0 - regularized_incomplete_beta(b, a, 1.0 - x);

  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  constexpr double tiny = 1e-300;
  double c = 1.0, d = 1.0 - (a + b) * x / (a + 1.0);
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double f = d;
  for (int m = 1; m <= 10000; ++m) {
    const double m2 = 2.0 * m;
    double num = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
    d = 1.0 + num * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    f *= d * c;
    num = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
    d = 1.0 + num * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(log_front) * f / a;
}

double student_t_cdf(double t, double dof) {
  if (!(dof > 0.0)) throw std::invalid_argument("student_t_cdf: dof must be > 0");
  if (std::isnan(t)) return t;
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  const double tail = 0.5 * regularized_incomplete_beta(0.5 * dof, 0.5, dof / (dof + t * t));
  return t >= 0.0 ? 1.0 - tail : tail;
}

double student_t_quantile(double p, double dof) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("student_t_quantile: p must lie in (0, 1)");
  if (!(dof > 0.0)) throw std::invalid_argument("student_t_quantile: dof must be > 0");
  if (p == 0.5) return 0.0;
  if (p < 0.5) return -student_t_quantile(1.0 - p, dof);
  double lo = 0.0, hi = 1.0;
  while (student_t_cdf(hi, dof) < p) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw std::runtime_error("student_t_quantile: bracket overflow");
  }
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (student_t_cdf(mid, dof) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Band ci_delta_method(const FitResult& fit, std::span<const double> xs, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("ci_delta_method: alpha must lie in (0, 1)");
  if (fit.dof < 1) throw std::invalid_argument("ci_delta_method: needs more points than parameters");
  if (!fit.covariance.allFinite()) throw std::invalid_argument("ci_delta_method: covariance unavailable (degenerate fit)");
  Band band;
  band.critical = student_t_quantile(1.0 - alpha / 2.0, fit.dof);
  for (double x : xs) {
    const Eigen::VectorXd g = fit.gradient(x);
    const double var = std::max(0.0, g.dot(fit.covariance * g));
    const double y = fit.predict(x);
    const double half = band.critical * std::sqrt(var);
    band.x.push_back(x);
    band.fit.push_back(y);
    band.lower.push_back(y - half);
    band.upper.push_back(y + half);
  }
  return band;
}

std::string band_csv(const Band& band, std::span<const Point> observed) {
  std::ostringstream os;
  os << "x,y,fit,lower,upper\n";
  for (std::size_t i = 0; i < band.x.size(); ++i) {
    os << g17(band.x[i]) << ',';
    for (const auto& p : observed) {
      if (p.x == band.x[i]) {
        os << g17(p.y);
        break;
      }
    }
    os << ',' << g17(band.fit[i]) << ',' << g17(band.lower[i]) << ',' << g17(band.upper[i]) << '\n';
  }
  return os.str();
}

}  // namespace sykrl
