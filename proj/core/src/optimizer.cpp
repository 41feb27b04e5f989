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

#include "sykrl/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sykrl/rng.hpp"

namespace sykrl {

void OptimizerConfig::validate() const {
  if (max_evaluations <= 0) throw std::invalid_argument("OptimizerConfig: max_evaluations must be positive");
  if (!(initial_step > 0.0)) throw std::invalid_argument("OptimizerConfig: initial_step must be positive");
  if (!(tolerance >= 0.0)) throw std::invalid_argument("OptimizerConfig: tolerance must be >= 0");
}

namespace {

struct Vertex {
  std::vector<double> x;
  double f;
};

class BudgetedObjective {
 public:
  BudgetedObjective(const Objective& f, int budget) : f_(f), budget_(budget) {}

  bool exhausted() const { return used_ >= budget_; }
  int used() const { return used_; }
  const Vertex& best() const { return best_; }

  double operator()(const std::vector<double>& x) {
    ++used_;
    double v = f_(x);
    if (std::isnan(v)) v = std::numeric_limits<double>::infinity();
    if (best_.x.empty() || v < best_.f) best_ = {x, v};
    return v;
  }

 private:
  const Objective& f_;
  int budget_;
  int used_ = 0;
  Vertex best_{{}, std::numeric_limits<double>::infinity()};
};

// Runs one simplex search until it collapses or the budget ends.
// Returns true on convergence.
bool run_simplex(BudgetedObjective& fn, std::vector<Vertex> simplex, double tolerance) {
  const std::size_t d = simplex.size() - 1;
  const double de = static_cast<double>(std::max<std::size_t>(d, 2));
  const double alpha = 1.0;
  const double gamma = 1.0 + 2.0 / de;
  const double rho = 0.75 - 1.0 / (2.0 * de);
  const double sigma = 1.0 - 1.0 / de;

  auto by_value = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
  std::vector<double> centroid(d), trial(d);

  auto affine = [&](const std::vector<double>& base, const std::vector<double>& toward, double t) {
    for (std::size_t i = 0; i < d; ++i) trial[i] = base[i] + t * (toward[i] - base[i]);
    return trial;
  };

  for (;;) {
    std::stable_sort(simplex.begin(), simplex.end(), by_value);
    const double spread = simplex.back().f - simplex.front().f;
    double diameter = 0.0;
    for (std::size_t v = 1; v <= d; ++v)
      for (std::size_t i = 0; i < d; ++i)
        diameter = std::max(diameter, std::abs(simplex[v].x[i] - simplex[0].x[i]));
    if (spread <= tolerance || diameter <= 1e-12) return true;
    if (fn.exhausted()) return false;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t v = 0; v < d; ++v)
      for (std::size_t i = 0; i < d; ++i) centroid[i] += simplex[v].x[i] / static_cast<double>(d);

    Vertex& worst = simplex.back();
    const Vertex reflected{affine(centroid, worst.x, -alpha), 0.0};
    const double fr = fn(reflected.x);

    if (fr < simplex.front().f) {
      if (fn.exhausted()) {
        worst = {reflected.x, fr};
        continue;
      }
      const std::vector<double> expanded = affine(centroid, reflected.x, gamma);
      const double fe = fn(expanded);
      worst = fe < fr ? Vertex{expanded, fe} : Vertex{reflected.x, fr};
      continue;
    }
    if (fr < simplex[d - 1].f) {
      worst = {reflected.x, fr};
      continue;
    }
    if (fn.exhausted()) return false;

    bool accepted = false;
    if (fr < worst.f) {
      const std::vector<double> outside = affine(centroid, reflected.x, rho);
      const double fo = fn(outside);
      if (fo <= fr) {
        worst = {outside, fo};
        accepted = true;
      }
    } else {
      const std::vector<double> inside = affine(centroid, worst.x, rho);
      const double fi = fn(inside);
      if (fi < worst.f) {
        worst = {inside, fi};
        accepted = true;
      }
    }
    if (accepted) continue;

    for (std::size_t v = 1; v <= d && !fn.exhausted(); ++v) {
      simplex[v].x = affine(simplex[0].x, simplex[v].x, sigma);
      simplex[v].f = fn(simplex[v].x);
    }
  }
}

// Builds x0 + signs[i] * step * e_i, stopping early if the budget ends.
std::vector<Vertex> build_simplex(BudgetedObjective& fn, const std::vector<double>& x0, double f0, double step,
                                  const std::vector<double>& signs) {
  std::vector<Vertex> simplex;
  simplex.push_back({x0, f0});
  for (std::size_t i = 0; i < x0.size() && !fn.exhausted(); ++i) {
    std::vector<double> x = x0;
    x[i] += signs[i] * step;
    simplex.push_back({x, fn(x)});
  }
  return simplex;
}

}  // namespace

OptimizeResult nelder_mead(const Objective& f, std::vector<double> x0, const OptimizerConfig& config) {
  config.validate();
  BudgetedObjective fn(f, config.max_evaluations);
  OptimizeResult result;

  const double f0 = fn(x0);
  if (x0.empty()) {
    result.x = x0;
    result.value = f0;
    result.evaluations = fn.used();
    result.converged = true;
    return result;
  }

  std::vector<double> signs(x0.size(), 1.0);
  auto simplex = build_simplex(fn, x0, f0, config.initial_step, signs);
  bool converged = false;
  if (simplex.size() == x0.size() + 1) converged = run_simplex(fn, std::move(simplex), config.tolerance);

  if (converged && !fn.exhausted()) {
    SplitMix64 rng(config.seed);
    for (auto& s : signs) s = rng.uniform() < 0.5 ? -1.0 : 1.0;
    const Vertex start = fn.best();
    auto restart = build_simplex(fn, start.x, start.f, config.initial_step, signs);
    result.restarts = 1;
    converged = false;
    if (restart.size() == x0.size() + 1) converged = run_simplex(fn, std::move(restart), config.tolerance);
  }

  result.x = fn.best().x;
  result.value = fn.best().f;
  result.evaluations = fn.used();
  result.converged = converged;
  return result;
}

}  // namespace sykrl
