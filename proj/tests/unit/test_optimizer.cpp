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


#include <cmath>

#include <gtest/gtest.h>

#include "sykrl/optimizer.hpp"

namespace {

using namespace sykrl;

TEST(NelderMead, MinimizesShiftedQuadratic) {
  std::vector<double> c{1.0, -2.0, 0.5, 3.0};
  auto f = [&](std::span<const double> x) {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (i + 1.0) * (x[i] - c[i]) * (x[i] - c[i]);
    return s;
  };
  auto r = nelder_mead(f, {0, 0, 0, 0}, {2000, 0.5, 1e-14, 1});
  EXPECT_LT(r.value, 1e-8);
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_NEAR(r.x[i], c[i], 1e-4);
  EXPECT_LE(r.evaluations, 2000);
}

TEST(NelderMead, Rosenbrock) {
  auto f = [](std::span<const double> x) {
    return 100 * (x[1] - x[0] * x[0]) * (x[1] - x[0] * x[0]) + (1 - x[0]) * (1 - x[0]);
  };
  auto r = nelder_mead(f, {-1.2, 1.0}, {5000, 0.5, 1e-16, 0});
  EXPECT_NEAR(r.x[0], 1.0, 1e-4);
  EXPECT_NEAR(r.x[1], 1.0, 1e-4);
}

TEST(NelderMead, NeverWorseThanStartAndHonorsBudget) {
  int calls = 0;
  auto f = [&](std::span<const double> x) {
    ++calls;
    return std::sin(3 * x[0]) * std::cos(2 * x[1]) + 0.1 * x[2] * x[2];
  };
  std::vector<double> x0{0.3, -0.7, 1.2};
  double f0 = f(x0);
  calls = 0;
  for (int budget : {1, 2, 5, 17, 200}) {
    calls = 0;
    auto r = nelder_mead(f, x0, {budget, 0.5, 1e-10, 3});
    EXPECT_LE(r.value, f0);
    EXPECT_LE(r.evaluations, budget);
    EXPECT_EQ(calls, r.evaluations);
    EXPECT_DOUBLE_EQ(r.value, f(r.x));
  }
}

TEST(NelderMead, DeterministicGivenSeed) {
  auto f = [](std::span<const double> x) { return std::cos(x[0]) + std::sin(x[1] * x[0]) + 0.01 * x[1] * x[1]; };
  auto a = nelder_mead(f, {1.0, 2.0}, {300, 0.5, 1e-10, 42});
  auto b = nelder_mead(f, {1.0, 2.0}, {300, 0.5, 1e-10, 42});
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.evaluations, b.evaluations);
}

TEST(NelderMead, ValidatesConfig) {
  auto f = [](std::span<const double> x) { return x[0] * x[0]; };
  EXPECT_THROW(nelder_mead(f, {1.0}, {0, 0.5, 1e-10, 0}), std::invalid_argument);
  EXPECT_THROW(nelder_mead(f, {1.0}, {10, 0.0, 1e-10, 0}), std::invalid_argument);
  EXPECT_THROW((OptimizerConfig{-5, 0.5, 1e-10, 0}).validate(), std::invalid_argument);
}

TEST(NelderMead, EmptyParameterVector) {
  int calls = 0;
  auto f = [&](std::span<const double>) {
    ++calls;
    return 4.0;
  };
  auto r = nelder_mead(f, {}, {10, 0.5, 1e-10, 0});
  EXPECT_DOUBLE_EQ(r.value, 4.0);
  EXPECT_EQ(r.evaluations, 1);
}

}  // namespace
