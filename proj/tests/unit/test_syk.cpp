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
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sykrl/errors.hpp"
#include "sykrl/syk.hpp"

namespace {

using namespace sykrl;

// Jordan-Wigner Majorana built from Kronecker products, 1-based index.
oracle::Mat jw_oracle(int index, int n) {
  int k = (index + 1) / 2 - 1;
  oracle::Mat m = oracle::Mat::Identity(1, 1);
  for (int q = 0; q < n; ++q) {
    oracle::Mat f = q < k ? oracle::Z() : (q == k ? (index % 2 == 1 ? oracle::X() : oracle::Y()) : oracle::I2());
    m = oracle::kron(m, f);
  }
  return m / std::sqrt(2.0);
}

oracle::Mat dense_syk(const SykInstance& inst) {
  int n = inst.qubit_count();
  oracle::Mat h = oracle::Mat::Zero(1 << n, 1 << n);
  for (const auto& [q, j] : inst.couplings)
    h -= j * jw_oracle(q[0], n) * jw_oracle(q[1], n) * jw_oracle(q[2], n) * jw_oracle(q[3], n);
  return h;
}

TEST(SampleCouplings, CountMatchesBinomial) {
  for (int N : {4, 6, 8, 10, 12, 14}) EXPECT_EQ(static_cast<long long>(sample_couplings(N, 1).size()), oracle::binomial(N, 4));
  EXPECT_EQ(sample_couplings(8, 0).size(), 70u);
}

TEST(SampleCouplings, VarianceParameter) {
  EXPECT_DOUBLE_EQ(coupling_variance(8), 6.0 / 512.0);
  EXPECT_DOUBLE_EQ(coupling_variance(8), 0.01171875);
}

TEST(SampleCouplings, DeterministicPerSeed) {
  auto a = sample_couplings(8, 7);
  auto b = sample_couplings(8, 7);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, sample_couplings(8, 8));
}

TEST(SampleCouplings, QuartetsAreOrderedAndInRange) {
  for (const auto& [q, j] : sample_couplings(10, 3)) {
    EXPECT_GE(q[0], 1);
    EXPECT_LT(q[0], q[1]);
    EXPECT_LT(q[1], q[2]);
    EXPECT_LT(q[2], q[3]);
    EXPECT_LE(q[3], 10);
    EXPECT_TRUE(std::isfinite(j));
  }
}

TEST(SampleCouplings, MomentsConvergeWithinFiveSigma) {
  const int N = 8;
  double sum = 0, sum2 = 0;
  std::size_t count = 0;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    for (const auto& [q, j] : sample_couplings(N, seed)) {
      sum += j;
      sum2 += j * j;
      ++count;
    }
  }
  double var = coupling_variance(N);
  double mean = sum / static_cast<double>(count);
  double second = sum2 / static_cast<double>(count);
  EXPECT_LT(std::abs(mean), 5.0 * std::sqrt(var / static_cast<double>(count)));
  EXPECT_LT(std::abs(second - var), 5.0 * var * std::sqrt(2.0 / static_cast<double>(count)));
}

TEST(SampleCouplings, RejectsBadSizes) {
  EXPECT_THROW(sample_couplings(7, 0), std::invalid_argument);
  EXPECT_THROW(sample_couplings(2, 0), std::invalid_argument);
  EXPECT_THROW(SykInstance::generate(9, 0), std::invalid_argument);
}

TEST(MajoranaToPauli, BaseCases) {
  auto c1 = majorana_to_pauli(1, 2);
  EXPECT_EQ(c1.letters(), "XI");
  EXPECT_NEAR(c1.coefficient().real(), 1.0 / std::numbers::sqrt2, 1e-15);
  EXPECT_NEAR(c1.coefficient().imag(), 0.0, 1e-15);
  auto c2 = majorana_to_pauli(2, 2);
  EXPECT_EQ(c2.letters(), "YI");
  EXPECT_NEAR(c2.coefficient().real(), 1.0 / std::numbers::sqrt2, 1e-15);
  EXPECT_EQ(majorana_to_pauli(3, 2).letters(), "ZX");
  EXPECT_EQ(majorana_to_pauli(4, 2).letters(), "ZY");
}

TEST(MajoranaToPauli, MatchesKroneckerOracle) {
  for (int n = 1; n <= 4; ++n)
    for (int i = 1; i <= 2 * n; ++i)
      EXPECT_LT((majorana_to_pauli(i, n).to_dense() - jw_oracle(i, n)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(MajoranaToPauli, AnticommutationRelations) {
  for (int n = 1; n <= 3; ++n) {
    const auto dim = 1 << n;
    for (int i = 1; i <= 2 * n; ++i) {
      for (int j = 1; j <= 2 * n; ++j) {
        auto a = majorana_to_pauli(i, n).to_dense();
        auto b = majorana_to_pauli(j, n).to_dense();
        oracle::Mat ac = a * b + b * a;
        oracle::Mat expected = (i == j ? 1.0 : 0.0) * oracle::Mat::Identity(dim, dim);
        EXPECT_LT((ac - expected).cwiseAbs().maxCoeff(), 1e-12) << i << "," << j;
      }
    }
  }
}

TEST(MajoranaToPauli, RejectsOutOfRange) {
  EXPECT_THROW(majorana_to_pauli(0, 2), std::invalid_argument);
  EXPECT_THROW(majorana_to_pauli(5, 2), std::invalid_argument);
}

TEST(BuildHamiltonian, SingleCouplingGivesQuarterMagnitude) {
  SykInstance inst;
  inst.majorana_count = 4;
  inst.couplings[{1, 2, 3, 4}] = 1.0;
  auto h = build_hamiltonian(inst);
  ASSERT_EQ(h.size(), 1u);
  EXPECT_NEAR(std::abs(h.terms()[0].coefficient()), 0.25, 1e-15);
  EXPECT_NEAR(h.terms()[0].coefficient().imag(), 0.0, 1e-15);
  EXPECT_LT((h.to_dense() - dense_syk(inst)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(BuildHamiltonian, MatchesDenseOracleAndIsHermitianTraceless) {
  for (int N : {4, 6, 8, 10}) {
    auto inst = SykInstance::generate(N, 11);
    auto h = build_hamiltonian(inst);
    auto dense = h.to_dense();
    EXPECT_LT((dense - dense_syk(inst)).cwiseAbs().maxCoeff(), 1e-12) << N;
    EXPECT_LT((dense - dense.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(std::abs(dense.trace()), 1e-12);
    EXPECT_TRUE(h.is_hermitian());
    EXPECT_LE(static_cast<long long>(h.size()), oracle::binomial(N, 4));
    for (const auto& t : h.terms()) {
      EXPECT_FALSE(t.is_identity());
      EXPECT_NEAR(t.coefficient().imag(), 0.0, 1e-15);
    }
  }
}

TEST(BuildHamiltonian, PrefactorScalesLinearly) {
  auto inst = SykInstance::generate(8, 2);
  auto a = build_hamiltonian(inst).to_dense();
  auto b = build_hamiltonian(inst, 1.0 / 24.0).to_dense();
  EXPECT_LT((a / 24.0 - b).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(SykInstance, JsonRoundTripIsExact) {
  auto inst = SykInstance::generate(10, 99);
  auto back = SykInstance::from_json(inst.to_json());
  EXPECT_EQ(back.majorana_count, 10);
  EXPECT_EQ(back.seed, 99u);
  EXPECT_EQ(back.couplings, inst.couplings);
  EXPECT_THROW(SykInstance::from_json("{\"N\":8}"), std::exception);
  EXPECT_THROW(SykInstance::from_json("not json"), std::exception);
}

TEST(ExactThermal, InfiniteTemperature) {
  auto h = build_hamiltonian(SykInstance::generate(8, 1));
  auto ref = exact_thermal(h, 0.0);
  EXPECT_LT((ref.rho - oracle::Mat::Identity(16, 16) / 16.0).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_NEAR(ref.entropy, std::log(16.0), 1e-12);
  EXPECT_NEAR(ref.entropy, 2.772589, 1e-6);
  EXPECT_NEAR(ref.energy, 0.0, 1e-12);
  EXPECT_FALSE(ref.free_energy.has_value());
}

TEST(ExactThermal, SingleQubitZClosedForm) {
  PauliSum h(1, {PauliString::from_letters("Z")});
  auto ref = exact_thermal(h, 1.0);
  double z = 2 * std::cosh(1.0);
  oracle::Mat expected = oracle::Mat::Zero(2, 2);
  expected(0, 0) = std::exp(-1.0) / z;
  expected(1, 1) = std::exp(1.0) / z;
  EXPECT_LT((ref.rho - expected).cwiseAbs().maxCoeff(), 1e-14);
  ASSERT_TRUE(ref.free_energy.has_value());
  EXPECT_NEAR(*ref.free_energy, -std::log(z), 1e-12);
  EXPECT_NEAR(*ref.free_energy, -1.126928011, 1e-9);
  EXPECT_NEAR(ref.energy, -std::tanh(1.0), 1e-12);
}

TEST(ExactThermal, MatchesMatrixExponentialOracle) {
  auto h = build_hamiltonian(SykInstance::generate(8, 4));
  for (double beta : {0.5, 5.2, 18.0, 35.0}) {
    auto ref = exact_thermal(h, beta);
    auto g = oracle::gibbs(h.to_dense(), beta);
    EXPECT_LT((ref.rho - g.rho).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_NEAR(ref.energy, g.energy, 1e-10);
    EXPECT_NEAR(ref.entropy, g.entropy, 1e-10);
    EXPECT_NEAR(*ref.free_energy, g.free_energy, 1e-10);
    EXPECT_NEAR(ref.log_partition, g.log_z, 1e-9);
  }
}

TEST(ExactThermal, GibbsConsistencyOnDefaultBetaGrid) {
  auto h = build_hamiltonian(SykInstance::generate(8, 1));
  for (double beta : {5.2, 18.0, 35.0}) {
    auto ref = exact_thermal(h, beta);
    EXPECT_NEAR(ref.rho.trace().real(), 1.0, 1e-12);
    Eigen::SelfAdjointEigenSolver<oracle::Mat> es(ref.rho);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12);
    EXPECT_NEAR(*ref.free_energy, ref.energy - ref.entropy / beta, 1e-10);
    EXPECT_GE(ref.entropy, 0.0);
    EXPECT_LE(ref.entropy, 4 * std::log(2.0) + 1e-12);

    // dF/dbeta = S / beta^2 against central differences of -(1/beta) ln Z.
    const double d = 1e-5;
    auto f = [&](double b) { return -exact_thermal(h, b).log_partition / b; };
    double fd = (f(beta + d) - f(beta - d)) / (2 * d);
    double analytic = ref.entropy / (beta * beta);
    EXPECT_NEAR(fd, analytic, 1e-6 * std::abs(analytic)) << beta;
  }
}

TEST(ExactThermal, EntropyMonotoneInTemperature) {
  auto h = build_hamiltonian(SykInstance::generate(8, 3));
  double prev = exact_thermal(h, 0.0).entropy;
  for (double beta = 0.25; beta <= 40.0; beta *= 1.5) {
    double s = exact_thermal(h, beta).entropy;
    EXPECT_LE(s, prev + 1e-12);
    prev = s;
  }
}

TEST(ExactThermal, Errors) {
  auto h = build_hamiltonian(SykInstance::generate(8, 1));
  EXPECT_THROW(exact_thermal(h, -1.0), std::invalid_argument);
  auto big = build_hamiltonian(SykInstance::generate(18, 1));
  EXPECT_THROW(exact_thermal(big, 1.0), CapacityError);
}

}  // namespace
