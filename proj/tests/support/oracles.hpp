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

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

// Independent dense-matrix reference implementations. Nothing here calls into
// the library, so tests can compare library output against first principles.
namespace oracle {

using C = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline Mat I2() { return Mat::Identity(2, 2); }
inline Mat X() {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline Mat Y() {
  Mat m(2, 2);
  m << 0, C(0, -1), C(0, 1), 0;
  return m;
}
inline Mat Z() {
  Mat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return r;
}

inline Mat letter(char c) {
  switch (c) {
    case 'X': return X();
    case 'Y': return Y();
    case 'Z': return Z();
    default: return I2();
  }
}

// Leftmost letter is qubit 0 and the leftmost tensor factor.
inline Mat pauli(const std::string& letters, C coeff = 1.0) {
  Mat m = Mat::Identity(1, 1);
  for (char c : letters) m = kron(m, letter(c));
  return coeff * m;
}

// Single-qubit operator u placed on qubit q of n.
inline Mat embed(const Mat& u, int q, int n) {
  Mat m = Mat::Identity(1, 1);
  for (int k = 0; k < n; ++k) m = kron(m, k == q ? u : I2());
  return m;
}

inline Mat rot(const Mat& p, double angle) {
  return std::cos(angle / 2) * I2() - C(0, 1) * std::sin(angle / 2) * p;
}

inline Mat cnot(int c, int t, int n) {
  Mat p0(2, 2), p1(2, 2);
  p0 << 1, 0, 0, 0;
  p1 << 0, 0, 0, 1;
  return embed(p0, c, n) + embed(p1, c, n) * embed(X(), t, n);
}

// Hermitian matrix function via eigendecomposition.
template <class F>
inline Mat hermitian_apply(const Mat& m, F f) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  Eigen::VectorXd ev = es.eigenvalues();
  Eigen::VectorXcd fv(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) fv(i) = f(ev(i));
  return es.eigenvectors() * fv.asDiagonal() * es.eigenvectors().adjoint();
}

inline Mat sqrtm_psd(const Mat& m) {
  return hermitian_apply(m, [](double x) { return std::sqrt(std::max(x, 0.0)); });
}

inline double fidelity(const Mat& rho, const Mat& sigma) {
  Mat s = sqrtm_psd(rho);
  Mat inner = s * sigma * s;
  inner = 0.5 * (inner + inner.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(inner);
  double f = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) f += std::sqrt(std::max(es.eigenvalues()(i), 0.0));
  return f;
}

struct Gibbs {
  Mat rho;
  double energy, entropy, free_energy, log_z;
};

// Gibbs state by direct matrix exponential of the Hermitian matrix.
inline Gibbs gibbs(const Mat& h, double beta) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  Eigen::VectorXd e = es.eigenvalues();
  double emin = e.minCoeff();
  double z = 0;
  for (Eigen::Index i = 0; i < e.size(); ++i) z += std::exp(-beta * (e(i) - emin));
  Gibbs g;
  g.log_z = std::log(z) - beta * emin;
  g.rho = hermitian_apply(h, [&](double x) { return std::exp(-beta * (x - emin)) / z; });
  g.energy = (g.rho * h).trace().real();
  g.entropy = 0;
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    double p = std::exp(-beta * (e(i) - emin)) / z;
    if (p > 0) g.entropy -= p * std::log(p);
  }
  g.free_energy = -g.log_z / beta;
  return g;
}

inline Mat random_density(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Mat a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = C(nd(rng), nd(rng));
  Mat r = a * a.adjoint();
  return r / r.trace();
}

inline long long binomial(int n, int k) {
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace oracle
