// Copyright 2026 The polmoments Authors
// SPDX-License-Identifier: Apache-2.0

// Test-side reference computations. Nothing here calls the library's moment
// code; Stokes matrices are rebuilt from truncated ladder operators, and
// symmetrized moments come from explicit permutation enumeration.

#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include <polmoments/fock_state.hpp>

namespace oracle {

using polmoments::CMatrix;
using polmoments::Complex;

/// Annihilation operator on a mode truncated to n_max photons.
inline CMatrix annihilation(int n_max) {
  CMatrix a = CMatrix::Zero(n_max + 1, n_max + 1);
  for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

inline CMatrix kron(const CMatrix& x, const CMatrix& y) {
  CMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
  return out;
}

struct TwoMode {
  int n_max;
  CMatrix ah, av;  // on the (n_max+1)^2 product space, H first

  explicit TwoMode(int n) : n_max(n) {
    const CMatrix a = annihilation(n);
    const CMatrix id = CMatrix::Identity(n + 1, n + 1);
    ah = kron(a, id);
    av = kron(id, a);
  }
  int index(int h, int v) const { return h * (n_max + 1) + v; }

  /// Restriction of a product-space operator to the N-photon block, basis |m, N-m>.
  CMatrix restrict(const CMatrix& op, int photons) const {
    CMatrix out(photons + 1, photons + 1);
    for (int i = 0; i <= photons; ++i)
      for (int j = 0; j <= photons; ++j) out(i, j) = op(index(i, photons - i), index(j, photons - j));
    return out;
  }
};

/// S0..S3 on manifold N from a_H, a_V:
/// S1 = aH+ aV + aV+ aH, S2 = i(aV+ aH - aH+ aV), S3 = aH+ aH - aV+ aV.
inline std::vector<CMatrix> stokes_from_ladders(int photons) {
  const TwoMode tm(photons + 1);
  const CMatrix ahd = tm.ah.adjoint(), avd = tm.av.adjoint();
  const Complex i(0, 1);
  std::vector<CMatrix> s = {ahd * tm.ah + avd * tm.av, ahd * tm.av + avd * tm.ah, i * (avd * tm.ah - ahd * tm.av),
                            ahd * tm.ah - avd * tm.av};
  for (auto& m : s) m = tm.restrict(m, photons);
  return s;
}

inline double power_trace(const CMatrix& rho, const CMatrix& op, int r) {
  CMatrix acc = CMatrix::Identity(op.rows(), op.cols());
  for (int k = 0; k < r; ++k) acc = acc * op;
  return (rho * acc).trace().real();
}

inline CMatrix direction_operator(const std::vector<CMatrix>& s, const Eigen::Vector3d& n) {
  return n(0) * s[1] + n(1) * s[2] + n(2) * s[3];
}

/// Average of Tr(rho X_w) over all distinct orderings w of a ones, b twos, c threes.
inline double symmetrized(const CMatrix& rho, const std::vector<CMatrix>& x, int a, int b, int c) {
  std::vector<int> word;
  word.insert(word.end(), a, 1);
  word.insert(word.end(), b, 2);
  word.insert(word.end(), c, 3);
  std::sort(word.begin(), word.end());
  double acc = 0.0;
  int count = 0;
  do {
    CMatrix p = rho;
    for (int j : word) p = p * x[j];
    acc += p.trace().real();
    ++count;
  } while (std::next_permutation(word.begin(), word.end()));
  return acc / count;
}

/// Central fluctuation operators Delta_j = S_j - <S_j> on one manifold.
inline std::vector<CMatrix> fluctuations(const CMatrix& rho, const std::vector<CMatrix>& s) {
  std::vector<CMatrix> d = s;
  for (int j = 1; j <= 3; ++j) {
    const double mean = (rho * s[j]).trace().real();
    d[j] = s[j] - mean * CMatrix::Identity(s[j].rows(), s[j].cols());
  }
  return d;
}

/// Random density matrix of rank `rank` from a complex Ginibre matrix.
inline CMatrix random_density(int dim, std::mt19937_64& rng, int rank = 0) {
  if (rank <= 0) rank = dim;
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix x(dim, rank);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < rank; ++j) x(i, j) = Complex(g(rng), g(rng));
  CMatrix rho = x * x.adjoint();
  return rho / rho.trace().real();
}

inline Eigen::Vector3d random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::Vector3d v(g(rng), g(rng), g(rng));
  return v.normalized();
}

inline polmoments::PolarizationState single(int photons, const CMatrix& rho) {
  return polmoments::PolarizationState::pure_manifold(polmoments::ManifoldDensity(photons, rho));
}

/// Diagonal N=3 state from weights on |3,0>, |2,1>, |1,2>, |0,3> (listed order).
inline polmoments::PolarizationState listed_diag3(double w30, double w21, double w12, double w03) {
  CMatrix rho = CMatrix::Zero(4, 4);
  rho(3, 3) = w30;
  rho(2, 2) = w21;
  rho(1, 1) = w12;
  rho(0, 0) = w03;
  return single(3, rho);
}

}  // namespace oracle
