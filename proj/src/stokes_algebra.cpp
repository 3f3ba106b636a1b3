// Copyright 2026 The polmoments Authors
// SPDX-License-Identifier: Apache-2.0

#include <polmoments/stokes_algebra.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace polmoments {

const CMatrix& StokesMatrices::component(int j) const {
  switch (j) {
    case 0: return s0;
    case 1: return s1;
    case 2: return s2;
    case 3: return s3;
    default: throw SpecError("Stokes component index must be 0..3");
  }
}

StokesMatrices build_stokes(int photons) {
  if (photons < 0) throw SpecError("build_stokes: N must be non-negative");
  const int d = photons + 1;
  StokesMatrices s;
  s.photons = photons;
  s.s0 = CMatrix::Identity(d, d) * static_cast<double>(photons);
  s.s1 = CMatrix::Zero(d, d);
  s.s2 = CMatrix::Zero(d, d);
  s.s3 = CMatrix::Zero(d, d);
  for (int m = 0; m <= photons; ++m) s.s3(m, m) = 2.0 * m - photons;
  for (int m = 0; m < photons; ++m) {
    // a_H^dagger a_V |m, N-m> = sqrt((m+1)(N-m)) |m+1, N-m-1>
    const double v = std::sqrt(static_cast<double>((m + 1) * (photons - m)));
    s.s1(m + 1, m) = v;
    s.s1(m, m + 1) = v;
    s.s2(m + 1, m) = Complex(0.0, -v);
    s.s2(m, m + 1) = Complex(0.0, v);
  }
  return s;
}

const StokesMatrices& stokes(int photons) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<const StokesMatrices>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[photons];
  if (!slot) slot = std::make_unique<const StokesMatrices>(build_stokes(photons));
  return *slot;
}

Direction Direction::from_angles(double theta, double phi) {
  Direction d;
  d.theta_ = theta;
  d.phi_ = phi;
  d.n_ = Vec3(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
  return d;
}

Direction Direction::from_vector(const Vec3& v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw SpecError("direction vector must be nonzero and finite");
  Direction d;
  d.n_ = v / norm;
  d.theta_ = std::acos(std::clamp(d.n_.z(), -1.0, 1.0));
  d.phi_ = std::atan2(d.n_.y(), d.n_.x());
  return d;
}

Direction Direction::axis(int j) {
  switch (j) {
    case 1: return from_angles(kPi / 2, 0.0);
    case 2: return from_angles(kPi / 2, kPi / 2);
    case 3: return from_angles(0.0, 0.0);
    default: throw SpecError("axis index must be 1, 2 or 3");
  }
}

double Direction::angle_to(const Direction& other) const {
  // atan2 form stays accurate for nearly parallel vectors.
  return std::atan2(n_.cross(other.n_).norm(), n_.dot(other.n_));
}

CMatrix stokes_in_direction(const StokesMatrices& ops, const Vec3& n) {
  return n.x() * ops.s1 + n.y() * ops.s2 + n.z() * ops.s3;
}

CMatrix stokes_in_direction(const StokesMatrices& ops, const Direction& dir) {
  return stokes_in_direction(ops, dir.unit());
}

CMatrix hermitian_exponential(const CMatrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (h + h.adjoint()));
  const auto& vals = es.eigenvalues();
  CVector phases(vals.size());
  for (Eigen::Index i = 0; i < vals.size(); ++i) phases(i) = std::exp(Complex(0.0, -t * vals(i)));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

RotationOperator rotation_to_direction(int photons, const Direction& dir) {
  const auto& s = stokes(photons);
  RotationOperator r;
  r.photons = photons;
  r.target = dir;
  r.unitary = hermitian_exponential(s.s3, dir.phi() / 2) * hermitian_exponential(s.s2, dir.theta() / 2);
  return r;
}

CMatrix rotation_about_axis(int photons, const Vec3& axis, double angle) {
  const double norm = axis.norm();
  if (!(norm > 0.0)) throw SpecError("rotation axis must be nonzero");
  return hermitian_exponential(stokes_in_direction(stokes(photons), Vec3(axis / norm)), angle / 2);
}

Mat3 so3_rotation(const Vec3& axis, double angle) {
  const double norm = axis.norm();
  if (!(norm > 0.0)) throw SpecError("rotation axis must be nonzero");
  return Eigen::AngleAxisd(angle, axis / norm).toRotationMatrix();
}

namespace {

template <typename Fn>
PolarizationState transform_blocks(const PolarizationState& state, Fn&& fn) {
  std::vector<WeightedManifold> out;
  out.reserve(state.manifolds().size());
  for (const auto& m : state.manifolds()) {
    CMatrix rho = fn(m.density.photons(), m.density.matrix());
    rho = 0.5 * (rho + rho.adjoint()).eval();
    out.push_back({m.weight, ManifoldDensity(m.density.photons(), std::move(rho))});
  }
  return PolarizationState(std::move(out), state.vacuum_weight());
}

}  // namespace

PolarizationState rotate_state(const PolarizationState& state, const Direction& dir) {
  return transform_blocks(state, [&](int n, const CMatrix& rho) -> CMatrix {
    const CMatrix u = rotation_to_direction(n, dir).unitary;
    return u.adjoint() * rho * u;
  });
}

PolarizationState apply_rotation(const PolarizationState& state, const Vec3& axis, double angle) {
  return transform_blocks(state, [&](int n, const CMatrix& rho) -> CMatrix {
    const CMatrix v = rotation_about_axis(n, axis, angle);
    return v * rho * v.adjoint();
  });
}

double normal_order_check(int photons) {
  if (photons < 0) throw SpecError("normal_order_check: N must be non-negative");
  const int d = photons + 1;
  // Single-mode annihilation operator truncated at N photons.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
  auto kron = [](const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    Eigen::MatrixXd out(x.rows() * y.rows(), x.cols() * y.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      for (Eigen::Index j = 0; j < x.cols(); ++j) out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    return out;
  };
  const Eigen::MatrixXd ah = kron(a, id);
  const Eigen::MatrixXd av = kron(id, a);
  const Eigen::MatrixXd ahd = ah.transpose();
  const Eigen::MatrixXd avd = av.transpose();
  const Eigen::MatrixXd rhs = ahd * ahd * ah * ah - 2.0 * ahd * avd * ah * av + avd * avd * av * av + ahd * ah + avd * av;

  // Restrict to the manifold: |m, N-m> sits at m*(N+1) + (N-m).
  Eigen::MatrixXd restricted(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) restricted(i, j) = rhs(i * d + (photons - i), j * d + (photons - j));

  const auto& s = stokes(photons);
  const CMatrix lhs = s.s3 * s.s3;
  return (lhs - restricted.cast<Complex>()).cwiseAbs().maxCoeff();
}

double hermiticity_defect(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace polmoments
