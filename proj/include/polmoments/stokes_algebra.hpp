// Copyright 2026 The polmoments Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file stokes_algebra.hpp
 * @brief Stokes operators per manifold, directions on the Poincare sphere and
 *        the SU(2) rotations that realize directional measurements.
 *
 * On manifold N, in the basis |m, N-m>:
 *   S0 = N * 1,  S3 = diag(2m - N),
 *   <m+1|S1|m> = sqrt((m+1)(N-m)),  <m+1|S2|m> = -i sqrt((m+1)(N-m)).
 * These satisfy [S_j, S_k] = 2i eps_jkl S_l.
 */

#pragma once

#include <array>

#include <polmoments/common.hpp>
#include <polmoments/fock_state.hpp>

namespace polmoments {

struct StokesMatrices {
  int photons = 0;
  CMatrix s0, s1, s2, s3;

  /// j in {0,1,2,3}.
  const CMatrix& component(int j) const;
  /// The vector components S1, S2, S3 in order.
  std::array<const CMatrix*, 3> vector_components() const { return {&s1, &s2, &s3}; }
};

StokesMatrices build_stokes(int photons);

/// Memoized build_stokes; safe for concurrent use.
const StokesMatrices& stokes(int photons);

/// Unit vector on the Poincare sphere. theta is the polar angle from axis 3,
/// phi the azimuth in the 1-2 plane.
class Direction {
 public:
  Direction() = default;
  static Direction from_angles(double theta, double phi);
  /// Normalizes; throws SpecError for a zero vector.
  static Direction from_vector(const Vec3& v);
  static Direction axis(int j);  ///< j in {1,2,3}

  double theta() const { return theta_; }
  double phi() const { return phi_; }
  const Vec3& unit() const { return n_; }

  /// Angle between two directions in radians.
  double angle_to(const Direction& other) const;

 private:
  double theta_ = 0.0;
  double phi_ = 0.0;
  Vec3 n_ = Vec3::UnitZ();
};

/// n1 S1 + n2 S2 + n3 S3.
CMatrix stokes_in_direction(const StokesMatrices& ops, const Direction& dir);
CMatrix stokes_in_direction(const StokesMatrices& ops, const Vec3& n);

/// exp(-i t H) for Hermitian H via its eigendecomposition.
CMatrix hermitian_exponential(const CMatrix& h, double t);

struct RotationOperator {
  int photons = 0;
  CMatrix unitary;
  Direction target;
};

/// U = exp(-i phi S3/2) exp(-i theta S2/2), so that U S3 U^dagger = n.S.
RotationOperator rotation_to_direction(int photons, const Direction& dir);

/// exp(-i angle (u.S)/2): rotates Stokes vectors by `angle` about unit axis u.
CMatrix rotation_about_axis(int photons, const Vec3& axis, double angle);

/// The SO(3) matrix of the same rotation (right-handed, Rodrigues form).
Mat3 so3_rotation(const Vec3& axis, double angle);

/// rho -> U^dagger rho U per manifold, with U = rotation_to_direction(N, dir).
/// Afterwards Tr(rho' S3) equals Tr(rho S_n).
PolarizationState rotate_state(const PolarizationState& state, const Direction& dir);

/// rho -> V rho V^dagger with V = rotation_about_axis; moves every moment
/// pattern rigidly: <S_n>' = <S_{R^-1 n}>.
PolarizationState apply_rotation(const PolarizationState& state, const Vec3& axis, double angle);

/// Max-abs residual between S3^2 and its normally ordered ladder-operator
/// expansion on manifold N.
double normal_order_check(int photons);

/// Max-abs deviation of a matrix from Hermiticity.
double hermiticity_defect(const CMatrix& m);

}  // namespace polmoments
