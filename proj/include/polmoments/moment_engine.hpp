// Copyright 2026 The polmoments Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file moment_engine.hpp
 * @brief Raw and central polarization moments of any order, the covariance
 *        matrix and its eigenstructure, and excitation averaging.
 *
 * Moments are taken either within one manifold N (normalized rho_N) or
 * averaged over excitations. Averaged central moments use the averaged
 * Stokes vector as the centre, summing p_N Tr(rho_N (S_n - <S_n>)^r) over
 * all blocks including the vacuum, where S vanishes. This treats the state
 * as a single block-diagonal operator; it is what makes the averaged S3
 * variance of a coherent state equal |alpha|^2.
 */

#pragma once

#include <functional>
#include <optional>
#include <vector>

#include <polmoments/fock_state.hpp>
#include <polmoments/sphere_grid.hpp>
#include <polmoments/stokes_algebra.hpp>
#include <polmoments/symmetric_pack.hpp>

namespace polmoments {

/// Which part of a state a moment query refers to.
class MomentSelection {
 public:
  static MomentSelection manifold(int photons) { return MomentSelection(photons); }
  static MomentSelection averaged() { return MomentSelection(std::nullopt); }
  /// Picks the manifold of a single-manifold state, else the average.
  static MomentSelection natural(const PolarizationState& state);

  bool is_averaged() const { return !photons_.has_value(); }
  int photons() const { return photons_.value(); }
  std::optional<int> maybe_photons() const { return photons_; }

 private:
  explicit MomentSelection(std::optional<int> n) : photons_(n) {}
  std::optional<int> photons_;
};

struct MomentTensors {
  std::optional<int> manifold;  ///< nullopt: excitation averaged
  int max_order = 0;
  std::vector<SymmetricPack> raw;      ///< raw[r-1] has order r
  std::vector<SymmetricPack> central;  ///< central[r-1] has order r; central[0] is zero

  Vec3 stokes_vector() const;
  /// Second-order raw moments <S_j S_k> symmetrized, as a 3x3 matrix.
  Mat3 second_raw_matrix() const;

  double raw_moment(const Vec3& n, int order) const;
  double central_moment(const Vec3& n, int order) const;

  /// Builds a complete tensor set from raw packs of orders 1..R.
  static MomentTensors from_raw(std::vector<SymmetricPack> raw, std::optional<int> manifold);
};

/// Tr(rho_N S_n^r) by direct matrix power (or the p_N-weighted sum when averaged).
double raw_moment(const PolarizationState& state, const Direction& dir, int order,
                  const MomentSelection& sel);
/// Tr(rho_N (S_n - <S_n>)^r) by direct matrix power.
double central_moment(const PolarizationState& state, const Direction& dir, int order,
                      const MomentSelection& sel);

/// Stokes vector (<S1>, <S2>, <S3>).
Vec3 stokes_vector(const PolarizationState& state, const MomentSelection& sel);

/// Packs built from symmetrized operator products.
MomentTensors moment_tensors(const PolarizationState& state, int max_order, const MomentSelection& sel);

struct CovarianceMatrix {
  Mat3 gamma = Mat3::Zero();
  Vec3 eigenvalues = Vec3::Zero();    ///< descending
  Mat3 eigenvectors = Mat3::Identity();  ///< columns, first nonzero component positive
  bool degenerate = false;            ///< some eigenvalues coincide; eigenvectors not unique

  /// n . Gamma . n
  double variance(const Vec3& n) const { return n.dot(gamma * n); }
};

/// Builds the eigen-report for a symmetric 3x3 matrix.
CovarianceMatrix make_covariance(const Mat3& gamma, double degeneracy_tolerance = 1e-9);
CovarianceMatrix covariance(const PolarizationState& state, const MomentSelection& sel);
CovarianceMatrix covariance(const MomentTensors& tensors);

struct UncertaintyReport {
  double lower = 0.0;   ///< 2 <S0>
  double sum = 0.0;     ///< sum_j <Delta_j^2>
  double upper = 0.0;   ///< <S0>(<S0> + 2)
  bool lower_saturated = false;
  bool upper_saturated = false;
};

/// Checks 2<S0> <= sum_j <Delta_j^2> <= <S0>(<S0>+2) on manifold N >= 1.
/// Throws InvalidStateError on violation beyond 1e-10.
UncertaintyReport uncertainty_check(const PolarizationState& state, int photons);
/// Single-manifold states only; throws SpecError otherwise.
UncertaintyReport uncertainty_check(const PolarizationState& state);

struct SphereScan {
  GridSpec grid;
  int order = 0;
  std::optional<int> manifold;
  std::vector<Direction> directions;
  std::vector<double> central;  ///< signed <Delta_n^r>
  std::vector<double> raw;      ///< <S_n^r>

  /// |central| for odd orders, central otherwise.
  double display_value(std::size_t i) const;
};

SphereScan sphere_scan(const PolarizationState& state, int order, const GridSpec& grid,
                       const MomentSelection& sel);

/// sum_{N>=1} p_N q(N, rho_N).
double excitation_average(const PolarizationState& state,
                          const std::function<double(const ManifoldDensity&)>& per_manifold);

}  // namespace polmoments
