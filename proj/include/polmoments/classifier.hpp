// Copyright 2026 The polmoments Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file classifier.hpp
 * @brief Isotropy of moments on the Poincare sphere, the three-photon class
 *        taxonomy and the second-order-unpolarized three-photon family.
 *
 * A state is r-th-order unpolarized when its moments of orders 1..r are the
 * same in every direction. Isotropy is decided numerically: a degree-r
 * polynomial on the sphere is constant iff it is constant on a grid rich
 * enough to determine it, so we evaluate the moment pack on a dense
 * quasi-uniform grid plus the canonical measurement directions and compare
 * the spread against a tolerance.
 *
 * The class criterion is the raw Stokes vector at order 1 and the central
 * moments <Delta_n^r> at orders 2 and 3. Both raw and central spreads are
 * reported. With a zero Stokes vector the two notions agree; with a nonzero
 * one the raw second moment always picks up the anisotropic (s.n)^2 term,
 * so only the central notion admits a state that is polarized at first
 * order yet isotropic at second order.
 */

#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <polmoments/moment_engine.hpp>

namespace polmoments {

struct OrderIsotropy {
  int order = 0;
  double raw_spread = 0.0;      ///< max - min of <S_n^r> over the test grid
  double central_spread = 0.0;  ///< max - min of <Delta_n^r>
  bool raw_isotropic = false;
  bool central_isotropic = false;
  std::optional<double> raw_constant;
  std::optional<double> central_constant;
  /// The class criterion: raw at order 1, central above.
  bool isotropic = false;
  double spread = 0.0;  ///< spread of the criterion quantity
};

struct IsotropyReport {
  std::optional<int> manifold;
  double tolerance = 1e-9;
  std::size_t grid_points = 0;
  std::vector<OrderIsotropy> orders;

  bool unpolarized_to(int order) const;
};

struct IsotropyOptions {
  double tolerance = 1e-9;
};

/// Test directions for orders up to max_order.
std::vector<Direction> isotropy_grid(int max_order);

IsotropyReport isotropy_test(const MomentTensors& tensors, const IsotropyOptions& options = {});
IsotropyReport isotropy_test(const PolarizationState& state, int max_order, const MomentSelection& sel,
                             const IsotropyOptions& options = {});

struct PolarizationClass {
  std::array<bool, 3> invariant{};  ///< orders 1, 2, 3
  int row = 0;                      ///< 1..6 in the taxonomy; 0 when unrealizable
  std::string label;
};

/// The six realizable (order-1, order-2, order-3) invariance triples.
const std::vector<PolarizationClass>& three_photon_classes();

/// Classifies a set of tensors of order >= 3. When `require_realizable` the
/// triple must be one of the six rows, else ClassificationError.
PolarizationClass classify(const IsotropyReport& report, bool require_realizable);

/// Three-photon states only; throws ClassificationError otherwise.
PolarizationClass classify3(const PolarizationState& state, const IsotropyOptions& options = {});

struct UnpolFamilyParams {
  double rho11 = 0.25;
  Complex rho12{0.0, 0.0};
  Complex rho13{0.0, 0.0};
  Complex rho14{0.0, 0.0};
};

/// The 4x4 family matrix in rows |3,0>, |2,1>, |1,2>, |0,3> (not the
/// library basis order). Throws SpecError when rho11 is outside [1/6, 1/3].
CMatrix unpol_family_matrix(const UnpolFamilyParams& params);

/// The same matrix reordered into the library basis and validated; throws
/// InvalidStateError when it is not positive semidefinite.
PolarizationState unpol_family(const UnpolFamilyParams& params);

struct PurityObstruction {
  /// Forcing the first two pure-state conditions gives rho11 = 1/3 and
  /// rho12 = 0; this is what the third condition then misses by.
  double algebraic_rho11 = 1.0 / 3.0;
  double third_condition_residual = 0.0;
  bool pure_state_possible = true;
  std::size_t samples = 0;
  std::size_t psd_members = 0;
  double max_purity = 0.0;
  UnpolFamilyParams best;
};

PurityObstruction purity_obstruction_check(std::size_t samples, std::uint64_t seed = 1);

/// Draws a positive semidefinite family member; deterministic per RNG state.
UnpolFamilyParams sample_unpol_family(std::mt19937_64& rng);

struct ConjectureProbe {
  int photons = 0;
  double candidate_plus_weight = 0.0;  ///< weight of |N,0> in the candidate
  double candidate_sum = 0.0;          ///< sum_j <Delta_j^2> for the candidate
  double candidate_spread = 0.0;       ///< spread of <Delta_n^2> for the candidate
  bool candidate_isotropic = false;
  double bound = 0.0;                  ///< 3N
  std::size_t samples = 0;
  std::size_t isotropic_found = 0;
  double min_sum_found = 0.0;
  bool counterexample = false;         ///< some sample fell below bound - 1e-6
  std::string method;
};

/// Sampling probe of the lower bound 3N for second-order isotropic states.
/// Evidence only: a clean run shows no counterexample was found.
ConjectureProbe min_isotropy_conjecture_scan(int photons, std::size_t samples, std::uint64_t seed = 1);

}  // namespace polmoments
