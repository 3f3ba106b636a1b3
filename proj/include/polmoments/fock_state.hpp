// Copyright 2026 The polmoments Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file fock_state.hpp
 * @brief Two-mode photon-number states decomposed into excitation manifolds.
 *
 * Basis convention, used everywhere in the library: the N-photon manifold is
 * spanned by |m, N-m>, m = 0..N, where m counts photons in the horizontal
 * mode. Row/column index m of a manifold matrix is that basis vector, so
 * |N,0> is the last basis vector and |0,N> the first.
 */

#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <polmoments/common.hpp>

namespace polmoments {

/// Normalized density matrix of one excitation manifold.
class ManifoldDensity {
 public:
  /// Validates Hermiticity, unit trace and positivity; throws InvalidStateError.
  ManifoldDensity(int photons, CMatrix rho);

  int photons() const { return photons_; }
  int dimension() const { return photons_ + 1; }
  const CMatrix& matrix() const { return rho_; }

  /// Tr(rho^2).
  double purity() const;

 private:
  int photons_;
  CMatrix rho_;
};

/// Residuals of the three density-matrix invariants.
struct ManifoldDiagnostics {
  int photons = 0;
  double hermiticity_residual = 0.0;
  double trace_residual = 0.0;
  double min_eigenvalue = 0.0;

  bool hermitian() const { return hermiticity_residual <= Tolerances::kHermiticity; }
  bool unit_trace() const { return trace_residual <= Tolerances::kTrace; }
  bool positive() const { return min_eigenvalue >= Tolerances::kPsd; }
  bool ok() const { return hermitian() && unit_trace() && positive(); }
};

/// Computes residuals for an arbitrary square matrix without throwing.
ManifoldDiagnostics diagnose_matrix(int photons, const CMatrix& rho);

struct WeightedManifold {
  double weight = 0.0;
  ManifoldDensity density;
};

/// Block-diagonal polarization state: one normalized density per manifold
/// plus its excitation probability p_N. The vacuum carries no polarization
/// and is kept only as a weight.
class PolarizationState {
 public:
  PolarizationState() = default;
  /// Manifolds must have distinct photon numbers >= 1, weights >= 0 and the
  /// total weight (including vacuum) may not exceed 1 + 1e-12.
  explicit PolarizationState(std::vector<WeightedManifold> manifolds, double vacuum_weight = 0.0);

  /// Single manifold with unit weight.
  static PolarizationState pure_manifold(ManifoldDensity density);

  std::span<const WeightedManifold> manifolds() const { return manifolds_; }
  double vacuum_weight() const { return vacuum_weight_; }
  /// Sum of all stored weights, vacuum included.
  double total_weight() const;
  /// Largest retained photon number (0 for pure vacuum).
  int cutoff() const;

  const WeightedManifold* find(int photons) const;
  bool has_manifold(int photons) const { return find(photons) != nullptr; }

  /// True when exactly one manifold with N >= 1 is present.
  bool single_manifold() const { return manifolds_.size() == 1; }

 private:
  std::vector<WeightedManifold> manifolds_;  // sorted by photon number
  double vacuum_weight_ = 0.0;
};

// ---------------------------------------------------------------------------
// Declarative state descriptions
// ---------------------------------------------------------------------------

struct FockSpec {
  int horizontal = 0;  ///< photons in H
  int vertical = 0;    ///< photons in V
};

/// |N,0> rotated so that its Stokes vector points along (theta, phi).
struct Su2CoherentSpec {
  int photons = 1;
  double theta = 0.0;
  double phi = 0.0;
};

/// |N,N>, living in the 2N manifold.
struct TwinFockSpec {
  int n = 1;
};

/// Two-mode coherent state | |alpha|, 0 >.
struct CoherentSpec {
  double amplitude = 1.0;
  std::optional<int> cutoff;
};

struct ThermalSpec {
  double mean_photons = 1.0;
  std::optional<int> cutoff;
};

/// identity / (N+1) on manifold N.
struct UnpolarizedSpec {
  int photons = 1;
};

/// sum_N p_N 1_N / (N+1); weights[N] is p_N.
struct Su2InvariantSpec {
  std::vector<double> weights;
};

/// Explicit manifold matrix; normalized on construction. `weight` is p_N.
struct ExplicitSpec {
  int photons = 1;
  CMatrix matrix;
  double weight = 1.0;
};

/// Pure state sum_m c_m |m, N-m>, normalized on construction.
struct SuperpositionSpec {
  int photons = 1;
  CVector amplitudes;
};

struct MixtureComponent;
struct RotatedSpec;

struct MixtureSpec {
  std::vector<MixtureComponent> components;
};

/// A state rigidly rotated on the Poincare sphere by `angle` about `axis`.
struct RotatedSpec {
  Vec3 axis = Vec3::UnitZ();
  double angle = 0.0;  ///< radians
  std::vector<MixtureComponent> inner;  ///< exactly one component, weight 1
};

using StateSpec = std::variant<FockSpec, Su2CoherentSpec, TwinFockSpec, CoherentSpec, ThermalSpec,
                               UnpolarizedSpec, Su2InvariantSpec, ExplicitSpec, SuperpositionSpec,
                               MixtureSpec, RotatedSpec>;

struct MixtureComponent {
  double weight = 0.0;
  StateSpec spec;
};

RotatedSpec make_rotated(StateSpec inner, const Vec3& axis, double angle);

struct BuildOptions {
  /// Automatic cutoffs stop at the first N whose discarded tail, both as
  /// probability and weighted by (N+1)^4, drops below this. Explicit cutoffs
  /// that leave more tail probability than this are rejected.
  double tail_tolerance = 1e-10;
};

/// Builds and validates a state from its description. Throws SpecError for
/// malformed descriptions and InvalidStateError for invalid matrices.
PolarizationState build(const StateSpec& spec, const BuildOptions& options = {});

/// Result of normalizing a raw manifold block.
struct NormalizedManifold {
  ManifoldDensity density;
  double weight;  ///< original trace, i.e. p_N
};

/// Symmetrizes (M + M^dagger)/2 and divides by the trace.
NormalizedManifold normalize_manifold(const CMatrix& raw, int photons);

struct StateDiagnostics {
  std::vector<ManifoldDiagnostics> manifolds;
  double total_weight = 0.0;
  bool ok() const;
};

/// Reports per-manifold residuals; throws InvalidStateError if any invariant
/// is violated beyond tolerance.
StateDiagnostics validate(const PolarizationState& state);

/// Basis index of |m, N-m> (identity map; named for readability at call sites).
constexpr int basis_index(int horizontal, int /*vertical*/) { return horizontal; }

/// Poisson weights of a coherent state: e^{-a^2} a^{2N} / N!.
double coherent_weight(double amplitude, int photons);
/// Bose-Einstein weights: nbar^N / (1+nbar)^{N+1}.
double thermal_weight(double mean_photons, int photons);

}  // namespace polmoments
