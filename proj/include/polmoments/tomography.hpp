// Copyright 2026 The polmoments Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file tomography.hpp
 * @brief Reconstruction of moment packs from directional Stokes statistics.
 *
 * For order r, an observation of <S_n^r> along n is one linear equation in the
 * (r+1)(r+2)/2 values of the raw pack. Orders are solved
 * independently from r = 1 upward; central packs then follow from the raw
 * packs of all lower orders.
 */

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include <polmoments/moment_engine.hpp>

namespace polmoments {

enum class DirectionVariant {
  Paper,    ///< ten directions built around arccos(sqrt(2/3))
  Minimal,  ///< the six second-order directions plus four supplements
};

struct DirectionSet {
  std::string label;  ///< canonical-2nd, canonical-3rd-paper, canonical-3rd-minimal, custom, ...
  std::vector<Direction> directions;

  std::size_t size() const { return directions.size(); }
};

/// Throws SpecError if two directions are closer than 1e-9 rad.
DirectionSet make_direction_set(std::string label, std::vector<Direction> directions);

/// order 1-2: the three axes, then (pi/2,pi/4), (pi/4,0), (pi/4,pi/2).
/// order 3: ten directions, see DirectionVariant.
DirectionSet canonical_directions(int order, DirectionVariant variant = DirectionVariant::Paper);

/// Directions sufficient for all orders up to max_order: the canonical sets
/// through order 3, a Fibonacci set of (R+1)(R+2) points beyond.
DirectionSet observation_plan(int max_order, DirectionVariant variant = DirectionVariant::Paper);

struct DesignMatrix {
  int order = 0;
  Eigen::MatrixXd matrix;  ///< row per direction, column per multi-index
  int rank = 0;
  double condition = 0.0;  ///< sigma_max / sigma_min; infinity when rank deficient
};

DesignMatrix design_matrix(const std::vector<Direction>& directions, int order);

struct Observation {
  Direction direction;
  int order = 1;
  double value = 0.0;
  std::optional<double> stderr_value;
};

struct MomentObservations {
  std::optional<int> manifold;  ///< nullopt: excitation averaged or unknown
  std::vector<Observation> items;

  /// Highest order present; throws SpecError unless orders are 1..R contiguous.
  int max_order() const;
  std::vector<Observation> of_order(int order) const;
};

/// Noiseless observations of <S_n^r> for every direction and r = 1..max_order.
MomentObservations exact_observations(const PolarizationState& state, const std::vector<Direction>& directions,
                                      int max_order, const MomentSelection& sel);

struct OrderSolution {
  int order = 0;
  int equations = 0;
  int rank = 0;
  double condition = 0.0;
  double residual = 0.0;  ///< unweighted ||A x - b||
  bool weighted = false;
  /// Covariance of the pack values M_abc, when every observation has a stderr.
  std::optional<Eigen::MatrixXd> covariance;
};

struct ReconstructionResult {
  MomentTensors tensors;
  std::vector<OrderSolution> orders;
  double residual_norm = 0.0;
  double max_condition = 0.0;
  std::vector<std::string> warnings;
  /// Per-order standard errors of raw and central pack values (first-order
  /// delta method; cross-order correlations neglected).
  std::optional<std::vector<std::vector<double>>> raw_stderr;
  std::optional<std::vector<std::vector<double>>> central_stderr;
};

struct ReconstructOptions {
  double rank_tolerance = 1e-10;    ///< relative singular-value cutoff
  double condition_warning = 1e6;
};

/// Solves order by order up to max_order (0: all orders present).
/// Throws RankDeficientError when some order is underdetermined.
ReconstructionResult reconstruct(const MomentObservations& obs, int max_order = 0,
                                 const ReconstructOptions& options = {});

struct ParameterCounts {
  int photons = 0;
  std::vector<long> per_order;  ///< (r+1)(r+2)/2 for r = 1..N
  long cumulative = 0;          ///< N(N^2+6N+11)/6
  long full_tomography = 0;     ///< N(N^3+6N^2+13N+12)/4
  long state_parameters = 0;    ///< N(N+2)
  long coherence_matrix = 0;    ///< N(2N^2+9N+13)/6
};

ParameterCounts parameter_counts(int photons);

/// (r+1)(r+2)/2.
long terms_per_order(int order);

struct MisalignmentFit {
  Mat3 rotation = Mat3::Identity();  ///< maps the reference frame onto the measured one
  double angle_degrees = 0.0;
  Vec3 axis = Vec3::UnitZ();
  double residual_before = 0.0;  ///< ||Gamma_measured - Gamma_reference||_F
  double residual_after = 0.0;   ///< ||R^T Gamma_measured R - Gamma_reference||_F
  bool degenerate = false;       ///< reference eigenframe not unique; alignment restricted
  std::string note;
};

MisalignmentFit misalignment_fit(const MomentTensors& measured, const MomentTensors& reference);
MisalignmentFit misalignment_fit(const ReconstructionResult& result, const MomentTensors& reference);

}  // namespace polmoments
