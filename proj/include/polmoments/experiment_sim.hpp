// Copyright 2026 The polmoments Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file experiment_sim.hpp
 * @brief Monte Carlo model of a photon-number-resolving Stokes measurement:
 *        basis rotation, outcome sampling, detector thinning, calibration and
 *        empirical moment estimation.
 *
 * Each measurement direction is realized by rotating the state so that S_n
 * becomes S3, then counting photons in the two output ports. An outcome class
 * (N, k) has k photons in the H port and S_n eigenvalue 2k - N.
 *
 * Detection is modelled per outcome class: a class is registered with a
 * fixed efficiency, derived from four relative detector-channel efficiencies
 * (two per port, since each port feeds a 50:50 splitter and two single-photon
 * detectors). For N = 2:
 *   k = 2: splitter * e1 * e2,  k = 0: splitter * e3 * e4,
 *   k = 1: mean(e1, e2) * mean(e3, e4),
 * where `splitter` (default 1/2) is the chance that two photons in one port
 * leave the splitter through different fibres. For N = 1 the classes use the
 * port means; other manifolds default to unit efficiency. Any class can be
 * overridden explicitly.
 */

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <polmoments/tomography.hpp>

namespace polmoments {

struct DetectorConfig {
  std::array<double, 4> channels{1.0, 1.0, 1.0, 1.0};
  double splitter = 0.5;  ///< two-photon coincidence factor for k in {0, N} at N = 2
  std::map<std::pair<int, int>, double> class_overrides;  ///< (N, k) -> efficiency
  long trials = 100000;  ///< shots per run
  int runs = 3;          ///< runs per direction
  std::uint64_t seed = 1;
  bool exact = false;  ///< expectation mode: no sampling, zero errors

  /// Unit efficiencies, no splitter loss.
  static DetectorConfig unit();
  /// "unit", "hom11" (0.91:0.91:0.82:1) or "hom20" (0.75:0.76:1:0.57).
  static DetectorConfig preset(const std::string& name);

  /// Throws SpecError on efficiencies outside (0, 1] or bad counts.
  void validate() const;

  double class_efficiency(int photons, int k) const;
};

struct OutcomeProbability {
  int photons = 0;
  int k = 0;  ///< photons in the H port
  double probability = 0.0;

  int stokes_value() const { return 2 * k - photons; }
};

struct OutcomeDistribution {
  Direction direction;
  std::vector<OutcomeProbability> outcomes;  ///< ordered by N then k
  double undetectable = 0.0;                 ///< vacuum and truncated tail
};

/// p(N, k) = p_N <k, N-k| U^dagger rho_N U |k, N-k>.
OutcomeDistribution outcome_distribution(const PolarizationState& state, const Direction& dir);

struct OutcomeCount {
  int photons = 0;
  int k = 0;
  long raw = 0;
  double calibrated = 0.0;
};

struct CountsRecord {
  Direction direction;
  int run = 0;
  long trials = 0;
  std::vector<OutcomeCount> counts;  ///< same order as the distribution
};

/// Random stream for (seed, direction index, run); independent of scheduling.
std::uint64_t stream_seed(std::uint64_t seed, std::size_t direction_index, int run);

/// Multinomial draw of `config.trials` shots thinned by class efficiencies.
/// The returned record is uncalibrated (calibrated == raw).
CountsRecord sample_counts(const OutcomeDistribution& dist, const DetectorConfig& config, std::uint64_t stream,
                           int run = 0);

/// calibrated = raw / class efficiency.
CountsRecord calibrate(const CountsRecord& record, const DetectorConfig& config);

enum class StderrMode {
  Shot,    ///< multinomial shot noise of the run mean (delta method)
  RunStd,  ///< sample standard deviation over runs
  RunSem,  ///< RunStd / sqrt(runs)
};

struct EmpiricalMoment {
  Direction direction;
  int order = 1;
  double mean = 0.0;      ///< mean over runs
  double run_std = 0.0;   ///< sample standard deviation over runs (0 for one run)
  double run_sem = 0.0;   ///< run_std / sqrt(runs)
  double shot_stderr = 0.0;
};

struct ProtocolOptions {
  int max_order = 2;
  std::optional<int> manifold;  ///< default: the state's only manifold
  StderrMode stderr_mode = StderrMode::Shot;
};

struct ProtocolResult {
  int photons = 0;
  std::vector<CountsRecord> counts;  ///< empty in exact mode
  MomentObservations observations;
  std::vector<EmpiricalMoment> empirical;
};

/// Estimate of <S_n^r> on manifold N from one calibrated record.
double record_moment(const CountsRecord& record, int photons, int order);
/// Shot-noise variance of record_moment under the multinomial model.
double record_moment_variance(const CountsRecord& record, const DetectorConfig& config, int photons, int order);

ProtocolResult run_protocol(const PolarizationState& state, const DirectionSet& dirs, const DetectorConfig& config,
                            const ProtocolOptions& options = {});

}  // namespace polmoments
