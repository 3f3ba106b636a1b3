// Copyright 2026 The polmoments Authors
// SPDX-License-Identifier: Apache-2.0

#include <polmoments/experiment_sim.hpp>

#include <algorithm>
#include <cmath>
#include <random>

namespace polmoments {

DetectorConfig DetectorConfig::unit() {
  DetectorConfig c;
  c.splitter = 1.0;
  return c;
}

DetectorConfig DetectorConfig::preset(const std::string& name) {
  DetectorConfig c;
  if (name == "unit") return unit();
  if (name == "hom11") {
    c.channels = {0.91, 0.91, 0.82, 1.0};
  } else if (name == "hom20") {
    c.channels = {0.75, 0.76, 1.0, 0.57};
  } else {
    throw SpecError("unknown detector preset: " + name);
  }
  return c;
}

void DetectorConfig::validate() const {
  for (double e : channels)
    if (!(e > 0.0 && e <= 1.0)) throw SpecError("channel efficiencies must lie in (0, 1]");
  if (!(splitter > 0.0 && splitter <= 1.0)) throw SpecError("splitter factor must lie in (0, 1]");
  for (const auto& [key, e] : class_overrides) {
    if (!(e > 0.0 && e <= 1.0)) throw SpecError("class efficiencies must lie in (0, 1]");
    if (key.first < 0 || key.second < 0 || key.second > key.first) throw SpecError("invalid outcome class");
  }
  if (trials < 1) throw SpecError("trials must be at least 1");
  if (runs < 1) throw SpecError("runs must be at least 1");
}

double DetectorConfig::class_efficiency(int photons, int k) const {
  if (auto it = class_overrides.find({photons, k}); it != class_overrides.end()) return it->second;
  const double h = 0.5 * (channels[0] + channels[1]);
  const double v = 0.5 * (channels[2] + channels[3]);
  if (photons == 1) return k == 1 ? h : v;
  if (photons == 2) {
    if (k == 2) return splitter * channels[0] * channels[1];
    if (k == 0) return splitter * channels[2] * channels[3];
    return h * v;
  }
  return 1.0;
}

// ---------------------------------------------------------------------------

OutcomeDistribution outcome_distribution(const PolarizationState& state, const Direction& dir) {
  OutcomeDistribution dist;
  dist.direction = dir;
  const auto rotated = rotate_state(state, dir);
  double total = 0.0;
  for (const auto& m : rotated.manifolds()) {
    const auto& rho = m.density.matrix();
    for (int k = 0; k <= m.density.photons(); ++k) {
      const double p = m.weight * std::max(0.0, rho(k, k).real());
      dist.outcomes.push_back({m.density.photons(), k, p});
      total += p;
    }
  }
  dist.undetectable = std::max(0.0, 1.0 - total);
  return dist;
}

std::uint64_t stream_seed(std::uint64_t seed, std::size_t direction_index, int run) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(direction_index), static_cast<std::uint32_t>(run), 0x9e3779b9u};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

CountsRecord sample_counts(const OutcomeDistribution& dist, const DetectorConfig& config, std::uint64_t stream,
                           int run) {
  config.validate();
  std::mt19937_64 rng(stream);
  CountsRecord rec;
  rec.direction = dist.direction;
  rec.run = run;
  rec.trials = config.trials;

  // Sequential binomials: each detected class, then the lost remainder.
  long remaining = config.trials;
  double mass_left = 1.0;
  for (const auto& o : dist.outcomes) {
    const double q = o.probability * config.class_efficiency(o.photons, o.k);
    long n = 0;
    if (remaining > 0 && q > 0.0 && mass_left > 0.0) {
      const double cond = std::clamp(q / mass_left, 0.0, 1.0);
      n = std::binomial_distribution<long>(remaining, cond)(rng);
    }
    remaining -= n;
    mass_left -= q;
    rec.counts.push_back({o.photons, o.k, n, static_cast<double>(n)});
  }
  return rec;
}

CountsRecord calibrate(const CountsRecord& record, const DetectorConfig& config) {
  CountsRecord out = record;
  for (auto& c : out.counts) {
    const double e = config.class_efficiency(c.photons, c.k);
    if (!(e > 0.0)) throw SpecError("cannot calibrate with zero efficiency");
    c.calibrated = static_cast<double>(c.raw) / e;
  }
  return out;
}

// ---------------------------------------------------------------------------

double record_moment(const CountsRecord& record, int photons, int order) {
  double num = 0.0, den = 0.0;
  for (const auto& c : record.counts) {
    if (c.photons != photons) continue;
    num += c.calibrated * std::pow(2.0 * c.k - photons, order);
    den += c.calibrated;
  }
  if (den <= 0.0) throw SpecError("no counts on manifold N=" + std::to_string(photons));
  return num / den;
}

double record_moment_variance(const CountsRecord& record, const DetectorConfig& config, int photons, int order) {
  // m = sum_k (f_k/e_k) x_k / sum_k (f_k/e_k), f_k = raw_k / T multinomial.
  const double t = static_cast<double>(record.trials);
  const double m = record_moment(record, photons, order);
  double w = 0.0;
  for (const auto& c : record.counts)
    if (c.photons == photons) w += static_cast<double>(c.raw) / t / config.class_efficiency(c.photons, c.k);
  double s1 = 0.0, s2 = 0.0;
  for (const auto& c : record.counts) {
    if (c.photons != photons) continue;
    const double q = static_cast<double>(c.raw) / t;
    const double g = (std::pow(2.0 * c.k - photons, order) - m) / (config.class_efficiency(c.photons, c.k) * w);
    s1 += q * g;
    s2 += q * g * g;
  }
  return std::max(0.0, (s2 - s1 * s1) / t);
}

ProtocolResult run_protocol(const PolarizationState& state, const DirectionSet& dirs, const DetectorConfig& config,
                            const ProtocolOptions& options) {
  config.validate();
  if (options.max_order < 1) throw SpecError("protocol max_order must be at least 1");
  int photons = 0;
  if (options.manifold) {
    photons = *options.manifold;
    if (!state.has_manifold(photons)) throw SpecError("state has no weight on manifold N=" + std::to_string(photons));
  } else {
    if (!state.single_manifold())
      throw SpecError("state spans several manifolds; choose the manifold to measure");
    photons = state.manifolds()[0].density.photons();
  }

  ProtocolResult result;
  result.photons = photons;
  result.observations.manifold = photons;

  if (config.exact) {
    const auto obs = exact_observations(state, dirs.directions, options.max_order, MomentSelection::manifold(photons));
    result.observations = obs;
    for (const auto& o : obs.items) result.empirical.push_back({o.direction, o.order, o.value, 0.0, 0.0, 0.0});
    return result;
  }

  for (std::size_t d = 0; d < dirs.directions.size(); ++d) {
    const auto dist = outcome_distribution(state, dirs.directions[d]);
    std::vector<CountsRecord> runs;
    for (int run = 0; run < config.runs; ++run) {
      runs.push_back(calibrate(sample_counts(dist, config, stream_seed(config.seed, d, run), run), config));
    }
    for (int r = 1; r <= options.max_order; ++r) {
      EmpiricalMoment em;
      em.direction = dirs.directions[d];
      em.order = r;
      std::vector<double> values;
      double shot_var = 0.0;
      for (const auto& rec : runs) {
        values.push_back(record_moment(rec, photons, r));
        shot_var += record_moment_variance(rec, config, photons, r);
      }
      const double n = static_cast<double>(values.size());
      for (double v : values) em.mean += v / n;
      if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - em.mean) * (v - em.mean);
        em.run_std = std::sqrt(ss / (n - 1));
        em.run_sem = em.run_std / std::sqrt(n);
      }
      em.shot_stderr = std::sqrt(shot_var) / n;
      double se = em.shot_stderr;
      if (options.stderr_mode == StderrMode::RunStd) se = em.run_std;
      if (options.stderr_mode == StderrMode::RunSem) se = em.run_sem;
      result.observations.items.push_back({em.direction, r, em.mean, se});
      result.empirical.push_back(em);
    }
    for (auto& rec : runs) result.counts.push_back(std::move(rec));
  }
  return result;
}

}  // namespace polmoments
