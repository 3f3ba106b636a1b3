// Copyright 2026 The polmoments Authors
// SPDX-License-Identifier: Apache-2.0

#include <polmoments/classifier.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include <polmoments/sphere_grid.hpp>
#include <polmoments/tomography.hpp>

namespace polmoments {

namespace {

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  double spread() const { return hi - lo; }
  double mid() const { return 0.5 * (hi + lo); }
};

double clean(double v) { return std::abs(v) < 1e-12 ? 0.0 : v; }

}  // namespace

bool IsotropyReport::unpolarized_to(int order) const {
  for (const auto& o : orders)
    if (o.order <= order && !o.isotropic) return false;
  return order <= static_cast<int>(orders.size());
}

std::vector<Direction> isotropy_grid(int max_order) {
  const int count = std::max(4 * 2 * (max_order + 1) * (max_order + 1), 64);
  auto dirs = make_grid(FibonacciGrid{count});
  for (const auto& d : canonical_directions(2).directions) dirs.push_back(d);
  for (const auto& d : canonical_directions(3, DirectionVariant::Paper).directions) dirs.push_back(d);
  for (const auto& d : canonical_directions(3, DirectionVariant::Minimal).directions) dirs.push_back(d);
  return dirs;
}

IsotropyReport isotropy_test(const MomentTensors& tensors, const IsotropyOptions& options) {
  if (tensors.max_order < 1) throw SpecError("isotropy test needs tensors of order >= 1");
  IsotropyReport report;
  report.manifold = tensors.manifold;
  report.tolerance = options.tolerance;
  const auto grid = isotropy_grid(tensors.max_order);
  report.grid_points = grid.size();
  for (int r = 1; r <= tensors.max_order; ++r) {
    Range raw, central;
    for (const auto& d : grid) {
      raw.add(tensors.raw_moment(d.unit(), r));
      central.add(tensors.central_moment(d.unit(), r));
    }
    OrderIsotropy o;
    o.order = r;
    o.raw_spread = raw.spread();
    o.central_spread = central.spread();
    o.raw_isotropic = o.raw_spread < options.tolerance;
    o.central_isotropic = o.central_spread < options.tolerance;
    if (o.raw_isotropic) o.raw_constant = clean(raw.mid());
    if (o.central_isotropic) o.central_constant = clean(central.mid());
    o.isotropic = r == 1 ? o.raw_isotropic : o.central_isotropic;
    o.spread = r == 1 ? o.raw_spread : o.central_spread;
    report.orders.push_back(o);
  }
  return report;
}

IsotropyReport isotropy_test(const PolarizationState& state, int max_order, const MomentSelection& sel,
                             const IsotropyOptions& options) {
  return isotropy_test(moment_tensors(state, max_order, sel), options);
}

// ---------------------------------------------------------------------------

const std::vector<PolarizationClass>& three_photon_classes() {
  static const std::vector<PolarizationClass> rows = {
      {{true, true, true}, 1, "unpolarized to third order"},
      {{true, true, false}, 2, "unpolarized to second order, third-order structure"},
      {{true, false, true}, 3, "hidden second-order structure, isotropic third order"},
      {{true, false, false}, 4, "hidden second- and third-order structure"},
      {{false, true, false}, 5, "polarized, isotropic second order"},
      {{false, false, false}, 6, "polarized at every order"},
  };
  return rows;
}

PolarizationClass classify(const IsotropyReport& report, bool require_realizable) {
  if (report.orders.size() < 3) throw ClassificationError("classification needs isotropy verdicts for orders 1-3");
  PolarizationClass c;
  for (int r = 0; r < 3; ++r) c.invariant[r] = report.orders[r].isotropic;
  for (const auto& row : three_photon_classes()) {
    if (row.invariant == c.invariant) return row;
  }
  c.row = 0;
  c.label = "unrealizable for three photons";
  if (require_realizable) {
    throw ClassificationError(std::string("invariance triple (") + (c.invariant[0] ? "Yes" : "No") + ", " +
                              (c.invariant[1] ? "Yes" : "No") + ", " + (c.invariant[2] ? "Yes" : "No") +
                              ") is not one of the realizable three-photon classes");
  }
  return c;
}

PolarizationClass classify3(const PolarizationState& state, const IsotropyOptions& options) {
  if (!state.single_manifold() || state.manifolds()[0].density.photons() != 3)
    throw ClassificationError("three-photon classification needs a state supported on N=3 only");
  return classify(isotropy_test(state, 3, MomentSelection::manifold(3), options), true);
}

// ---------------------------------------------------------------------------

CMatrix unpol_family_matrix(const UnpolFamilyParams& p) {
  const double x = p.rho11;
  if (x < 1.0 / 6.0 - 1e-12 || x > 1.0 / 3.0 + 1e-12) throw SpecError("rho11 must lie in [1/6, 1/3]");
  const double r3 = std::sqrt(3.0);
  CMatrix m(4, 4);
  m << x, p.rho12, p.rho13, p.rho14,                                                  //
      std::conj(p.rho12), 1 - 3 * x, -r3 * p.rho12, -p.rho13,                         //
      std::conj(p.rho13), -r3 * std::conj(p.rho12), 3 * x - 0.5, p.rho12,             //
      std::conj(p.rho14), -std::conj(p.rho13), std::conj(p.rho12), 0.5 - x;
  return m;
}

PolarizationState unpol_family(const UnpolFamilyParams& params) {
  const CMatrix listed = unpol_family_matrix(params);
  // Listed row i is |3-i, i>, i.e. library index 3-i.
  CMatrix rho(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) rho(3 - i, 3 - j) = listed(i, j);
  return PolarizationState::pure_manifold(ManifoldDensity(3, rho));
}

UnpolFamilyParams sample_unpol_family(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> phase(-kPi, kPi);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    UnpolFamilyParams p;
    p.rho11 = 1.0 / 6.0 + unit(rng) / 6.0;
    const double x = p.rho11;
    const double d[4] = {x, 1 - 3 * x, 3 * x - 0.5, 0.5 - x};
    const double b12 = std::sqrt(std::min({d[0] * d[1], d[1] * d[2] / 3.0, d[2] * d[3]}));
    const double b13 = std::sqrt(std::min(d[0] * d[2], d[1] * d[3]));
    const double b14 = std::sqrt(d[0] * d[3]);
    p.rho12 = std::polar(b12 * unit(rng), phase(rng));
    p.rho13 = std::polar(b13 * unit(rng), phase(rng));
    p.rho14 = std::polar(b14 * unit(rng), phase(rng));
    const auto diag = diagnose_matrix(3, unpol_family_matrix(p));
    if (diag.positive()) return p;
  }
  UnpolFamilyParams fallback;
  fallback.rho11 = 0.25;
  return fallback;
}

PurityObstruction purity_obstruction_check(std::size_t samples, std::uint64_t seed) {
  PurityObstruction out;
  // First two conditions: x(1-3x) = (1-3x)(3x-1/2)/3 has the single root x = 1/3,
  // which forces |rho12|^2 = 0; the third needs (3x-1/2)(1/2-x) = 0.
  const double x = 1.0 / 3.0;
  out.algebraic_rho11 = x;
  out.third_condition_residual = (3 * x - 0.5) * (0.5 - x);
  out.pure_state_possible = std::abs(out.third_condition_residual) < 1e-15;

  std::mt19937_64 rng(seed);
  out.samples = samples;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto p = sample_unpol_family(rng);
    const CMatrix m = unpol_family_matrix(p);
    if (!diagnose_matrix(3, m).positive()) continue;
    ++out.psd_members;
    const double purity = m.cwiseAbs2().sum();
    if (purity > out.max_purity) {
      out.max_purity = purity;
      out.best = p;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct IsotropicSample {
  bool isotropic = false;
  double sum = 0.0;
};

IsotropicSample evaluate_diagonal(int photons, const Eigen::VectorXd& w) {
  CMatrix rho = CMatrix::Zero(photons + 1, photons + 1);
  for (int m = 0; m <= photons; ++m) rho(m, m) = w(m);
  const auto state = PolarizationState::pure_manifold(ManifoldDensity(photons, rho));
  const auto cov = covariance(state, MomentSelection::manifold(photons));
  return {cov.eigenvalues(0) - cov.eigenvalues(2) < 1e-8, cov.gamma.trace()};
}

// Var(S3) minus the common transverse variance; zero iff a diagonal state
// has an isotropic covariance.
double diagonal_gap(int photons, const Eigen::VectorXd& w) {
  double m1 = 0.0, m2 = 0.0;
  for (int m = 0; m <= photons; ++m) {
    const double s = 2.0 * m - photons;
    m1 += w(m) * s;
    m2 += w(m) * s * s;
  }
  const double transverse = (static_cast<double>(photons) * (photons + 2) - m2) / 2.0;
  return (m2 - m1 * m1) - transverse;
}

}  // namespace

ConjectureProbe min_isotropy_conjecture_scan(int photons, std::size_t samples, std::uint64_t seed) {
  if (photons < 2) throw SpecError("conjecture probe needs N >= 2");
  ConjectureProbe out;
  out.photons = photons;
  out.bound = 3.0 * photons;
  out.samples = samples;
  out.min_sum_found = std::numeric_limits<double>::infinity();

  // Candidate: mixture of |N,0> and |0,N> with weights (1 +- sqrt((N-1)/N))/2.
  const double plus = 0.5 * (1.0 + std::sqrt((photons - 1.0) / photons));
  out.candidate_plus_weight = plus;
  CMatrix rho = CMatrix::Zero(photons + 1, photons + 1);
  rho(photons, photons) = plus;
  rho(0, 0) = 1.0 - plus;
  const auto candidate = PolarizationState::pure_manifold(ManifoldDensity(photons, rho));
  const auto report = isotropy_test(candidate, 2, MomentSelection::manifold(photons));
  out.candidate_spread = report.orders[1].central_spread;
  out.candidate_isotropic = report.orders[1].central_isotropic;
  out.candidate_sum = covariance(candidate, MomentSelection::manifold(photons)).gamma.trace();

  // Diagonal states: bisection along segments between random weight vectors
  // whose gap has opposite signs. For N = 3 the family members are added.
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  auto dirichlet = [&] {
    Eigen::VectorXd w(photons + 1);
    for (int m = 0; m <= photons; ++m) w(m) = expo(rng);
    return Eigen::VectorXd(w / w.sum());
  };
  out.method = "bisection on diagonal states between random Dirichlet weight vectors";
  if (photons == 3) out.method += ", plus second-order-unpolarized family members";

  for (std::size_t i = 0; i < samples; ++i) {
    if (photons == 3 && i % 2 == 1) {
      const auto member = unpol_family(sample_unpol_family(rng));
      const auto cov = covariance(member, MomentSelection::manifold(3));
      if (cov.eigenvalues(0) - cov.eigenvalues(2) < 1e-8) {
        ++out.isotropic_found;
        out.min_sum_found = std::min(out.min_sum_found, cov.gamma.trace());
      }
      continue;
    }
    const Eigen::VectorXd a = dirichlet();
    const Eigen::VectorXd b = dirichlet();
    const double ga = diagonal_gap(photons, a), gb = diagonal_gap(photons, b);
    if (ga * gb > 0) continue;
    double lo = 0.0, hi = 1.0, glo = ga;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double g = diagonal_gap(photons, (1 - mid) * a + mid * b);
      if ((g < 0) == (glo < 0)) {
        lo = mid;
        glo = g;
      } else {
        hi = mid;
      }
    }
    const auto s = evaluate_diagonal(photons, (1 - lo) * a + lo * b);
    if (!s.isotropic) continue;
    ++out.isotropic_found;
    out.min_sum_found = std::min(out.min_sum_found, s.sum);
  }
  out.counterexample = out.min_sum_found < out.bound - 1e-6;
  return out;
}

}  // namespace polmoments
