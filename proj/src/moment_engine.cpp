// Copyright 2026 The polmoments Authors
// SPDX-License-Identifier: Apache-2.0

#include <polmoments/moment_engine.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace polmoments {

namespace {

// Weight assigned to the unpolarized remainder (vacuum plus any truncated
// tail) so that all averaged moments are taken against a unit-trace operator.
double remainder_weight(const PolarizationState& state) {
  double sum = 0.0;
  for (const auto& m : state.manifolds()) sum += m.weight;
  return std::max(0.0, 1.0 - sum);
}

const ManifoldDensity& require_manifold(const PolarizationState& state, int photons) {
  const auto* m = state.find(photons);
  if (!m) throw SpecError("state has no weight on manifold N=" + std::to_string(photons));
  return m->density;
}

double power_trace(const CMatrix& rho, const CMatrix& op, int order) {
  CMatrix acc = rho;
  for (int k = 0; k < order; ++k) acc = acc * op;
  return acc.trace().real();
}

void check_order(int order) {
  if (order < 1) throw SpecError("moment order must be at least 1");
}

// Raw packs of orders 1..R on one manifold. Every word in {1,2,3}^r is
// visited once with shared prefix products; a word's trace is accumulated on
// its multi-index and divided by the number of words sharing it.
std::vector<SymmetricPack> manifold_raw_packs(const ManifoldDensity& density, int max_order) {
  std::vector<SymmetricPack> packs;
  for (int r = 1; r <= max_order; ++r) packs.emplace_back(r);
  if (density.photons() == 0) return packs;
  const auto& ops = stokes(density.photons());
  const auto comps = ops.vector_components();

  struct Frame {
    CMatrix prefix;
    int count[3];
  };
  std::vector<Frame> stack;
  stack.push_back({density.matrix(), {0, 0, 0}});
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    const int depth = f.count[0] + f.count[1] + f.count[2];
    if (depth == max_order) continue;
    for (int j = 0; j < 3; ++j) {
      Frame next{f.prefix * *comps[j], {f.count[0], f.count[1], f.count[2]}};
      ++next.count[j];
      packs[depth].at({next.count[0], next.count[1], next.count[2]}) += next.prefix.trace().real();
      stack.push_back(std::move(next));
    }
  }
  for (auto& p : packs) {
    const auto& idx = SymmetricPack::indices(p.order());
    for (std::size_t i = 0; i < idx.size(); ++i) p[i] /= multinomial(idx[i]);
  }
  return packs;
}

}  // namespace

MomentSelection MomentSelection::natural(const PolarizationState& state) {
  if (state.single_manifold()) return manifold(state.manifolds()[0].density.photons());
  return averaged();
}

// ---------------------------------------------------------------------------

Vec3 MomentTensors::stokes_vector() const {
  if (raw.empty()) return Vec3::Zero();
  return Vec3(raw[0][0], raw[0][1], raw[0][2]);
}

Mat3 MomentTensors::second_raw_matrix() const {
  if (max_order < 2) throw SpecError("second-order moments not available");
  const auto& p = raw[1];
  Mat3 m;
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      int c[3] = {0, 0, 0};
      ++c[j];
      ++c[k];
      m(j, k) = p.at({c[0], c[1], c[2]});
    }
  }
  return m;
}

double MomentTensors::raw_moment(const Vec3& n, int order) const {
  check_order(order);
  if (order > max_order) throw SpecError("order exceeds available tensors");
  return raw[order - 1].evaluate(n);
}

double MomentTensors::central_moment(const Vec3& n, int order) const {
  check_order(order);
  if (order > max_order) throw SpecError("order exceeds available tensors");
  return central[order - 1].evaluate(n);
}

MomentTensors MomentTensors::from_raw(std::vector<SymmetricPack> raw, std::optional<int> manifold) {
  MomentTensors t;
  t.manifold = manifold;
  t.max_order = static_cast<int>(raw.size());
  t.central = central_from_raw(raw);
  t.raw = std::move(raw);
  return t;
}

// ---------------------------------------------------------------------------

double raw_moment(const PolarizationState& state, const Direction& dir, int order, const MomentSelection& sel) {
  check_order(order);
  if (!sel.is_averaged()) {
    if (sel.photons() == 0) return 0.0;
    const auto& d = require_manifold(state, sel.photons());
    return power_trace(d.matrix(), stokes_in_direction(stokes(d.photons()), dir), order);
  }
  double acc = 0.0;
  for (const auto& m : state.manifolds()) {
    acc += m.weight * power_trace(m.density.matrix(), stokes_in_direction(stokes(m.density.photons()), dir), order);
  }
  return acc;
}

double central_moment(const PolarizationState& state, const Direction& dir, int order, const MomentSelection& sel) {
  check_order(order);
  if (!sel.is_averaged()) {
    if (sel.photons() == 0) return 0.0;
    const auto& d = require_manifold(state, sel.photons());
    const CMatrix sn = stokes_in_direction(stokes(d.photons()), dir);
    const double mean = power_trace(d.matrix(), sn, 1);
    const CMatrix delta = sn - mean * CMatrix::Identity(sn.rows(), sn.cols());
    return power_trace(d.matrix(), delta, order);
  }
  const double mean = raw_moment(state, dir, 1, sel);
  double acc = remainder_weight(state) * std::pow(-mean, order);
  for (const auto& m : state.manifolds()) {
    const CMatrix sn = stokes_in_direction(stokes(m.density.photons()), dir);
    const CMatrix delta = sn - mean * CMatrix::Identity(sn.rows(), sn.cols());
    acc += m.weight * power_trace(m.density.matrix(), delta, order);
  }
  return acc;
}

Vec3 stokes_vector(const PolarizationState& state, const MomentSelection& sel) {
  return moment_tensors(state, 1, sel).stokes_vector();
}

MomentTensors moment_tensors(const PolarizationState& state, int max_order, const MomentSelection& sel) {
  check_order(max_order);
  if (!sel.is_averaged()) {
    if (sel.photons() == 0) {
      std::vector<SymmetricPack> zero;
      for (int r = 1; r <= max_order; ++r) zero.emplace_back(r);
      return MomentTensors::from_raw(std::move(zero), 0);
    }
    return MomentTensors::from_raw(manifold_raw_packs(require_manifold(state, sel.photons()), max_order),
                                   sel.photons());
  }
  std::vector<SymmetricPack> acc;
  for (int r = 1; r <= max_order; ++r) acc.emplace_back(r);
  for (const auto& m : state.manifolds()) {
    const auto packs = manifold_raw_packs(m.density, max_order);
    for (int r = 0; r < max_order; ++r)
      for (std::size_t i = 0; i < acc[r].size(); ++i) acc[r][i] += m.weight * packs[r][i];
  }
  return MomentTensors::from_raw(std::move(acc), std::nullopt);
}

// ---------------------------------------------------------------------------

CovarianceMatrix make_covariance(const Mat3& gamma, double degeneracy_tolerance) {
  CovarianceMatrix c;
  c.gamma = 0.5 * (gamma + gamma.transpose());
  Eigen::SelfAdjointEigenSolver<Mat3> solver(c.gamma);
  for (int i = 0; i < 3; ++i) {
    c.eigenvalues(i) = solver.eigenvalues()(2 - i);
    Vec3 v = solver.eigenvectors().col(2 - i);
    for (int k = 0; k < 3; ++k) {
      if (std::abs(v(k)) > 1e-12) {
        if (v(k) < 0) v = -v;
        break;
      }
    }
    c.eigenvectors.col(i) = v;
  }
  const double scale = std::max(1.0, std::abs(c.eigenvalues(0)));
  c.degenerate = std::abs(c.eigenvalues(0) - c.eigenvalues(1)) <= degeneracy_tolerance * scale ||
                 std::abs(c.eigenvalues(1) - c.eigenvalues(2)) <= degeneracy_tolerance * scale;
  return c;
}

CovarianceMatrix covariance(const MomentTensors& tensors) {
  if (tensors.max_order < 2) throw SpecError("covariance needs second-order moments");
  const auto& p = tensors.central[1];
  Mat3 g;
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      int c[3] = {0, 0, 0};
      ++c[j];
      ++c[k];
      g(j, k) = p.at({c[0], c[1], c[2]});
    }
  }
  return make_covariance(g);
}

CovarianceMatrix covariance(const PolarizationState& state, const MomentSelection& sel) {
  return covariance(moment_tensors(state, 2, sel));
}

UncertaintyReport uncertainty_check(const PolarizationState& state, int photons) {
  if (photons < 1) throw SpecError("uncertainty relation needs N >= 1");
  const auto cov = covariance(state, MomentSelection::manifold(photons));
  UncertaintyReport u;
  u.lower = 2.0 * photons;
  u.sum = cov.gamma.trace();
  u.upper = static_cast<double>(photons) * (photons + 2);
  constexpr double tol = 1e-10;
  const double scale = std::max(1.0, u.upper);
  if (u.sum < u.lower - tol * scale || u.sum > u.upper + tol * scale) {
    throw InvalidStateError("uncertainty relation violated on N=" + std::to_string(photons) +
                            ": sum of variances " + std::to_string(u.sum));
  }
  u.lower_saturated = std::abs(u.sum - u.lower) <= 1e-9 * scale;
  u.upper_saturated = std::abs(u.sum - u.upper) <= 1e-9 * scale;
  return u;
}

UncertaintyReport uncertainty_check(const PolarizationState& state) {
  if (!state.single_manifold()) throw SpecError("uncertainty check needs a single-manifold state");
  return uncertainty_check(state, state.manifolds()[0].density.photons());
}

// ---------------------------------------------------------------------------

double SphereScan::display_value(std::size_t i) const {
  return order % 2 == 1 ? std::abs(central[i]) : central[i];
}

SphereScan sphere_scan(const PolarizationState& state, int order, const GridSpec& grid, const MomentSelection& sel) {
  check_order(order);
  SphereScan scan;
  scan.grid = grid;
  scan.order = order;
  scan.manifold = sel.maybe_photons();
  scan.directions = make_grid(grid);
  if (scan.directions.empty()) throw SpecError("empty scan grid");
  const auto tensors = moment_tensors(state, order, sel);
  scan.central.reserve(scan.directions.size());
  scan.raw.reserve(scan.directions.size());
  for (const auto& d : scan.directions) {
    scan.central.push_back(tensors.central_moment(d.unit(), order));
    scan.raw.push_back(tensors.raw_moment(d.unit(), order));
  }
  return scan;
}

double excitation_average(const PolarizationState& state,
                          const std::function<double(const ManifoldDensity&)>& per_manifold) {
  double acc = 0.0;
  for (const auto& m : state.manifolds()) acc += m.weight * per_manifold(m.density);
  return acc;
}

}  // namespace polmoments
