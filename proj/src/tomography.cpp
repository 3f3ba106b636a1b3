// Copyright 2026 The polmoments Authors
// SPDX-License-Identifier: Apache-2.0

#include <polmoments/tomography.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace polmoments {

namespace {

constexpr double kRad2Deg = 180.0 / kPi;

struct SvdSummary {
  int rank = 0;
  double condition = std::numeric_limits<double>::infinity();
};

SvdSummary summarize(const Eigen::JacobiSVD<Eigen::MatrixXd>& svd, Eigen::Index cols, double tol) {
  SvdSummary s;
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return s;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * sv(0)) ++s.rank;
  if (s.rank == cols) s.condition = sv(0) / sv(sv.size() - 1);
  return s;
}

Mat3 rotation_between(const Vec3& from, const Vec3& to) {
  const Vec3 a = from.normalized();
  const Vec3 b = to.normalized();
  const Vec3 cross = a.cross(b);
  const double s = cross.norm();
  const double c = std::clamp(a.dot(b), -1.0, 1.0);
  if (s < 1e-15) {
    if (c > 0) return Mat3::Identity();
    // Antiparallel: half-turn about any axis perpendicular to a.
    Vec3 perp = a.cross(Vec3::UnitX());
    if (perp.norm() < 1e-8) perp = a.cross(Vec3::UnitY());
    return so3_rotation(perp.normalized(), kPi);
  }
  return so3_rotation(cross / s, std::atan2(s, c));
}

double rotation_angle(const Mat3& r) { return std::acos(std::clamp((r.trace() - 1.0) / 2.0, -1.0, 1.0)); }

// Index of the eigenvalue that differs from the other two, or -1.
int unique_index(const CovarianceMatrix& c, double tol) {
  const Vec3& e = c.eigenvalues;
  const double scale = std::max(1.0, std::abs(e(0)));
  const bool d01 = std::abs(e(0) - e(1)) <= tol * scale;
  const bool d12 = std::abs(e(1) - e(2)) <= tol * scale;
  if (d01 && d12) return -1;
  if (d01) return 2;
  if (d12) return 0;
  return 3;  // nondegenerate
}

}  // namespace

DirectionSet make_direction_set(std::string label, std::vector<Direction> directions) {
  for (std::size_t i = 0; i < directions.size(); ++i)
    for (std::size_t j = i + 1; j < directions.size(); ++j)
      if (directions[i].angle_to(directions[j]) <= 1e-9)
        throw SpecError("duplicate direction in set '" + label + "'");
  return DirectionSet{std::move(label), std::move(directions)};
}

DirectionSet canonical_directions(int order, DirectionVariant variant) {
  using D = Direction;
  std::vector<Direction> six = {D::from_angles(kPi / 2, 0),      D::from_angles(kPi / 2, kPi / 2),
                                D::from_angles(0, 0),            D::from_angles(kPi / 2, kPi / 4),
                                D::from_angles(kPi / 4, 0),      D::from_angles(kPi / 4, kPi / 2)};
  if (order == 1 || order == 2) return make_direction_set("canonical-2nd", six);
  if (order != 3) throw SpecError("canonical direction sets exist for orders 1-3 only");
  if (variant == DirectionVariant::Minimal) {
    auto dirs = six;
    for (auto [t, p] : {std::pair{kPi / 6, kPi / 6}, {kPi / 6, kPi / 3}, {kPi / 3, kPi / 6}, {kPi / 3, kPi / 3}})
      dirs.push_back(D::from_angles(t, p));
    return make_direction_set("canonical-3rd-minimal", dirs);
  }
  const double phi1 = std::acos(std::sqrt(2.0 / 3.0));
  std::vector<Direction> ten = {
      D::from_angles(0, 0),
      D::from_angles(kPi / 2, 0),
      D::from_angles(kPi / 2, kPi / 2),
      D::from_angles(kPi / 2, phi1),
      D::from_angles(kPi / 2, -phi1),
      D::from_angles(kPi / 2 - phi1, 0),
      D::from_angles(kPi / 2 + phi1, 0),
      D::from_angles(kPi / 2 - phi1, kPi / 2),
      D::from_angles(kPi / 2 + phi1, kPi / 2),
      D::from_angles(kPi / 2 - phi1, kPi / 4),
  };
  return make_direction_set("canonical-3rd-paper", ten);
}

DirectionSet observation_plan(int max_order, DirectionVariant variant) {
  if (max_order < 1) throw SpecError("observation plan needs max_order >= 1");
  if (max_order <= 3) return canonical_directions(std::max(max_order, 2) == 2 ? 2 : 3, variant);
  const int count = (max_order + 1) * (max_order + 2);
  auto dirs = make_grid(FibonacciGrid{count});
  return make_direction_set("fibonacci-" + std::to_string(count), std::move(dirs));
}

long terms_per_order(int order) {
  if (order < 0) throw SpecError("order must be non-negative");
  return static_cast<long>(order + 1) * (order + 2) / 2;
}

DesignMatrix design_matrix(const std::vector<Direction>& directions, int order) {
  if (order < 1) throw SpecError("design matrix order must be at least 1");
  DesignMatrix d;
  d.order = order;
  const auto cols = static_cast<Eigen::Index>(terms_per_order(order));
  d.matrix.resize(static_cast<Eigen::Index>(directions.size()), cols);
  for (std::size_t i = 0; i < directions.size(); ++i) {
    const auto row = SymmetricPack::monomial_row(order, directions[i].unit());
    for (Eigen::Index k = 0; k < cols; ++k) d.matrix(static_cast<Eigen::Index>(i), k) = row[k];
  }
  if (directions.empty()) {
    d.condition = std::numeric_limits<double>::infinity();
    return d;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(d.matrix);
  const auto s = summarize(svd, cols, 1e-10);
  d.rank = s.rank;
  d.condition = s.condition;
  return d;
}

// ---------------------------------------------------------------------------

int MomentObservations::max_order() const {
  int hi = 0;
  for (const auto& o : items) {
    if (o.order < 1) throw SpecError("observation order must be at least 1");
    hi = std::max(hi, o.order);
  }
  for (int r = 1; r <= hi; ++r) {
    const bool present = std::any_of(items.begin(), items.end(), [r](const Observation& o) { return o.order == r; });
    if (!present) throw SpecError("observation orders are not contiguous from 1 (missing order " + std::to_string(r) + ")");
  }
  return hi;
}

std::vector<Observation> MomentObservations::of_order(int order) const {
  std::vector<Observation> out;
  for (const auto& o : items)
    if (o.order == order) out.push_back(o);
  return out;
}

MomentObservations exact_observations(const PolarizationState& state, const std::vector<Direction>& directions,
                                      int max_order, const MomentSelection& sel) {
  MomentObservations obs;
  obs.manifold = sel.maybe_photons();
  const auto tensors = moment_tensors(state, max_order, sel);
  for (const auto& d : directions)
    for (int r = 1; r <= max_order; ++r) obs.items.push_back({d, r, tensors.raw_moment(d.unit(), r), 0.0});
  return obs;
}

// ---------------------------------------------------------------------------

ReconstructionResult reconstruct(const MomentObservations& obs, int max_order, const ReconstructOptions& options) {
  const int available = obs.max_order();
  if (available == 0) throw SpecError("no observations");
  if (max_order == 0) max_order = available;
  if (max_order > available) throw SpecError("requested order exceeds observed orders");

  ReconstructionResult result;
  std::vector<SymmetricPack> raw;
  std::vector<Eigen::MatrixXd> pack_cov;
  bool have_cov = true;

  for (int r = 1; r <= max_order; ++r) {
    const auto rows = obs.of_order(r);
    std::vector<Direction> dirs;
    for (const auto& o : rows) dirs.push_back(o.direction);
    const DesignMatrix design = design_matrix(dirs, r);
    const auto cols = design.matrix.cols();
    const auto m = design.matrix.rows();

    Eigen::VectorXd b(m), sigma(m);
    bool all_sigma = true, all_positive = true;
    for (Eigen::Index i = 0; i < m; ++i) {
      b(i) = rows[i].value;
      if (!rows[i].stderr_value) {
        all_sigma = false;
        sigma(i) = 0.0;
      } else {
        sigma(i) = *rows[i].stderr_value;
        if (!(sigma(i) > 0.0)) all_positive = false;
      }
    }
    const bool weighted = all_sigma && all_positive;
    Eigen::VectorXd w_half = Eigen::VectorXd::Ones(m);
    if (weighted) w_half = sigma.cwiseInverse();

    const Eigen::MatrixXd aw = w_half.asDiagonal() * design.matrix;
    const Eigen::VectorXd bw = w_half.asDiagonal() * b;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(aw, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto s = summarize(svd, cols, options.rank_tolerance);
    if (m < cols || s.rank < cols) {
      std::ostringstream msg;
      msg << "order " << r << " design has rank " << s.rank << " with " << cols << " unknowns from " << m
          << " directions";
      throw RankDeficientError(msg.str());
    }
    const Eigen::VectorXd coef = aw.colPivHouseholderQr().solve(bw);

    OrderSolution sol;
    sol.order = r;
    sol.equations = static_cast<int>(m);
    sol.rank = s.rank;
    sol.condition = s.condition;
    sol.residual = (design.matrix * coef - b).norm();
    sol.weighted = weighted;
    if (s.condition > options.condition_warning) {
      std::ostringstream msg;
      msg << "order " << r << " design is ill-conditioned (condition " << s.condition << ")";
      result.warnings.push_back(msg.str());
    }

    if (all_sigma) {
      // P = pinv(W^1/2 A) W^1/2; Cov = P diag(sigma^2) P^T.
      const Eigen::VectorXd inv_sv = svd.singularValues().cwiseInverse();
      const Eigen::MatrixXd pinv = svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().transpose();
      const Eigen::MatrixXd p = pinv * w_half.asDiagonal();
      // Design rows carry the multinomial factors, so the unknowns are the pack values themselves.
      sol.covariance = p * sigma.cwiseAbs2().asDiagonal() * p.transpose();
      pack_cov.push_back(*sol.covariance);
    } else {
      have_cov = false;
    }

    std::vector<double> c(coef.data(), coef.data() + coef.size());
    raw.push_back(SymmetricPack(r, std::move(c)));
    result.residual_norm = std::hypot(result.residual_norm, sol.residual);
    result.max_condition = std::max(result.max_condition, s.condition);
    result.orders.push_back(std::move(sol));
  }

  result.tensors = MomentTensors::from_raw(raw, obs.manifold);

  if (have_cov) {
    std::vector<std::vector<double>> raw_se, central_se;
    for (const auto& cov : pack_cov) {
      std::vector<double> se(static_cast<std::size_t>(cov.rows()));
      for (Eigen::Index i = 0; i < cov.rows(); ++i) se[i] = std::sqrt(std::max(0.0, cov(i, i)));
      raw_se.push_back(std::move(se));
    }
    // Delta method through central_from_raw, one raw order at a time.
    std::vector<Eigen::VectorXd> central_var;
    for (int r = 1; r <= max_order; ++r) central_var.push_back(Eigen::VectorXd::Zero(terms_per_order(r)));
    for (int o = 0; o < max_order; ++o) {
      const auto n_in = static_cast<Eigen::Index>(raw[o].size());
      std::vector<Eigen::MatrixXd> jac;
      for (int r = 1; r <= max_order; ++r) jac.emplace_back(Eigen::MatrixXd::Zero(terms_per_order(r), n_in));
      for (Eigen::Index i = 0; i < n_in; ++i) {
        const double h = 1e-5 * std::max(1.0, std::abs(raw[o][i]));
        auto plus = raw, minus = raw;
        plus[o][i] += h;
        minus[o][i] -= h;
        const auto cp = central_from_raw(plus);
        const auto cm = central_from_raw(minus);
        for (int r = 0; r < max_order; ++r)
          for (std::size_t k = 0; k < cp[r].size(); ++k)
            jac[r](static_cast<Eigen::Index>(k), i) = (cp[r][k] - cm[r][k]) / (2 * h);
      }
      for (int r = 0; r < max_order; ++r)
        central_var[r] += (jac[r] * pack_cov[o] * jac[r].transpose()).diagonal();
    }
    for (const auto& v : central_var) {
      std::vector<double> se(static_cast<std::size_t>(v.size()));
      for (Eigen::Index i = 0; i < v.size(); ++i) se[i] = std::sqrt(std::max(0.0, v(i)));
      central_se.push_back(std::move(se));
    }
    result.raw_stderr = std::move(raw_se);
    result.central_stderr = std::move(central_se);
  }
  return result;
}

// ---------------------------------------------------------------------------

ParameterCounts parameter_counts(int photons) {
  if (photons < 1) throw SpecError("parameter counts need N >= 1");
  const long n = photons;
  ParameterCounts c;
  c.photons = photons;
  for (int r = 1; r <= photons; ++r) c.per_order.push_back(terms_per_order(r));
  c.cumulative = n * (n * n + 6 * n + 11) / 6;
  c.full_tomography = n * (n * n * n + 6 * n * n + 13 * n + 12) / 4;
  c.state_parameters = n * (n + 2);
  c.coherence_matrix = n * (2 * n * n + 9 * n + 13) / 6;
  return c;
}

// ---------------------------------------------------------------------------

MisalignmentFit misalignment_fit(const MomentTensors& measured, const MomentTensors& reference) {
  if (measured.max_order < 2 || reference.max_order < 2)
    throw SpecError("misalignment fit needs second-order moments on both sides");
  const auto cm = covariance(measured);
  const auto cr = covariance(reference);
  constexpr double kDegeneracy = 1e-6;

  MisalignmentFit fit;
  fit.residual_before = (cm.gamma - cr.gamma).norm();
  const int unique = unique_index(cr, kDegeneracy);

  if (unique == 3) {
    double best = std::numeric_limits<double>::infinity();
    for (int mask = 0; mask < 8; ++mask) {
      Vec3 sign;
      for (int k = 0; k < 3; ++k) sign(k) = (mask >> k) & 1 ? -1.0 : 1.0;
      const Mat3 r = cm.eigenvectors * sign.asDiagonal() * cr.eigenvectors.transpose();
      if (r.determinant() < 0) continue;
      const double a = rotation_angle(r);
      if (a < best) {
        best = a;
        fit.rotation = r;
      }
    }
    fit.note = "full eigenframe alignment";
  } else if (unique >= 0) {
    const Vec3 from = cr.eigenvectors.col(unique);
    Vec3 to = cm.eigenvectors.col(unique);
    if (from.dot(to) < 0) to = -to;
    fit.rotation = rotation_between(from, to);
    fit.degenerate = true;
    fit.note = "reference has a degenerate eigenvalue pair; aligned the unique axis only";
  } else {
    fit.degenerate = true;
    const Vec3 sm = measured.stokes_vector();
    const Vec3 sr = reference.stokes_vector();
    if (sm.norm() > 1e-12 && sr.norm() > 1e-12) {
      fit.rotation = rotation_between(sr, sm);
      fit.note = "reference covariance is isotropic; aligned Stokes vectors";
    } else {
      fit.note = "reference covariance is isotropic and carries no Stokes vector; no alignment possible";
    }
  }

  const Eigen::AngleAxisd aa(fit.rotation);
  fit.angle_degrees = aa.angle() * kRad2Deg;
  fit.axis = fit.angle_degrees > 0 ? Vec3(aa.axis()) : Vec3(Vec3::UnitZ());
  fit.residual_after = (fit.rotation.transpose() * cm.gamma * fit.rotation - cr.gamma).norm();
  return fit;
}

MisalignmentFit misalignment_fit(const ReconstructionResult& result, const MomentTensors& reference) {
  return misalignment_fit(result.tensors, reference);
}

}  // namespace polmoments
