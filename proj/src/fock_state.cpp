// Copyright 2026 The polmoments Authors
// SPDX-License-Identifier: Apache-2.0

#include <polmoments/fock_state.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <vector>

#include <polmoments/stokes_algebra.hpp>

namespace polmoments {

namespace {

std::string describe(const ManifoldDiagnostics& d) {
  std::ostringstream os;
  os << "manifold N=" << d.photons << ": hermiticity residual " << d.hermiticity_residual
     << ", trace residual " << d.trace_residual << ", min eigenvalue " << d.min_eigenvalue;
  return os.str();
}

CMatrix projector(int photons, int horizontal) {
  CMatrix p = CMatrix::Zero(photons + 1, photons + 1);
  p(horizontal, horizontal) = 1.0;
  return p;
}

CMatrix scaled_identity(int photons) {
  return CMatrix::Identity(photons + 1, photons + 1) / static_cast<double>(photons + 1);
}

// Accumulates p_N rho_N blocks before normalizing them into a state.
class BlockAccumulator {
 public:
  void add_vacuum(double w) { vacuum_ += w; }

  void add(int photons, double weight, const CMatrix& rho) {
    if (weight == 0.0) return;
    if (photons == 0) {
      vacuum_ += weight;
      return;
    }
    auto it = blocks_.find(photons);
    if (it == blocks_.end()) {
      blocks_.emplace(photons, weight * rho);
    } else {
      it->second += weight * rho;
    }
  }

  void add_state(double weight, const PolarizationState& s) {
    add_vacuum(weight * s.vacuum_weight());
    for (const auto& m : s.manifolds()) add(m.density.photons(), weight * m.weight, m.density.matrix());
  }

  PolarizationState finish() const {
    std::vector<WeightedManifold> out;
    for (const auto& [n, block] : blocks_) {
      const double w = block.trace().real();
      if (w <= 0.0) continue;
      CMatrix rho = block / w;
      rho = 0.5 * (rho + rho.adjoint()).eval();
      out.push_back({w, ManifoldDensity(n, std::move(rho))});
    }
    return PolarizationState(std::move(out), vacuum_);
  }

 private:
  std::map<int, CMatrix> blocks_;
  double vacuum_ = 0.0;
};

// Smallest K whose discarded tail is below tolerance both in probability and
// weighted by (N+1)^4, so that moments up to fourth order are converged too.
int auto_cutoff(double tail_tolerance, auto weight_fn) {
  std::vector<double> w;
  for (int n = 0;; ++n) {
    if (n > 100000) throw SpecError("automatic cutoff did not converge");
    w.push_back(weight_fn(n));
    const double m4 = std::pow(n + 1.0, 4);
    if (n > 0 && w[n] <= w[n - 1] && w[n] * m4 < 1e-6 * tail_tolerance) break;
  }
  double tail = 0.0, tail4 = 0.0;
  int cutoff = static_cast<int>(w.size()) - 1;
  for (int k = cutoff; k >= 0; --k) {
    if (tail >= tail_tolerance || tail4 >= tail_tolerance) break;
    cutoff = k;
    tail += w[k];
    tail4 += w[k] * std::pow(k + 1.0, 4);
  }
  return cutoff;
}

void check_tail(double retained, double tail_tolerance, const char* what) {
  const double tail = 1.0 - retained;
  if (tail > tail_tolerance) {
    std::ostringstream os;
    os << what << " cutoff discards tail mass " << tail << " > " << tail_tolerance;
    throw SpecError(os.str());
  }
}

PolarizationState build_impl(const StateSpec& spec, const BuildOptions& options);

struct Builder {
  const BuildOptions& options;

  PolarizationState operator()(const FockSpec& s) const {
    if (s.horizontal < 0 || s.vertical < 0) throw SpecError("fock: photon numbers must be non-negative");
    const int n = s.horizontal + s.vertical;
    if (n == 0) return PolarizationState({}, 1.0);
    return PolarizationState::pure_manifold(ManifoldDensity(n, projector(n, s.horizontal)));
  }

  PolarizationState operator()(const Su2CoherentSpec& s) const {
    if (s.photons < 1) throw SpecError("su2_coherent: N must be >= 1");
    const auto rot = rotation_to_direction(s.photons, Direction::from_angles(s.theta, s.phi));
    const CVector psi = rot.unitary.col(s.photons);
    CMatrix rho = psi * psi.adjoint();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return PolarizationState::pure_manifold(ManifoldDensity(s.photons, std::move(rho)));
  }

  PolarizationState operator()(const TwinFockSpec& s) const {
    if (s.n < 1) throw SpecError("nn: N must be >= 1");
    return PolarizationState::pure_manifold(ManifoldDensity(2 * s.n, projector(2 * s.n, s.n)));
  }

  PolarizationState operator()(const CoherentSpec& s) const {
    if (!(s.amplitude >= 0.0)) throw SpecError("coherent: amplitude must be non-negative");
    auto w = [&](int n) { return coherent_weight(s.amplitude, n); };
    const int cutoff = s.cutoff ? *s.cutoff : auto_cutoff(options.tail_tolerance, w);
    if (cutoff < 0) throw SpecError("coherent: cutoff must be non-negative");
    std::vector<WeightedManifold> ms;
    double retained = w(0);
    for (int n = 1; n <= cutoff; ++n) {
      retained += w(n);
      ms.push_back({w(n), ManifoldDensity(n, projector(n, n))});
    }
    check_tail(retained, options.tail_tolerance, "coherent");
    return PolarizationState(std::move(ms), w(0));
  }

  PolarizationState operator()(const ThermalSpec& s) const {
    if (!(s.mean_photons >= 0.0)) throw SpecError("thermal: mean photon number must be non-negative");
    auto w = [&](int n) { return thermal_weight(s.mean_photons, n); };
    const int cutoff = s.cutoff ? *s.cutoff : auto_cutoff(options.tail_tolerance, w);
    if (cutoff < 0) throw SpecError("thermal: cutoff must be non-negative");
    std::vector<WeightedManifold> ms;
    double retained = w(0);
    for (int n = 1; n <= cutoff; ++n) {
      retained += w(n);
      ms.push_back({w(n), ManifoldDensity(n, scaled_identity(n))});
    }
    check_tail(retained, options.tail_tolerance, "thermal");
    return PolarizationState(std::move(ms), w(0));
  }

  PolarizationState operator()(const UnpolarizedSpec& s) const {
    if (s.photons < 1) throw SpecError("unpolarized: N must be >= 1");
    return PolarizationState::pure_manifold(ManifoldDensity(s.photons, scaled_identity(s.photons)));
  }

  PolarizationState operator()(const Su2InvariantSpec& s) const {
    if (s.weights.empty()) throw SpecError("su2_invariant: empty weight list");
    double total = 0.0;
    for (double p : s.weights) {
      if (!(p >= 0.0)) throw SpecError("su2_invariant: weights must be non-negative");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) throw SpecError("su2_invariant: weights must sum to 1");
    std::vector<WeightedManifold> ms;
    for (std::size_t n = 1; n < s.weights.size(); ++n) {
      if (s.weights[n] == 0.0) continue;
      const int photons = static_cast<int>(n);
      ms.push_back({s.weights[n], ManifoldDensity(photons, scaled_identity(photons))});
    }
    return PolarizationState(std::move(ms), s.weights[0]);
  }

  PolarizationState operator()(const ExplicitSpec& s) const {
    if (s.photons < 1) throw SpecError("explicit: N must be >= 1");
    if (!(s.weight >= 0.0 && s.weight <= 1.0 + 1e-12)) throw SpecError("explicit: weight must lie in [0,1]");
    auto normalized = normalize_manifold(s.matrix, s.photons);
    return PolarizationState({{s.weight, std::move(normalized.density)}}, 0.0);
  }

  PolarizationState operator()(const SuperpositionSpec& s) const {
    if (s.photons < 1) throw SpecError("superposition: N must be >= 1");
    if (s.amplitudes.size() != s.photons + 1) throw SpecError("superposition: need N+1 amplitudes");
    const double norm = s.amplitudes.norm();
    if (norm == 0.0) throw SpecError("superposition: zero vector");
    const CVector psi = s.amplitudes / norm;
    CMatrix rho = psi * psi.adjoint();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return PolarizationState::pure_manifold(ManifoldDensity(s.photons, std::move(rho)));
  }

  PolarizationState operator()(const MixtureSpec& s) const {
    if (s.components.empty()) throw SpecError("mixture: no components");
    double total = 0.0;
    for (const auto& c : s.components) {
      if (!(c.weight >= 0.0)) throw SpecError("mixture: weights must be non-negative");
      total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-12) throw SpecError("mixture: weights must sum to 1");
    BlockAccumulator acc;
    for (const auto& c : s.components) acc.add_state(c.weight, build_impl(c.spec, options));
    return acc.finish();
  }

  PolarizationState operator()(const RotatedSpec& s) const {
    if (s.inner.size() != 1) throw SpecError("rotated: exactly one inner state required");
    if (s.axis.norm() == 0.0) throw SpecError("rotated: zero rotation axis");
    return apply_rotation(build_impl(s.inner.front().spec, options), s.axis, s.angle);
  }
};

PolarizationState build_impl(const StateSpec& spec, const BuildOptions& options) {
  return std::visit(Builder{options}, spec);
}

}  // namespace

ManifoldDensity::ManifoldDensity(int photons, CMatrix rho) : photons_(photons), rho_(std::move(rho)) {
  if (photons_ < 0) throw SpecError("manifold photon number must be non-negative");
  if (rho_.rows() != photons_ + 1 || rho_.cols() != photons_ + 1) {
    std::ostringstream os;
    os << "manifold N=" << photons_ << " requires a " << photons_ + 1 << "x" << photons_ + 1 << " matrix";
    throw SpecError(os.str());
  }
  const auto d = diagnose_matrix(photons_, rho_);
  if (!d.ok()) throw InvalidStateError(describe(d));
}

double ManifoldDensity::purity() const { return (rho_ * rho_).trace().real(); }

ManifoldDiagnostics diagnose_matrix(int photons, const CMatrix& rho) {
  ManifoldDiagnostics d;
  d.photons = photons;
  if (rho.rows() != rho.cols() || rho.rows() == 0) {
    d.hermiticity_residual = d.trace_residual = std::numeric_limits<double>::infinity();
    d.min_eigenvalue = -std::numeric_limits<double>::infinity();
    return d;
  }
  d.hermiticity_residual = hermiticity_defect(rho);
  d.trace_residual = std::abs(rho.trace() - Complex(1.0, 0.0));
  const CMatrix h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  d.min_eigenvalue = es.eigenvalues().minCoeff();
  return d;
}

PolarizationState::PolarizationState(std::vector<WeightedManifold> manifolds, double vacuum_weight)
    : manifolds_(std::move(manifolds)), vacuum_weight_(vacuum_weight) {
  if (!(vacuum_weight_ >= 0.0)) throw InvalidStateError("vacuum weight must be non-negative");
  std::sort(manifolds_.begin(), manifolds_.end(),
            [](const auto& a, const auto& b) { return a.density.photons() < b.density.photons(); });
  // N = 0 blocks fold into the vacuum weight.
  while (!manifolds_.empty() && manifolds_.front().density.photons() == 0) {
    vacuum_weight_ += manifolds_.front().weight;
    manifolds_.erase(manifolds_.begin());
  }
  for (std::size_t i = 0; i < manifolds_.size(); ++i) {
    if (!(manifolds_[i].weight >= 0.0)) throw InvalidStateError("manifold weights must be non-negative");
    if (i > 0 && manifolds_[i].density.photons() == manifolds_[i - 1].density.photons()) {
      throw InvalidStateError("duplicate manifold in state");
    }
  }
  if (total_weight() > 1.0 + 1e-12) throw InvalidStateError("total manifold weight exceeds 1");
}

PolarizationState PolarizationState::pure_manifold(ManifoldDensity density) {
  std::vector<WeightedManifold> ms;
  ms.push_back({1.0, std::move(density)});
  return PolarizationState(std::move(ms), 0.0);
}

double PolarizationState::total_weight() const {
  double w = vacuum_weight_;
  for (const auto& m : manifolds_) w += m.weight;
  return w;
}

int PolarizationState::cutoff() const { return manifolds_.empty() ? 0 : manifolds_.back().density.photons(); }

const WeightedManifold* PolarizationState::find(int photons) const {
  for (const auto& m : manifolds_) {
    if (m.density.photons() == photons) return &m;
  }
  return nullptr;
}

RotatedSpec make_rotated(StateSpec inner, const Vec3& axis, double angle) {
  RotatedSpec r;
  r.axis = axis;
  r.angle = angle;
  r.inner.push_back({1.0, std::move(inner)});
  return r;
}

PolarizationState build(const StateSpec& spec, const BuildOptions& options) {
  auto state = build_impl(spec, options);
  validate(state);
  return state;
}

NormalizedManifold normalize_manifold(const CMatrix& raw, int photons) {
  if (photons < 0) throw SpecError("normalize_manifold: N must be non-negative");
  if (raw.rows() != photons + 1 || raw.cols() != photons + 1) {
    throw SpecError("normalize_manifold: matrix size does not match N+1");
  }
  const double scale = std::max(1.0, raw.cwiseAbs().maxCoeff());
  if (hermiticity_defect(raw) > Tolerances::kRawHermiticity * scale) {
    throw InvalidStateError("normalize_manifold: matrix is not Hermitian within tolerance");
  }
  const CMatrix h = 0.5 * (raw + raw.adjoint());
  const double tr = h.trace().real();
  if (!(tr > 0.0)) throw InvalidStateError("normalize_manifold: trace must be positive");
  return {ManifoldDensity(photons, h / tr), tr};
}

bool StateDiagnostics::ok() const {
  return std::all_of(manifolds.begin(), manifolds.end(), [](const auto& d) { return d.ok(); }) &&
         total_weight <= 1.0 + 1e-12;
}

StateDiagnostics validate(const PolarizationState& state) {
  StateDiagnostics out;
  out.total_weight = state.total_weight();
  for (const auto& m : state.manifolds()) out.manifolds.push_back(diagnose_matrix(m.density.photons(), m.density.matrix()));
  for (const auto& d : out.manifolds) {
    if (!d.ok()) throw InvalidStateError(describe(d));
  }
  if (!out.ok()) throw InvalidStateError("total manifold weight exceeds 1");
  return out;
}

double coherent_weight(double amplitude, int photons) {
  if (photons < 0) return 0.0;
  const double a2 = amplitude * amplitude;
  if (a2 == 0.0) return photons == 0 ? 1.0 : 0.0;
  return std::exp(-a2 + photons * std::log(a2) - std::lgamma(photons + 1.0));
}

double thermal_weight(double mean_photons, int photons) {
  if (photons < 0) return 0.0;
  if (mean_photons == 0.0) return photons == 0 ? 1.0 : 0.0;
  return std::exp(photons * std::log(mean_photons) - (photons + 1) * std::log1p(mean_photons));
}

}  // namespace polmoments
