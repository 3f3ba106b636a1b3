// Copyright 2026 The polmoments Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <polmoments/moment_engine.hpp>

#include "oracles.hpp"

using namespace polmoments;

namespace {

const Vec3 e1 = Vec3::UnitX(), e2 = Vec3::UnitY(), e3 = Vec3::UnitZ();

MomentTensors tensors_of(const StateSpec& spec, int order) {
  const auto s = build(spec);
  return moment_tensors(s, order, MomentSelection::natural(s));
}

}  // namespace

TEST(MomentEngine, PacksMatchSymmetrizedTraces) {
  std::mt19937_64 rng(21);
  for (int n = 1; n <= 4; ++n) {
    const CMatrix rho = oracle::random_density(n + 1, rng);
    const auto state = oracle::single(n, rho);
    const auto t = moment_tensors(state, 4, MomentSelection::manifold(n));
    const auto ops = oracle::stokes_from_ladders(n);
    const auto d = oracle::fluctuations(rho, ops);
    for (int r = 1; r <= 4; ++r) {
      for (const auto& idx : SymmetricPack::indices(r)) {
        EXPECT_NEAR(t.raw[r - 1].at(idx), oracle::symmetrized(rho, ops, idx.a, idx.b, idx.c), 1e-11);
        EXPECT_NEAR(t.central[r - 1].at(idx), oracle::symmetrized(rho, d, idx.a, idx.b, idx.c), 1e-11);
      }
    }
  }
}

TEST(MomentEngine, DirectMomentsMatchPacks) {
  std::mt19937_64 rng(22);
  const auto state = oracle::single(3, oracle::random_density(4, rng));
  const auto sel = MomentSelection::manifold(3);
  const auto t = moment_tensors(state, 4, sel);
  for (int k = 0; k < 10; ++k) {
    const auto dir = Direction::from_vector(oracle::random_unit(rng));
    for (int r = 1; r <= 4; ++r) {
      EXPECT_NEAR(raw_moment(state, dir, r, sel), t.raw_moment(dir.unit(), r), 1e-11);
      EXPECT_NEAR(central_moment(state, dir, r, sel), t.central_moment(dir.unit(), r), 1e-11);
    }
  }
}

TEST(MomentEngine, FockStateClosedForms) {
  for (int n = 1; n <= 5; ++n) {
    const auto t = tensors_of(FockSpec{n, 0}, 4);
    EXPECT_NEAR(t.stokes_vector()(2), n, 1e-12);
    EXPECT_NEAR(t.central_moment(e1, 2), n, 1e-10);
    EXPECT_NEAR(t.central_moment(e2, 2), n, 1e-10);
    EXPECT_NEAR(t.central_moment(e3, 2), 0.0, 1e-10);
    EXPECT_NEAR(t.central_moment(e1, 4), 3.0 * n * n - 2.0 * n, 1e-9);
    EXPECT_NEAR(t.central_moment(e2, 4), 3.0 * n * n - 2.0 * n, 1e-9);
    // Hermitian sums of the third-order mixed terms.
    EXPECT_NEAR(t.central[2].hermitian_sum({2, 0, 1}), -2.0 * n, 1e-9);
    EXPECT_NEAR(t.central[2].hermitian_sum({0, 2, 1}), -2.0 * n, 1e-9);
    EXPECT_NEAR(t.central[3].hermitian_sum({2, 0, 2}), 4.0 * n, 1e-9);
    EXPECT_NEAR(t.central[3].hermitian_sum({2, 2, 0}), 6.0 * n * n - 4.0 * n, 1e-9);
  }
}

TEST(MomentEngine, TwinFockClosedForms) {
  for (int n = 1; n <= 4; ++n) {
    const auto t = tensors_of(TwinFockSpec{n}, 4);
    const double nn = n;
    EXPECT_NEAR(t.central_moment(e1, 2), 2 * nn * (nn + 1), 1e-9);
    EXPECT_NEAR(t.central_moment(e1, 4), 2 * nn * (3 * nn * nn * nn + 6 * nn * nn + nn - 2), 1e-8);
    EXPECT_NEAR(t.central[3].hermitian_sum({2, 0, 2}), 8 * nn * (nn + 1), 1e-8);
    EXPECT_NEAR(t.central[3].hermitian_sum({2, 2, 0}), 4 * nn * (3 * nn * nn * nn + 6 * nn * nn + nn - 2), 1e-8);
    EXPECT_NEAR(t.central_moment(e3, 2), 0.0, 1e-10);
  }
}

TEST(MomentEngine, UnpolarizedClosedForms) {
  std::mt19937_64 rng(23);
  for (int n = 1; n <= 5; ++n) {
    const auto t = tensors_of(UnpolarizedSpec{n}, 4);
    const double nn = n;
    const Vec3 u = oracle::random_unit(rng);
    EXPECT_NEAR(t.central_moment(u, 2), nn * (nn + 2) / 3, 1e-10);
    EXPECT_NEAR(t.central_moment(u, 4), nn * (nn + 2) * (3 * nn * nn + 6 * nn - 4) / 15, 1e-9);
    EXPECT_NEAR(t.central_moment(u, 3), 0.0, 1e-10);
  }
}

TEST(MomentEngine, CoherentAveragedClosedForms) {
  for (double a : {0.5, 1.0, 1.5}) {
    const auto s = build(CoherentSpec{a, std::nullopt});
    const auto t = moment_tensors(s, 4, MomentSelection::averaged());
    const double a2 = a * a;
    EXPECT_NEAR(t.stokes_vector()(2), a2, 1e-9);
    EXPECT_NEAR(t.central_moment(e3, 2), a2, 1e-9);
    EXPECT_NEAR(t.raw_moment(e3, 2), a2 * a2 + a2, 1e-9);
    EXPECT_NEAR(t.central_moment(e3, 4), 3 * a2 * a2 + a2, 1e-9);
    EXPECT_NEAR(t.central_moment(e1, 2), a2, 1e-9);
  }
}

TEST(MomentEngine, ThermalAveragedClosedForms) {
  for (double nbar : {0.3, 1.0}) {
    const auto s = build(ThermalSpec{nbar, std::nullopt});
    const auto t = moment_tensors(s, 4, MomentSelection::averaged());
    EXPECT_NEAR(t.central_moment(e1, 2), nbar + 2 * nbar * nbar / 3, 1e-9);
    EXPECT_NEAR(t.central_moment(e3, 4),
                nbar + 26 * nbar * nbar / 3 + 12 * std::pow(nbar, 3) + 24 * std::pow(nbar, 4) / 5, 1e-8);
  }
}

TEST(MomentEngine, AveragedMatchesManualWeightedSum) {
  MixtureSpec m{{{0.4, FockSpec{1, 0}}, {0.6, FockSpec{1, 1}}}};
  const auto s = build(m);
  const auto t = moment_tensors(s, 2, MomentSelection::averaged());
  // Mean along 3: 0.4 * 1 + 0.6 * 0. Second raw along 1: 0.4*1 + 0.6*4.
  EXPECT_NEAR(t.stokes_vector()(2), 0.4, 1e-14);
  EXPECT_NEAR(t.raw_moment(e1, 2), 0.4 + 0.6 * 4, 1e-13);
  EXPECT_NEAR(t.central_moment(e3, 2), 0.4 - 0.16, 1e-13);
}

TEST(MomentEngine, MissingManifoldRejected) {
  const auto s = build(FockSpec{1, 1});
  EXPECT_THROW(moment_tensors(s, 2, MomentSelection::manifold(3)), SpecError);
}

TEST(MomentEngine, CovarianceEigenstructure) {
  const auto c = covariance(build(FockSpec{2, 0}), MomentSelection::manifold(2));
  EXPECT_NEAR(c.eigenvalues(0), 2.0, 1e-12);
  EXPECT_NEAR(c.eigenvalues(1), 2.0, 1e-12);
  EXPECT_NEAR(c.eigenvalues(2), 0.0, 1e-12);
  EXPECT_TRUE(c.degenerate);
  EXPECT_NEAR(std::abs(c.eigenvectors.col(2)(2)), 1.0, 1e-12);

  const auto u = covariance(build(UnpolarizedSpec{3}), MomentSelection::manifold(3));
  EXPECT_LT((u.gamma - 5 * Mat3::Identity()).norm(), 1e-12);
}

TEST(MomentEngine, UncertaintyBounds) {
  const auto a = uncertainty_check(build(FockSpec{2, 0}), 2);
  EXPECT_NEAR(a.lower, 4, 1e-12);
  EXPECT_NEAR(a.sum, 4, 1e-12);
  EXPECT_NEAR(a.upper, 8, 1e-12);
  EXPECT_TRUE(a.lower_saturated);
  const auto b = uncertainty_check(build(FockSpec{1, 1}), 2);
  EXPECT_NEAR(b.sum, 8, 1e-12);
  EXPECT_TRUE(b.upper_saturated);
  const auto c = uncertainty_check(build(UnpolarizedSpec{3}));
  EXPECT_NEAR(c.sum, 15, 1e-12);
}

TEST(MomentEngine, SphereScanTorus) {
  const auto s = build(FockSpec{2, 0});
  const auto scan = sphere_scan(s, 2, IcosphereGrid{2}, MomentSelection::manifold(2));
  ASSERT_EQ(scan.directions.size(), scan.central.size());
  for (std::size_t i = 0; i < scan.directions.size(); ++i) {
    const double c = scan.directions[i].unit()(2);
    EXPECT_NEAR(scan.central[i], 2 * (1 - c * c), 1e-12);
  }
  const auto odd = sphere_scan(s, 3, IcosphereGrid{1}, MomentSelection::manifold(2));
  for (std::size_t i = 0; i < odd.directions.size(); ++i) EXPECT_GE(odd.display_value(i), 0.0);
}

TEST(MomentEngine, FirstOrderCentralVanishes) {
  const auto s = build(Su2CoherentSpec{3, 0.4, 1.0});
  const auto scan = sphere_scan(s, 1, IcosphereGrid{1}, MomentSelection::manifold(3));
  for (double v : scan.central) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(MomentEngine, ExcitationAverage) {
  const auto s = build(Su2InvariantSpec{{0.2, 0.3, 0.5}});
  const double avg = excitation_average(s, [](const ManifoldDensity& d) { return static_cast<double>(d.photons()); });
  EXPECT_NEAR(avg, 0.3 + 1.0, 1e-15);
}
