// Copyright 2026 The polmoments Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <polmoments/classifier.hpp>

#include "oracles.hpp"

using namespace polmoments;

namespace {

PolarizationState identity4() { return build(UnpolarizedSpec{3}); }

PolarizationState noon3() {
  CVector amp(4);
  amp << 1, 0, 0, 1;
  return build(SuperpositionSpec{3, amp});
}

// Central second moment along n from the ladder oracle.
double oracle_central2(const PolarizationState& s, const Vec3& n) {
  const CMatrix& rho = s.manifolds()[0].density.matrix();
  const auto ops = oracle::stokes_from_ladders(s.manifolds()[0].density.photons());
  const CMatrix sn = oracle::direction_operator(ops, n);
  const double m = oracle::power_trace(rho, sn, 1);
  return oracle::power_trace(rho, sn, 2) - m * m;
}

}  // namespace

TEST(Classifier, TableRowsInOrder) {
  const auto& rows = three_photon_classes();
  ASSERT_EQ(rows.size(), 6u);
  const std::array<std::array<bool, 3>, 6> grid = {{{true, true, true},
                                                    {true, true, false},
                                                    {true, false, true},
                                                    {true, false, false},
                                                    {false, true, false},
                                                    {false, false, false}}};
  for (int i = 0; i < 6; ++i) {
    EXPECT_EQ(rows[i].invariant, grid[i]);
    EXPECT_EQ(rows[i].row, i + 1);
  }
}

TEST(Classifier, TableExemplars) {
  const std::vector<std::pair<PolarizationState, std::array<bool, 3>>> cases = {
      {identity4(), {true, true, true}},
      {oracle::listed_diag3(1.0 / 3, 0, 0.5, 1.0 / 6), {true, true, false}},
      {oracle::listed_diag3(0.5, 0, 0, 0.5), {true, false, true}},
      {noon3(), {true, false, false}},
      {oracle::listed_diag3(19.0 / 36, 0, 15.0 / 36, 1.0 / 18), {false, true, false}},
      {build(FockSpec{3, 0}), {false, false, false}},
  };
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto cls = classify3(cases[i].first);
    EXPECT_EQ(cls.invariant, cases[i].second) << "row " << i + 1;
    EXPECT_EQ(cls.row, static_cast<int>(i) + 1);
  }
}

TEST(Classifier, MixtureStokesAndConstantVariance) {
  const auto s = oracle::listed_diag3(19.0 / 36, 0, 15.0 / 36, 1.0 / 18);
  const Vec3 sv = stokes_vector(s, MomentSelection::manifold(3));
  // Weighted S3 eigenvalues: 3*19/36 - 1*15/36 - 3*2/36 = 1.
  EXPECT_NEAR(sv(2), 1.0, 1e-12);
  EXPECT_NEAR(sv(0), 0.0, 1e-12);
  std::mt19937_64 rng(51);
  for (int i = 0; i < 20; ++i) EXPECT_NEAR(oracle_central2(s, oracle::random_unit(rng)), 14.0 / 3, 1e-12);
}

TEST(Classifier, SecondOrderMixtureHalfAxes) {
  const auto s = oracle::listed_diag3(7.0 / 18, 0, 1.0 / 3, 5.0 / 18);
  const auto c = covariance(s, MomentSelection::manifold(3));
  EXPECT_NEAR(c.eigenvalues(0), 19.0 / 3, 1e-12);
  EXPECT_NEAR(c.eigenvalues(1), 13.0 / 3, 1e-12);
  EXPECT_NEAR(c.eigenvalues(2), 13.0 / 3, 1e-12);
}

TEST(Classifier, IsotropyReportsBothNotions) {
  const auto rep = isotropy_test(build(FockSpec{3, 0}), 2, MomentSelection::manifold(3));
  ASSERT_EQ(rep.orders.size(), 2u);
  EXPECT_FALSE(rep.orders[0].isotropic);
  EXPECT_FALSE(rep.orders[1].raw_isotropic);
  EXPECT_FALSE(rep.orders[1].central_isotropic);
  EXPECT_GE(rep.grid_points, 2u * 9u);

  const auto u = isotropy_test(identity4(), 6, MomentSelection::manifold(3));
  EXPECT_TRUE(u.unpolarized_to(6));
  ASSERT_TRUE(u.orders[1].central_constant.has_value());
  EXPECT_NEAR(*u.orders[1].central_constant, 5.0, 1e-12);
}

TEST(Classifier, SecondOrderUnpolarizedMixture) {
  const auto rep = isotropy_test(oracle::listed_diag3(1.0 / 3, 0, 0.5, 1.0 / 6), 3, MomentSelection::manifold(3));
  EXPECT_TRUE(rep.orders[0].isotropic);
  EXPECT_TRUE(rep.orders[1].isotropic);
  EXPECT_FALSE(rep.orders[2].isotropic);
}

TEST(Classifier, ClassifyRejectsUnrealizable) {
  IsotropyReport rep;
  for (int r = 1; r <= 3; ++r) {
    OrderIsotropy o;
    o.order = r;
    o.isotropic = r != 1;  // (No, Yes, Yes) is not a row
    rep.orders.push_back(o);
  }
  EXPECT_THROW(classify(rep, true), ClassificationError);
  EXPECT_EQ(classify(rep, false).row, 0);
}

TEST(Classifier, Classify3NeedsThreePhotons) {
  EXPECT_THROW(classify3(build(FockSpec{2, 0})), ClassificationError);
}

TEST(Classifier, UnpolFamilyExamples) {
  UnpolFamilyParams p;
  p.rho11 = 0.25;
  const auto a = unpol_family(p);
  EXPECT_LT((a.manifolds()[0].density.matrix() - CMatrix::Identity(4, 4) / 4.0).cwiseAbs().maxCoeff(), 1e-15);

  p.rho11 = 1.0 / 6;
  const auto b = unpol_family(p);
  const auto c = covariance(b, MomentSelection::manifold(3));
  EXPECT_LT((c.gamma - 5 * Mat3::Identity()).norm(), 1e-12);

  p.rho11 = 1.0 / 3;
  p.rho12 = Complex(0.1, 0.0);
  EXPECT_THROW(unpol_family(p), InvalidStateError);

  p.rho11 = 0.5;
  p.rho12 = 0;
  EXPECT_THROW(unpol_family_matrix(p), SpecError);
}

TEST(Classifier, FamilySamplesAreSecondOrderUnpolarized) {
  std::mt19937_64 rng(52);
  for (int i = 0; i < 100; ++i) {
    const auto s = unpol_family(sample_unpol_family(rng));
    const auto ops = oracle::stokes_from_ladders(3);
    const CMatrix& rho = s.manifolds()[0].density.matrix();
    for (int j = 1; j <= 3; ++j) EXPECT_NEAR(oracle::power_trace(rho, ops[j], 1), 0.0, 1e-12);
    const Vec3 n = oracle::random_unit(rng);
    EXPECT_NEAR(oracle_central2(s, n), 5.0, 1e-12);
  }
}

TEST(Classifier, PurityObstruction) {
  const auto p = purity_obstruction_check(2000, 3);
  EXPECT_FALSE(p.pure_state_possible);
  EXPECT_NEAR(p.third_condition_residual, 1.0 / 12, 1e-15);
  EXPECT_GT(p.psd_members, 0u);
  EXPECT_LT(p.max_purity, 1.0);
  EXPECT_GE(p.max_purity, 0.25);
}

TEST(Classifier, ConjectureCandidate) {
  const auto c = min_isotropy_conjecture_scan(3, 2000, 4);
  EXPECT_NEAR(c.candidate_plus_weight, 0.5 + 1 / std::sqrt(6.0), 1e-15);
  EXPECT_NEAR(c.candidate_sum, 9.0, 1e-10);
  EXPECT_TRUE(c.candidate_isotropic);
  EXPECT_DOUBLE_EQ(c.bound, 9.0);
  EXPECT_FALSE(c.counterexample);
  EXPECT_GE(c.min_sum_found, 9.0 - 1e-6);

  // The same candidate checked against the oracle directly.
  const double w = 0.5 + 1 / std::sqrt(6.0);
  const auto s = oracle::listed_diag3(w, 0, 0, 1 - w);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(oracle_central2(s, oracle::random_unit(rng)), 3.0, 1e-12);
}

TEST(Classifier, ConjectureProbeOtherManifolds) {
  for (int n : {2, 4}) {
    const auto c = min_isotropy_conjecture_scan(n, 500, 6);
    EXPECT_NEAR(c.candidate_sum, 3.0 * n, 1e-10);
    EXPECT_TRUE(c.candidate_isotropic);
  }
}
