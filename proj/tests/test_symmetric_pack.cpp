// Copyright 2026 The polmoments Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <polmoments/sphere_grid.hpp>
#include <polmoments/symmetric_pack.hpp>

#include "oracles.hpp"

using namespace polmoments;

TEST(SymmetricPack, SizesAndOrdering) {
  for (int r = 0; r <= 8; ++r) EXPECT_EQ(SymmetricPack::size_for(r), static_cast<std::size_t>((r + 1) * (r + 2) / 2));
  const auto& idx = SymmetricPack::indices(2);
  ASSERT_EQ(idx.size(), 6u);
  EXPECT_EQ(idx[0], (MultiIndex{2, 0, 0}));
  EXPECT_EQ(idx[1], (MultiIndex{1, 1, 0}));
  EXPECT_EQ(idx[2], (MultiIndex{1, 0, 1}));
  EXPECT_EQ(idx[3], (MultiIndex{0, 2, 0}));
  EXPECT_EQ(idx[4], (MultiIndex{0, 1, 1}));
  EXPECT_EQ(idx[5], (MultiIndex{0, 0, 2}));
  for (int r = 1; r <= 6; ++r) {
    const auto& all = SymmetricPack::indices(r);
    for (std::size_t i = 0; i < all.size(); ++i) EXPECT_EQ(SymmetricPack::index_of(all[i]), i);
  }
}

TEST(SymmetricPack, Multinomial) {
  EXPECT_DOUBLE_EQ(multinomial({2, 1, 1}), 12.0);
  EXPECT_DOUBLE_EQ(multinomial({0, 0, 5}), 1.0);
  EXPECT_DOUBLE_EQ(multinomial({1, 1, 1}), 6.0);
}

TEST(SymmetricPack, EvaluateMatchesExplicitPolynomial) {
  // P(n) = n1^2 + 2*(2*0.5) n1 n2 - n3^2 in the pack convention.
  SymmetricPack p(2);
  p.at({2, 0, 0}) = 1.0;
  p.at({1, 1, 0}) = 0.5;
  p.at({0, 0, 2}) = -1.0;
  const Vec3 n(0.3, -0.4, 0.5);
  EXPECT_NEAR(p.evaluate(n), 0.09 + 2 * 0.5 * 0.3 * -0.4 - 0.25, 1e-15);
  const auto coeff = p.coefficients();
  const auto back = SymmetricPack::from_coefficients(2, coeff);
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(back[i], p[i], 1e-15);
}

TEST(SymmetricPack, MonomialRowDotCoefficientsIsEvaluation) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int r = 1; r <= 5; ++r) {
    SymmetricPack p(r);
    for (auto& v : p.values()) v = u(rng);
    const Vec3 n = oracle::random_unit(rng);
    const auto row = SymmetricPack::monomial_row(r, n);
    double acc = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) acc += row[i] * p[i];
    EXPECT_NEAR(acc, p.evaluate(n), 1e-13);
  }
}

TEST(SymmetricPack, MultiplyIsPointwiseProduct) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1, 1);
  SymmetricPack x(2), y(3);
  for (auto& v : x.values()) v = u(rng);
  for (auto& v : y.values()) v = u(rng);
  const auto z = multiply(x, y);
  EXPECT_EQ(z.order(), 5);
  for (int t = 0; t < 10; ++t) {
    const Vec3 n = oracle::random_unit(rng) * 1.3;
    EXPECT_NEAR(z.evaluate(n), x.evaluate(n) * y.evaluate(n), 1e-12);
  }
}

TEST(SymmetricPack, CentralRawRoundTrip) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<SymmetricPack> raw;
  for (int r = 1; r <= 4; ++r) {
    SymmetricPack p(r);
    for (auto& v : p.values()) v = u(rng);
    raw.push_back(p);
  }
  const auto central = central_from_raw(raw);
  for (double v : central[0].values()) EXPECT_EQ(v, 0.0);
  const Vec3 mean(raw[0].at({1, 0, 0}), raw[0].at({0, 1, 0}), raw[0].at({0, 0, 1}));
  // Direct binomial expansion in one direction.
  const Vec3 n = oracle::random_unit(rng);
  const double m = mean.dot(n);
  for (int r = 2; r <= 4; ++r) {
    double expect = std::pow(-m, r);
    for (int k = 1; k <= r; ++k) expect += std::tgamma(r + 1.0) / std::tgamma(k + 1.0) / std::tgamma(r - k + 1.0) *
                                           raw[k - 1].evaluate(n) * std::pow(-m, r - k);
    EXPECT_NEAR(central[r - 1].evaluate(n), expect, 1e-12);
  }
  const auto back = raw_from_central(mean, central);
  for (int r = 1; r <= 4; ++r)
    for (std::size_t i = 0; i < raw[r - 1].size(); ++i) EXPECT_NEAR(back[r - 1][i], raw[r - 1][i], 1e-12);
}

TEST(SphereGrid, IcosphereCounts) {
  for (int level = 0; level <= 3; ++level) {
    const auto g = make_grid(IcosphereGrid{level});
    EXPECT_EQ(g.size(), static_cast<std::size_t>(10 * (1 << (2 * level)) + 2));
    for (const auto& d : g) EXPECT_NEAR(d.unit().norm(), 1.0, 1e-14);
  }
}

TEST(SphereGrid, ParseAndPrint) {
  const auto spec = parse_grid_spec("latlong:4x8");
  EXPECT_EQ(to_string(spec), "latlong:4x8");
  EXPECT_EQ(make_grid(spec).size(), 4u * 8u + 2u);
  EXPECT_EQ(make_grid(parse_grid_spec("fibonacci:50")).size(), 50u);
  EXPECT_THROW(parse_grid_spec("cube:2"), SpecError);
  EXPECT_THROW(make_grid(parse_grid_spec("fibonacci:0")), SpecError);
}

TEST(SphereGrid, RefinementShrinksGap) {
  const double g2 = max_neighbor_gap(make_grid(IcosphereGrid{2}));
  const double g3 = max_neighbor_gap(make_grid(IcosphereGrid{3}));
  EXPECT_LT(g3, g2);
  EXPECT_LT(g3, 0.2);
}
