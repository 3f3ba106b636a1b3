// Copyright 2026 The polmoments Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file symmetric_pack.hpp
 * @brief Packed symmetric rank-r tensors over the three Stokes indices.
 *
 * A pack of order r stores one value M_abc per multi-index a+b+c = r, where
 * M_abc is the average over all orderings of a ones, b twos and c threes.
 * Evaluation in direction n is the homogeneous polynomial
 *
 *     P(n) = sum_{a+b+c=r} r!/(a!b!c!) M_abc n1^a n2^b n3^c.
 *
 * Entries are stored with a descending, then b descending:
 * (r,0,0), (r-1,1,0), (r-1,0,1), (r-2,2,0), ...
 */

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <polmoments/common.hpp>

namespace polmoments {

struct MultiIndex {
  int a = 0;  ///< count of index 1
  int b = 0;  ///< count of index 2
  int c = 0;  ///< count of index 3

  int order() const { return a + b + c; }
  bool operator==(const MultiIndex&) const = default;
};

/// r! / (a! b! c!).
double multinomial(const MultiIndex& idx);

class SymmetricPack {
 public:
  SymmetricPack() = default;
  explicit SymmetricPack(int order);
  SymmetricPack(int order, std::vector<double> values);

  /// (r+1)(r+2)/2.
  static std::size_t size_for(int order);
  /// Canonical multi-index ordering for an order.
  static const std::vector<MultiIndex>& indices(int order);
  static std::size_t index_of(const MultiIndex& idx);

  int order() const { return order_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  double at(const MultiIndex& idx) const { return values_[index_of(idx)]; }
  double& at(const MultiIndex& idx) { return values_[index_of(idx)]; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  /// Sum over all distinct orderings: multinomial * M_abc. This is the
  /// Hermitian combination that is directly measurable.
  double hermitian_sum(const MultiIndex& idx) const { return multinomial(idx) * at(idx); }

  /// Evaluates the homogeneous polynomial at n (any vector, not only unit).
  double evaluate(const Vec3& n) const;

  /// Polynomial coefficients multinomial * M_abc in canonical order.
  std::vector<double> coefficients() const;
  static SymmetricPack from_coefficients(int order, std::span<const double> coefficients);

  /// Row of monomials r!/(a!b!c!) n^abc; design-matrix row for direction n.
  static std::vector<double> monomial_row(int order, const Vec3& n);

 private:
  int order_ = 0;
  std::vector<double> values_;
};

/// Product of two homogeneous polynomials given as packs.
SymmetricPack multiply(const SymmetricPack& x, const SymmetricPack& y);

/// Central packs from raw packs of orders 1..R via
/// <(S_n - m_n)^r> = sum_k C(r,k) <S_n^k> (-m_n)^{r-k}, m_n = s.n.
/// raw[r-1] must have order r. The order-1 central pack is identically zero.
std::vector<SymmetricPack> central_from_raw(std::span<const SymmetricPack> raw);

/// Inverse map: raw packs from the mean vector and central packs of orders 2..R.
/// central[0] (order 1) is ignored; mean supplies the first order.
std::vector<SymmetricPack> raw_from_central(const Vec3& mean, std::span<const SymmetricPack> central);

}  // namespace polmoments
