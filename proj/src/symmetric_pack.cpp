// Copyright 2026 The polmoments Authors
// SPDX-License-Identifier: Apache-2.0

#include <polmoments/symmetric_pack.hpp>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace polmoments {

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

double binomial(int n, int k) { return std::round(factorial(n) / (factorial(k) * factorial(n - k))); }

SymmetricPack unit_pack() { return SymmetricPack(0, {1.0}); }

}  // namespace

double multinomial(const MultiIndex& idx) {
  return std::round(factorial(idx.order()) / (factorial(idx.a) * factorial(idx.b) * factorial(idx.c)));
}

SymmetricPack::SymmetricPack(int order) : order_(order), values_(size_for(order), 0.0) {}

SymmetricPack::SymmetricPack(int order, std::vector<double> values) : order_(order), values_(std::move(values)) {
  if (values_.size() != size_for(order)) throw SpecError("pack size does not match (r+1)(r+2)/2");
}

std::size_t SymmetricPack::size_for(int order) {
  if (order < 0) throw SpecError("pack order must be non-negative");
  return static_cast<std::size_t>(order + 1) * static_cast<std::size_t>(order + 2) / 2;
}

const std::vector<MultiIndex>& SymmetricPack::indices(int order) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<const std::vector<MultiIndex>>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[order];
  if (!slot) {
    auto v = std::make_unique<std::vector<MultiIndex>>();
    for (int a = order; a >= 0; --a)
      for (int b = order - a; b >= 0; --b) v->push_back({a, b, order - a - b});
    slot = std::move(v);
  }
  return *slot;
}

std::size_t SymmetricPack::index_of(const MultiIndex& idx) {
  const int r = idx.order();
  if (idx.a < 0 || idx.b < 0 || idx.c < 0) throw SpecError("negative multi-index");
  // Entries before a given `a`: sum_{a' > a} (r - a' + 1).
  const int k = r - idx.a;  // number of slots in this a-block is k+1
  const std::size_t before = static_cast<std::size_t>(k) * static_cast<std::size_t>(k + 1) / 2;
  return before + static_cast<std::size_t>(k - idx.b);
}

double SymmetricPack::evaluate(const Vec3& n) const {
  double acc = 0.0;
  const auto& idx = indices(order_);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const auto& m = idx[i];
    acc += multinomial(m) * values_[i] * std::pow(n.x(), m.a) * std::pow(n.y(), m.b) * std::pow(n.z(), m.c);
  }
  return acc;
}

std::vector<double> SymmetricPack::coefficients() const {
  std::vector<double> c(values_.size());
  const auto& idx = indices(order_);
  for (std::size_t i = 0; i < idx.size(); ++i) c[i] = multinomial(idx[i]) * values_[i];
  return c;
}

SymmetricPack SymmetricPack::from_coefficients(int order, std::span<const double> coefficients) {
  SymmetricPack p(order);
  if (coefficients.size() != p.size()) throw SpecError("coefficient count does not match order");
  const auto& idx = indices(order);
  for (std::size_t i = 0; i < idx.size(); ++i) p.values_[i] = coefficients[i] / multinomial(idx[i]);
  return p;
}

std::vector<double> SymmetricPack::monomial_row(int order, const Vec3& n) {
  const auto& idx = indices(order);
  std::vector<double> row(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const auto& m = idx[i];
    row[i] = multinomial(m) * std::pow(n.x(), m.a) * std::pow(n.y(), m.b) * std::pow(n.z(), m.c);
  }
  return row;
}

SymmetricPack multiply(const SymmetricPack& x, const SymmetricPack& y) {
  const int order = x.order() + y.order();
  const auto cx = x.coefficients();
  const auto cy = y.coefficients();
  std::vector<double> cz(SymmetricPack::size_for(order), 0.0);
  const auto& ix = SymmetricPack::indices(x.order());
  const auto& iy = SymmetricPack::indices(y.order());
  for (std::size_t i = 0; i < ix.size(); ++i) {
    for (std::size_t j = 0; j < iy.size(); ++j) {
      const MultiIndex z{ix[i].a + iy[j].a, ix[i].b + iy[j].b, ix[i].c + iy[j].c};
      cz[SymmetricPack::index_of(z)] += cx[i] * cy[j];
    }
  }
  return SymmetricPack::from_coefficients(order, cz);
}

namespace {

SymmetricPack add_scaled(const SymmetricPack& acc, const SymmetricPack& term, double scale) {
  SymmetricPack out = acc;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += scale * term[i];
  return out;
}

// Powers p^0 .. p^max of a linear pack.
std::vector<SymmetricPack> powers(const SymmetricPack& linear, int max_power) {
  std::vector<SymmetricPack> out{unit_pack()};
  for (int k = 1; k <= max_power; ++k) out.push_back(multiply(out.back(), linear));
  return out;
}

}  // namespace

std::vector<SymmetricPack> central_from_raw(std::span<const SymmetricPack> raw) {
  if (raw.empty()) return {};
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i].order() != static_cast<int>(i) + 1) throw SpecError("raw packs must have orders 1..R in sequence");
  }
  const int max_order = static_cast<int>(raw.size());
  SymmetricPack neg_mean = raw[0];
  for (auto& v : neg_mean.values()) v = -v;
  const auto neg_pow = powers(neg_mean, max_order);

  std::vector<SymmetricPack> central;
  central.emplace_back(1);  // identically zero
  for (int r = 2; r <= max_order; ++r) {
    SymmetricPack acc = neg_pow[r];  // k = 0 term: <S^0> = 1
    for (int k = 1; k <= r; ++k) acc = add_scaled(acc, multiply(raw[k - 1], neg_pow[r - k]), binomial(r, k));
    central.push_back(std::move(acc));
  }
  return central;
}

std::vector<SymmetricPack> raw_from_central(const Vec3& mean, std::span<const SymmetricPack> central) {
  const int max_order = static_cast<int>(central.size());
  if (max_order == 0) return {};
  const SymmetricPack mean_pack(1, {mean.x(), mean.y(), mean.z()});
  const auto mean_pow = powers(mean_pack, max_order);

  std::vector<SymmetricPack> raw;
  raw.push_back(mean_pack);
  for (int r = 2; r <= max_order; ++r) {
    if (central[r - 1].order() != r) throw SpecError("central packs must have orders 1..R in sequence");
    SymmetricPack acc = mean_pow[r];
    for (int k = 2; k <= r; ++k) acc = add_scaled(acc, multiply(central[k - 1], mean_pow[r - k]), binomial(r, k));
    raw.push_back(std::move(acc));
  }
  return raw;
}

}  // namespace polmoments
