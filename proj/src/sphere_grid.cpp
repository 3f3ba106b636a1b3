// Copyright 2026 The polmoments Authors
// SPDX-License-Identifier: Apache-2.0

#include <polmoments/sphere_grid.hpp>

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

namespace polmoments {

namespace {

std::vector<Direction> icosphere(int level) {
  if (level < 0 || level > 7) throw SpecError("icosphere level must be in 0..7");
  // Pole-aligned icosahedron: apexes on axis 3, two staggered rings of five.
  std::vector<Vec3> verts;
  verts.emplace_back(0, 0, 1);
  const double z = 1.0 / std::sqrt(5.0);
  const double rho = 2.0 / std::sqrt(5.0);
  for (int k = 0; k < 5; ++k) verts.emplace_back(rho * std::cos(2 * kPi * k / 5), rho * std::sin(2 * kPi * k / 5), z);
  for (int k = 0; k < 5; ++k)
    verts.emplace_back(rho * std::cos(2 * kPi * (k + 0.5) / 5), rho * std::sin(2 * kPi * (k + 0.5) / 5), -z);
  verts.emplace_back(0, 0, -1);

  std::vector<std::array<int, 3>> faces;
  for (int k = 0; k < 5; ++k) {
    const int u0 = 1 + k, u1 = 1 + (k + 1) % 5;
    const int l0 = 6 + k, l1 = 6 + (k + 1) % 5;
    faces.push_back({0, u0, u1});
    faces.push_back({u0, l0, u1});
    faces.push_back({u1, l0, l1});
    faces.push_back({11, l1, l0});
  }

  for (int s = 0; s < level; ++s) {
    std::map<std::pair<int, int>, int> midpoints;
    auto midpoint = [&](int i, int j) {
      const auto key = std::minmax(i, j);
      auto it = midpoints.find(key);
      if (it != midpoints.end()) return it->second;
      verts.push_back((verts[i] + verts[j]).normalized());
      const int id = static_cast<int>(verts.size()) - 1;
      midpoints.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(faces.size() * 4);
    for (const auto& f : faces) {
      const int a = midpoint(f[0], f[1]);
      const int b = midpoint(f[1], f[2]);
      const int c = midpoint(f[2], f[0]);
      next.push_back({f[0], a, c});
      next.push_back({f[1], b, a});
      next.push_back({f[2], c, b});
      next.push_back({a, b, c});
    }
    faces = std::move(next);
  }

  std::vector<Direction> out;
  out.reserve(verts.size());
  for (const auto& v : verts) {
    // Snap exact poles so theta is exactly 0 or pi there.
    if (v.x() == 0.0 && v.y() == 0.0) {
      out.push_back(Direction::from_angles(v.z() > 0 ? 0.0 : kPi, 0.0));
    } else {
      out.push_back(Direction::from_vector(v));
    }
  }
  return out;
}

std::vector<Direction> latlong(int n_theta, int n_phi) {
  if (n_theta < 1 || n_phi < 1) throw SpecError("latlong grid needs positive counts");
  std::vector<Direction> out;
  out.push_back(Direction::from_angles(0.0, 0.0));
  for (int i = 1; i <= n_theta; ++i) {
    const double theta = kPi * i / (n_theta + 1);
    for (int j = 0; j < n_phi; ++j) out.push_back(Direction::from_angles(theta, 2 * kPi * j / n_phi));
  }
  out.push_back(Direction::from_angles(kPi, 0.0));
  return out;
}

std::vector<Direction> fibonacci(int count) {
  if (count < 2) throw SpecError("fibonacci grid needs at least 2 points");
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  std::vector<Direction> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / count;
    out.push_back(Direction::from_angles(std::acos(z), std::remainder(golden * i, 2 * kPi)));
  }
  return out;
}

}  // namespace

std::vector<Direction> make_grid(const GridSpec& spec) {
  return std::visit(
      [](const auto& g) -> std::vector<Direction> {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, IcosphereGrid>) return icosphere(g.level);
        else if constexpr (std::is_same_v<T, LatLongGrid>) return latlong(g.n_theta, g.n_phi);
        else return fibonacci(g.count);
      },
      spec);
}

GridSpec parse_grid_spec(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  try {
    if (kind == "icosphere") return IcosphereGrid{arg.empty() ? 2 : std::stoi(arg)};
    if (kind == "fibonacci") return FibonacciGrid{arg.empty() ? 200 : std::stoi(arg)};
    if (kind == "latlong") {
      if (arg.empty()) return LatLongGrid{};
      const auto x = arg.find('x');
      if (x == std::string::npos) throw SpecError("latlong grid expects THETAxPHI");
      return LatLongGrid{std::stoi(arg.substr(0, x)), std::stoi(arg.substr(x + 1))};
    }
  } catch (const std::logic_error&) {
    throw SpecError("malformed grid spec: " + text);
  }
  throw SpecError("unknown grid kind: " + text);
}

std::string to_string(const GridSpec& spec) {
  return std::visit(
      [](const auto& g) -> std::string {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, IcosphereGrid>) return "icosphere:" + std::to_string(g.level);
        else if constexpr (std::is_same_v<T, LatLongGrid>)
          return "latlong:" + std::to_string(g.n_theta) + "x" + std::to_string(g.n_phi);
        else return "fibonacci:" + std::to_string(g.count);
      },
      spec);
}

double max_neighbor_gap(const std::vector<Direction>& dirs) {
  double worst = 0.0;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < dirs.size(); ++j) {
      if (i != j) nearest = std::min(nearest, dirs[i].angle_to(dirs[j]));
    }
    worst = std::max(worst, nearest);
  }
  return worst;
}

}  // namespace polmoments
