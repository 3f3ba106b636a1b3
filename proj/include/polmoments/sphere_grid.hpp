// Copyright 2026 The polmoments Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <variant>
#include <vector>

#include <polmoments/stokes_algebra.hpp>

namespace polmoments {

/// Subdivided icosahedron with vertices at both poles. Level L has 10*4^L + 2 points.
struct IcosphereGrid {
  int level = 2;
};

/// Latitude/longitude grid: n_theta rings strictly between the poles plus both poles.
struct LatLongGrid {
  int n_theta = 18;
  int n_phi = 36;
};

/// Fibonacci spiral with `count` quasi-uniform points.
struct FibonacciGrid {
  int count = 200;
};

using GridSpec = std::variant<IcosphereGrid, LatLongGrid, FibonacciGrid>;

std::vector<Direction> make_grid(const GridSpec& spec);

/// "icosphere:3", "latlong:18x36", "fibonacci:500".
GridSpec parse_grid_spec(const std::string& text);
std::string to_string(const GridSpec& spec);

/// Largest angle from any grid point to its nearest neighbour (radians).
double max_neighbor_gap(const std::vector<Direction>& dirs);

}  // namespace polmoments
