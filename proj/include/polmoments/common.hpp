// Copyright 2026 The polmoments Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace polmoments {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = 3.14159265358979323846;

/// Numerical tolerances for density-matrix invariants.
struct Tolerances {
  static constexpr double kHermiticity = 1e-12;
  static constexpr double kTrace = 1e-12;
  /// Smallest eigenvalue accepted as positive semidefinite.
  static constexpr double kPsd = -1e-10;
  /// Raw input matrices may carry this much Hermiticity defect before
  /// normalization symmetrizes them.
  static constexpr double kRawHermiticity = 1e-8;
};

/// Base of all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad state spec, schema violation, out-of-range parameter.
class SpecError : public Error {
 public:
  using Error::Error;
};

/// A density matrix or state violates Hermiticity, trace or positivity.
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

/// A tomography design matrix does not determine the unknowns.
class RankDeficientError : public Error {
 public:
  using Error::Error;
};

/// A classification produced an outcome outside the realizable set.
class ClassificationError : public Error {
 public:
  using Error::Error;
};

}  // namespace polmoments
