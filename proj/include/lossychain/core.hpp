// Copyright 2026 The lossychain Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LOSSYCHAIN_CORE_HPP
#define LOSSYCHAIN_CORE_HPP

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace lossychain {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double pi = std::numbers::pi;
inline constexpr Complex I{0.0, 1.0};

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input value (also used for index range violations).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Integrator or eigensolver failure.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Eigenvalues do not organise into the expected ladders.
class StructureError : public Error {
 public:
  using Error::Error;
};

/// Internal consistency relation violated.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// An operation was called on an input it does not accept.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Bloch period 2 pi / F.
inline double bloch_period(double F) {
  if (!(F > 0.0)) throw ParameterError("F must be positive");
  return 2.0 * pi / F;
}

inline int parity_sign(int j) { return (j % 2 == 0) ? 1 : -1; }

}  // namespace lossychain

#endif  // LOSSYCHAIN_CORE_HPP
