// Copyright 2026 The meterbench authors
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

#pragma once

#include <complex>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace meterbench {

using Index = Eigen::Index;

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using ComplexMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Base of every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input (bad dimensions, failed validation, unparsable files).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A computation that cannot proceed or verify numerically.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public InputError {
 public:
  using InputError::InputError;
};

class NotHermitian : public InputError {
 public:
  using InputError::InputError;
};

class IndexOutOfRange : public InputError {
 public:
  using InputError::InputError;
};

class InvalidPovm : public InputError {
 public:
  using InputError::InputError;
};

class DimensionTooSmall : public InputError {
 public:
  using InputError::InputError;
};

class ParseError : public InputError {
 public:
  using InputError::InputError;
};

class ValidationError : public InputError {
 public:
  using InputError::InputError;
};

class DecompositionFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// An outcome probability vanishes while its derivative does not (diverging Fisher term).
class SingularOutcome : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The readout carries no information about the meter parameter (Fisher information ~ 0).
class NoSensitivity : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// An off-diagonal element of the input state vanishes, so relative decoherence is undefined.
class UndefinedCoherence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The generator has zero uncertainty in the meter state.
class ZeroUncertainty : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Numerical tolerances used by validation and audits. Max-abs conventions throughout.
template <typename Scalar = double>
struct Tolerances {
  Scalar herm = Scalar(1e-10);   // Hermiticity checks
  Scalar eig = Scalar(1e-10);    // eigendecomposition residuals / unitarity
  Scalar norm = Scalar(1e-10);   // state norms, traces, probability sums
  Scalar psd = Scalar(1e-10);    // negative-eigenvalue slack
  Scalar povm = Scalar(1e-10);   // POVM completeness
  Scalar prob = Scalar(1e-12);   // probability / coherence floor
  Scalar bound = Scalar(1e-9);   // slack for inequality audits
  Scalar rel_ca = Scalar(1e-4);  // relative agreement of the two decoherence-distance routes

  static Tolerances defaults() { return Tolerances{}; }

  static Tolerances strict() {
    Tolerances t;
    t.herm = Scalar(1e-12);
    t.eig = Scalar(1e-12);
    t.norm = Scalar(1e-12);
    t.psd = Scalar(1e-12);
    t.povm = Scalar(1e-12);
    t.prob = Scalar(1e-14);
    t.bound = Scalar(1e-11);
    t.rel_ca = Scalar(1e-5);
    return t;
  }

  // Profile selected by METERBENCH_TOLERANCE_PROFILE ("default" or "strict").
  static Tolerances active() {
    const char* profile = std::getenv("METERBENCH_TOLERANCE_PROFILE");
    if (profile == nullptr || std::string(profile) == "default") return defaults();
    if (std::string(profile) == "strict") return strict();
    throw ParseError("unknown METERBENCH_TOLERANCE_PROFILE: " + std::string(profile));
  }
};

/// Largest entry-wise absolute difference between two expressions of equal shape.
template <typename DerivedA, typename DerivedB>
auto max_abs_diff(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch("max_abs_diff: shapes " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                            std::to_string(b.cols()));
  }
  if (a.size() == 0) return decltype((a.derived() - b.derived()).cwiseAbs().maxCoeff()){0};
  return (a.derived() - b.derived()).cwiseAbs().maxCoeff();
}

template <typename DerivedA, typename DerivedB, typename Scalar>
bool approx_equal(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
                  Scalar tol) {
  return max_abs_diff(a, b) <= tol;
}

}  // namespace meterbench
