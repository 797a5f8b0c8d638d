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

#include <algorithm>
#include <string>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "meterbench/types.hpp"

namespace meterbench {

/// A Hermitian matrix together with its cached real spectrum and orthonormal eigenbasis.
///
/// Eigenvalues are sorted ascending; degenerate eigenvalues keep solver order.
/// Unitary evolution generated by the matrix is computed spectrally,
/// exp(-i*theta*M/hbar) = V diag(exp(-i*theta*lambda/hbar)) V^dagger, which is
/// exact for Hermitian generators up to eigensolver error.
template <typename Scalar = double>
class HermitianObservable {
 public:
  explicit HermitianObservable(ComplexMatrix<Scalar> matrix,
                               const Tolerances<Scalar>& tol = Tolerances<Scalar>::active())
      : matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols()) {
      throw DimensionMismatch("HermitianObservable: matrix is " + std::to_string(matrix_.rows()) +
                              "x" + std::to_string(matrix_.cols()));
    }
    const Scalar asym = max_abs_diff(matrix_, matrix_.adjoint());
    if (asym > tol.herm) {
      throw NotHermitian("HermitianObservable: max |M - M^dagger| = " + std::to_string(asym));
    }
    // Symmetrize before the solve so roundoff in the input cannot leak into the spectrum.
    const ComplexMatrix<Scalar> sym = (matrix_ + matrix_.adjoint()) / Scalar(2);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix<Scalar>> solver(sym);
    if (solver.info() != Eigen::Success) {
      throw DecompositionFailure("HermitianObservable: eigensolver did not converge");
    }
    eigenvalues_ = solver.eigenvalues();
    eigenvectors_ = solver.eigenvectors();
  }

  Index dim() const { return matrix_.rows(); }
  const ComplexMatrix<Scalar>& matrix() const { return matrix_; }
  /// Real eigenvalues, ascending.
  const RealVector<Scalar>& eigenvalues() const { return eigenvalues_; }
  /// Unitary matrix whose columns are the eigenvectors, ordered like eigenvalues().
  const ComplexMatrix<Scalar>& eigenvectors() const { return eigenvectors_; }

  /// Applies exp(-i*theta*M/hbar) to a vector through the cached eigenbasis.
  ComplexVector<Scalar> evolve(const ComplexVector<Scalar>& state, Scalar theta,
                               Scalar hbar) const {
    if (state.size() != dim()) {
      throw DimensionMismatch("evolve: state dim " + std::to_string(state.size()) +
                              " vs generator dim " + std::to_string(dim()));
    }
    const ComplexVector<Scalar> phases = eigenphases(theta, hbar);
    return eigenvectors_ * (phases.asDiagonal() * (eigenvectors_.adjoint() * state));
  }

  /// Dense exp(-i*theta*M/hbar).
  ComplexMatrix<Scalar> evolution_operator(Scalar theta, Scalar hbar) const {
    const ComplexVector<Scalar> phases = eigenphases(theta, hbar);
    return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
  }

 private:
  ComplexVector<Scalar> eigenphases(Scalar theta, Scalar hbar) const {
    if (!(hbar > Scalar(0))) throw InputError("evolve: hbar must be positive");
    const Complex<Scalar> minus_i(0, -1);
    return ((minus_i * theta / hbar) * eigenvalues_.template cast<Complex<Scalar>>().array())
        .exp()
        .matrix();
  }

  ComplexMatrix<Scalar> matrix_;
  RealVector<Scalar> eigenvalues_;
  ComplexMatrix<Scalar> eigenvectors_;
};

/// Normalized complex state vector.
template <typename Scalar = double>
class PureState {
 public:
  explicit PureState(ComplexVector<Scalar> amplitudes,
                     const Tolerances<Scalar>& tol = Tolerances<Scalar>::active())
      : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() == 0) throw InputError("PureState: empty amplitude vector");
    const Scalar norm_err = std::abs(amplitudes_.squaredNorm() - Scalar(1));
    if (norm_err > tol.norm) {
      throw ValidationError("PureState: |<psi|psi> - 1| = " + std::to_string(norm_err));
    }
  }

  Index dim() const { return amplitudes_.size(); }
  const ComplexVector<Scalar>& amplitudes() const { return amplitudes_; }

 private:
  ComplexVector<Scalar> amplitudes_;
};

/// Positive unit-trace Hermitian matrix.
template <typename Scalar = double>
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix<Scalar> matrix,
                         const Tolerances<Scalar>& tol = Tolerances<Scalar>::active())
      : matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols()) {
      throw DimensionMismatch("DensityMatrix: matrix is " + std::to_string(matrix_.rows()) + "x" +
                              std::to_string(matrix_.cols()));
    }
    const Scalar asym = max_abs_diff(matrix_, matrix_.adjoint());
    if (asym > tol.herm) {
      throw NotHermitian("DensityMatrix: max |rho - rho^dagger| = " + std::to_string(asym));
    }
    const Scalar trace_err = std::abs(matrix_.trace() - Complex<Scalar>(1));
    if (trace_err > tol.norm) {
      throw ValidationError("DensityMatrix: |tr(rho) - 1| = " + std::to_string(trace_err));
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix<Scalar>> solver(
        (matrix_ + matrix_.adjoint()) / Scalar(2), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw DecompositionFailure("DensityMatrix: eigensolver did not converge");
    }
    if (solver.eigenvalues().minCoeff() < -tol.psd) {
      throw ValidationError("DensityMatrix: min eigenvalue = " +
                            std::to_string(solver.eigenvalues().minCoeff()));
    }
  }

  static DensityMatrix from_pure(const PureState<Scalar>& state) {
    return DensityMatrix(state.amplitudes() * state.amplitudes().adjoint());
  }

  Index dim() const { return matrix_.rows(); }
  const ComplexMatrix<Scalar>& matrix() const { return matrix_; }

 private:
  ComplexMatrix<Scalar> matrix_;
};

/// Which tensor factor of a joint system-meter space an operation keeps.
enum class Subsystem { system, meter };

template <typename Scalar = double>
HermitianObservable<Scalar> hermitian_eigensystem(
    const ComplexMatrix<Scalar>& m, const Tolerances<Scalar>& tol = Tolerances<Scalar>::active()) {
  return HermitianObservable<Scalar>(m, tol);
}

template <typename Scalar = double>
PureState<Scalar> evolve_by_generator(const PureState<Scalar>& state,
                                      const HermitianObservable<Scalar>& generator, Scalar theta,
                                      Scalar hbar) {
  return PureState<Scalar>(generator.evolve(state.amplitudes(), theta, hbar));
}

/// Kronecker product with the left (system) index major:
/// (x (x) y)[(i,k),(j,l)] = x(i,j) * y(k,l).
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> tensor_product(
    const Eigen::MatrixBase<DerivedA>& x, const Eigen::MatrixBase<DerivedB>& y) {
  static_assert(std::is_same_v<typename DerivedA::Scalar, typename DerivedB::Scalar>,
                "tensor_product: mixed scalar types");
  Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(
      x.rows() * y.rows(), x.cols() * y.cols());
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index j = 0; j < x.cols(); ++j) {
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y.derived();
    }
  }
  return out;
}

/// Partial trace of a joint density matrix over one factor. System index major.
template <typename Scalar = double>
DensityMatrix<Scalar> partial_trace(const DensityMatrix<Scalar>& rho, Index dim_system,
                                    Index dim_meter, Subsystem keep,
                                    const Tolerances<Scalar>& tol = Tolerances<Scalar>::active()) {
  if (dim_system < 1 || dim_meter < 1 || rho.dim() != dim_system * dim_meter) {
    throw DimensionMismatch("partial_trace: rho dim " + std::to_string(rho.dim()) + " != " +
                            std::to_string(dim_system) + "*" + std::to_string(dim_meter));
  }
  const ComplexMatrix<Scalar>& m = rho.matrix();
  if (keep == Subsystem::system) {
    ComplexMatrix<Scalar> out = ComplexMatrix<Scalar>::Zero(dim_system, dim_system);
    for (Index i = 0; i < dim_system; ++i)
      for (Index j = 0; j < dim_system; ++j)
        for (Index k = 0; k < dim_meter; ++k) out(i, j) += m(i * dim_meter + k, j * dim_meter + k);
    return DensityMatrix<Scalar>(std::move(out), tol);
  }
  ComplexMatrix<Scalar> out = ComplexMatrix<Scalar>::Zero(dim_meter, dim_meter);
  for (Index k = 0; k < dim_meter; ++k)
    for (Index l = 0; l < dim_meter; ++l)
      for (Index i = 0; i < dim_system; ++i) out(k, l) += m(i * dim_meter + k, i * dim_meter + l);
  return DensityMatrix<Scalar>(std::move(out), tol);
}

template <typename Scalar>
struct Moments {
  Scalar mean;
  Scalar variance;  // clamped to >= 0
};

/// <s|M|s> and <s|M^2|s> - <s|M|s>^2. The second moment is computed as |M s|^2,
/// which keeps the variance nonnegative up to roundoff.
template <typename Scalar = double>
Moments<Scalar> mean_and_variance(const HermitianObservable<Scalar>& obs,
                                  const PureState<Scalar>& state) {
  if (obs.dim() != state.dim()) {
    throw DimensionMismatch("mean_and_variance: observable dim " + std::to_string(obs.dim()) +
                            " vs state dim " + std::to_string(state.dim()));
  }
  const ComplexVector<Scalar> ms = obs.matrix() * state.amplitudes();
  const Scalar mean = state.amplitudes().dot(ms).real();
  const Scalar second = ms.squaredNorm();
  return {mean, std::max(second - mean * mean, Scalar(0))};
}

}  // namespace meterbench
