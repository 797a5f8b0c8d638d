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

#include <string>
#include <utility>

#include "meterbench/qcore.hpp"
#include "meterbench/types.hpp"

namespace meterbench {

/// An external meter: its Hilbert space, initial pure state and response generator.
template <typename Scalar = double>
struct MeterSpec {
  MeterSpec(PureState<Scalar> initial, HermitianObservable<Scalar> gen, Scalar hbar_in = Scalar(1))
      : initial_state(std::move(initial)), generator(std::move(gen)), hbar(hbar_in) {
    if (initial_state.dim() != generator.dim()) {
      throw DimensionMismatch("MeterSpec: state dim " + std::to_string(initial_state.dim()) +
                              " vs generator dim " + std::to_string(generator.dim()));
    }
    if (!(hbar > Scalar(0))) throw ValidationError("MeterSpec: hbar must be positive");
  }

  Index dim() const { return generator.dim(); }

  PureState<Scalar> initial_state;        // |Phi>
  HermitianObservable<Scalar> generator;  // B
  Scalar hbar;
};

/// A measurement of a system observable by a coupled meter, with interaction
/// unitary exp(-i*g*(A (x) B)/hbar).
template <typename Scalar = double>
struct MeasurementScenario {
  MeasurementScenario(HermitianObservable<Scalar> observable, PureState<Scalar> state,
                      MeterSpec<Scalar> meter_in, Scalar coupling_in)
      : system_observable(std::move(observable)),
        system_state(std::move(state)),
        meter(std::move(meter_in)),
        coupling(coupling_in) {
    if (system_state.dim() != system_observable.dim()) {
      throw DimensionMismatch("MeasurementScenario: state dim " +
                              std::to_string(system_state.dim()) + " vs observable dim " +
                              std::to_string(system_observable.dim()));
    }
    if (coupling < Scalar(0)) {
      throw ValidationError("MeasurementScenario: coupling must be nonnegative");
    }
  }

  Index dim_system() const { return system_observable.dim(); }
  Index dim_meter() const { return meter.dim(); }
  Scalar hbar() const { return meter.hbar; }

  HermitianObservable<Scalar> system_observable;  // A
  PureState<Scalar> system_state;                 // |Psi>
  MeterSpec<Scalar> meter;
  Scalar coupling;  // g
};

/// Normalized state of the joint system-meter space, system index major:
/// amplitude of |i>_S (x) |k>_M sits at i*dim_meter + k.
template <typename Scalar = double>
class JointState {
 public:
  JointState(Index dim_system, Index dim_meter, ComplexVector<Scalar> amplitudes,
             const Tolerances<Scalar>& tol = Tolerances<Scalar>::active())
      : dim_system_(dim_system), dim_meter_(dim_meter), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != dim_system_ * dim_meter_) {
      throw DimensionMismatch("JointState: " + std::to_string(amplitudes_.size()) +
                              " amplitudes for dims " + std::to_string(dim_system_) + "x" +
                              std::to_string(dim_meter_));
    }
    const Scalar norm_err = std::abs(amplitudes_.squaredNorm() - Scalar(1));
    if (norm_err > tol.norm) {
      throw ValidationError("JointState: |norm^2 - 1| = " + std::to_string(norm_err));
    }
  }

  Index dim_system() const { return dim_system_; }
  Index dim_meter() const { return dim_meter_; }
  const ComplexVector<Scalar>& amplitudes() const { return amplitudes_; }

  /// Reduced density matrix of one factor, computed directly from the amplitudes.
  DensityMatrix<Scalar> reduced(Subsystem keep) const {
    // Reshape to (dim_system x dim_meter); rows are system, columns meter.
    Eigen::Map<const Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic,
                                   Eigen::RowMajor>>
        m(amplitudes_.data(), dim_system_, dim_meter_);
    if (keep == Subsystem::system) {
      return DensityMatrix<Scalar>(m * m.adjoint());
    }
    return DensityMatrix<Scalar>((m.adjoint() * m).transpose());
  }

 private:
  Index dim_system_;
  Index dim_meter_;
  ComplexVector<Scalar> amplitudes_;
};

/// The three algebraically independent routes for applying the interaction.
enum class ApplyMethod {
  direct,            // exponentiate the joint generator A (x) B
  system_expansion,  // expand in eigenstates of A, evolve conditional meter states
  meter_expansion,   // expand in eigenstates of B, evolve conditional system states
};

/// exp(-i*g*(A (x) B)/hbar), built by eigendecomposition of the joint generator.
template <typename Scalar = double>
ComplexMatrix<Scalar> build_interaction_unitary(const MeasurementScenario<Scalar>& sc) {
  const HermitianObservable<Scalar> joint(
      tensor_product(sc.system_observable.matrix(), sc.meter.generator.matrix()));
  return joint.evolution_operator(sc.coupling, sc.hbar());
}

template <typename Scalar = double>
JointState<Scalar> apply_interaction(const MeasurementScenario<Scalar>& sc, ApplyMethod method) {
  const Index ds = sc.dim_system();
  const Index dm = sc.dim_meter();
  switch (method) {
    case ApplyMethod::direct: {
      const ComplexVector<Scalar> initial =
          tensor_product(sc.system_state.amplitudes(), sc.meter.initial_state.amplitudes());
      return JointState<Scalar>(ds, dm, build_interaction_unitary(sc) * initial);
    }
    case ApplyMethod::system_expansion: {
      // sum_a <a|Psi> |a> (x) exp(-i*g*A_a*B/hbar)|Phi>
      const ComplexVector<Scalar> coeffs =
          sc.system_observable.eigenvectors().adjoint() * sc.system_state.amplitudes();
      ComplexVector<Scalar> joint = ComplexVector<Scalar>::Zero(ds * dm);
      for (Index a = 0; a < ds; ++a) {
        const ComplexVector<Scalar> branch = sc.meter.generator.evolve(
            sc.meter.initial_state.amplitudes(), sc.coupling * sc.system_observable.eigenvalues()(a),
            sc.hbar());
        joint += coeffs(a) *
                 tensor_product(sc.system_observable.eigenvectors().col(a), branch).col(0);
      }
      return JointState<Scalar>(ds, dm, std::move(joint));
    }
    case ApplyMethod::meter_expansion: {
      // sum_b exp(-i*g*B_b*A/hbar)|Psi> (x) <b|Phi>|b>
      const ComplexVector<Scalar> coeffs =
          sc.meter.generator.eigenvectors().adjoint() * sc.meter.initial_state.amplitudes();
      ComplexVector<Scalar> joint = ComplexVector<Scalar>::Zero(ds * dm);
      for (Index b = 0; b < dm; ++b) {
        const ComplexVector<Scalar> branch = sc.system_observable.evolve(
            sc.system_state.amplitudes(), sc.coupling * sc.meter.generator.eigenvalues()(b),
            sc.hbar());
        joint += coeffs(b) *
                 tensor_product(branch, sc.meter.generator.eigenvectors().col(b)).col(0);
      }
      return JointState<Scalar>(ds, dm, std::move(joint));
    }
  }
  throw InputError("apply_interaction: unknown method");
}

/// System state after the interaction, with the meter traced out.
template <typename Scalar = double>
DensityMatrix<Scalar> reduced_system_output(const MeasurementScenario<Scalar>& sc) {
  return apply_interaction(sc, ApplyMethod::direct).reduced(Subsystem::system);
}

/// reduced_system_output expressed in the cached eigenbasis of A.
template <typename Scalar = double>
ComplexMatrix<Scalar> reduced_output_in_eigenbasis(const MeasurementScenario<Scalar>& sc) {
  const ComplexMatrix<Scalar>& v = sc.system_observable.eigenvectors();
  return v.adjoint() * reduced_system_output(sc).matrix() * v;
}

/// The complex multiplier suppressing the (a1, a2) coherence:
/// sum_b |<b|Phi>|^2 exp(-i*g*B_b*(A_a1 - A_a2)/hbar).
/// Depends on the eigenvalue gap only, so degenerate pairs give exactly 1.
template <typename Scalar = double>
Complex<Scalar> dephasing_factor(const MeasurementScenario<Scalar>& sc, Index a1, Index a2) {
  if (a1 < 0 || a1 >= sc.dim_system() || a2 < 0 || a2 >= sc.dim_system()) {
    throw IndexOutOfRange("dephasing_factor: eigenindex out of range");
  }
  const Scalar gap = sc.system_observable.eigenvalues()(a1) - sc.system_observable.eigenvalues()(a2);
  if (gap == Scalar(0)) return Complex<Scalar>(1);  // includes degenerate pairs
  const RealVector<Scalar> weights =
      (sc.meter.generator.eigenvectors().adjoint() * sc.meter.initial_state.amplitudes())
          .cwiseAbs2();
  const Complex<Scalar> minus_i(0, -1);
  Complex<Scalar> factor(0);
  for (Index b = 0; b < sc.dim_meter(); ++b) {
    factor += weights(b) * std::exp(minus_i * (sc.coupling * sc.meter.generator.eigenvalues()(b) *
                                               gap / sc.hbar()));
  }
  return factor;
}

/// Closed-form (a1, a2) element of the output density matrix in the A eigenbasis:
/// dephasing factor times <a1|Psi><Psi|a2>.
template <typename Scalar = double>
Complex<Scalar> predicted_offdiagonal(const MeasurementScenario<Scalar>& sc, Index a1, Index a2) {
  const Complex<Scalar> factor = dephasing_factor(sc, a1, a2);  // range-checks a1, a2
  const ComplexVector<Scalar> coeffs =
      sc.system_observable.eigenvectors().adjoint() * sc.system_state.amplitudes();
  return factor * coeffs(a1) * std::conj(coeffs(a2));
}

/// Conditional meter state for the eigenbranch a: exp(-i*g*A_a*B/hbar)|Phi>.
template <typename Scalar = double>
PureState<Scalar> meter_branch(const MeasurementScenario<Scalar>& sc, Index a) {
  if (a < 0 || a >= sc.dim_system()) throw IndexOutOfRange("meter_branch: eigenindex out of range");
  return PureState<Scalar>(sc.meter.generator.evolve(
      sc.meter.initial_state.amplitudes(), sc.coupling * sc.system_observable.eigenvalues()(a),
      sc.hbar()));
}

}  // namespace meterbench
