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
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "meterbench/interaction.hpp"
#include "meterbench/qcore.hpp"
#include "meterbench/types.hpp"

namespace meterbench {

/// A finite family of positive operators summing to identity.
template <typename Scalar = double>
class ReadoutPOVM {
 public:
  explicit ReadoutPOVM(std::vector<ComplexMatrix<Scalar>> elements,
                       std::vector<std::string> labels = {},
                       const Tolerances<Scalar>& tol = Tolerances<Scalar>::active())
      : elements_(std::move(elements)), labels_(std::move(labels)) {
    if (elements_.empty()) throw InvalidPovm("ReadoutPOVM: no elements");
    dim_ = elements_.front().rows();
    ComplexMatrix<Scalar> sum = ComplexMatrix<Scalar>::Zero(dim_, dim_);
    for (std::size_t m = 0; m < elements_.size(); ++m) {
      const auto& e = elements_[m];
      if (e.rows() != dim_ || e.cols() != dim_) {
        throw InvalidPovm("ReadoutPOVM: element " + std::to_string(m) + " is " +
                          std::to_string(e.rows()) + "x" + std::to_string(e.cols()));
      }
      if (max_abs_diff(e, e.adjoint()) > tol.herm) {
        throw InvalidPovm("ReadoutPOVM: element " + std::to_string(m) + " is not Hermitian");
      }
      Eigen::SelfAdjointEigenSolver<ComplexMatrix<Scalar>> solver(
          (e + e.adjoint()) / Scalar(2), Eigen::EigenvaluesOnly);
      if (solver.info() != Eigen::Success) {
        throw DecompositionFailure("ReadoutPOVM: eigensolver failed on element " +
                                   std::to_string(m));
      }
      if (solver.eigenvalues().minCoeff() < -tol.psd) {
        throw InvalidPovm("ReadoutPOVM: element " + std::to_string(m) + " has eigenvalue " +
                          std::to_string(solver.eigenvalues().minCoeff()));
      }
      sum += e;
    }
    check_completeness(sum, tol);
    default_labels();
  }

  /// Rank-1 projective readout onto the columns of a unitary basis matrix.
  /// Positivity and completeness hold by construction once the basis is
  /// unitary. The basis is kept so probabilities can be evaluated through the
  /// amplitudes <m|phi>; squaring afterwards keeps sqrt(P) accurate near
  /// outcome zeros, where the dense quadratic form <phi|E|phi> loses half its
  /// digits.
  static ReadoutPOVM projective(const ComplexMatrix<Scalar>& basis,
                                std::vector<std::string> labels = {},
                                const Tolerances<Scalar>& tol = Tolerances<Scalar>::active()) {
    if (basis.rows() != basis.cols()) throw InvalidPovm("projective: basis must be square");
    const Scalar unit_err = max_abs_diff(
        basis.adjoint() * basis, ComplexMatrix<Scalar>::Identity(basis.rows(), basis.cols()));
    if (unit_err > tol.povm) {
      throw InvalidPovm("projective: basis not unitary, max |V^dagger V - I| = " +
                        std::to_string(unit_err));
    }
    ReadoutPOVM povm;
    povm.dim_ = basis.rows();
    povm.elements_.reserve(basis.cols());
    for (Index m = 0; m < basis.cols(); ++m) {
      povm.elements_.push_back(basis.col(m) * basis.col(m).adjoint());
    }
    povm.basis_ = basis;
    povm.labels_ = std::move(labels);
    povm.default_labels();
    return povm;
  }

  /// Orthonormal readout vectors when this POVM is rank-1 projective.
  const std::optional<ComplexMatrix<Scalar>>& projective_basis() const { return basis_; }

  Index dim() const { return dim_; }
  Index size() const { return static_cast<Index>(elements_.size()); }
  const ComplexMatrix<Scalar>& element(Index m) const {
    if (m < 0 || m >= size()) throw IndexOutOfRange("ReadoutPOVM: outcome " + std::to_string(m));
    return elements_[static_cast<std::size_t>(m)];
  }
  const std::string& label(Index m) const {
    if (m < 0 || m >= size()) throw IndexOutOfRange("ReadoutPOVM: outcome " + std::to_string(m));
    return labels_[static_cast<std::size_t>(m)];
  }
  const std::vector<ComplexMatrix<Scalar>>& elements() const { return elements_; }

 private:
  ReadoutPOVM() = default;

  void check_completeness(const ComplexMatrix<Scalar>& sum, const Tolerances<Scalar>& tol) const {
    const Scalar dev = max_abs_diff(sum, ComplexMatrix<Scalar>::Identity(dim_, dim_));
    if (dev > tol.povm) {
      throw InvalidPovm("ReadoutPOVM: elements do not sum to identity, max deviation = " +
                        std::to_string(dev));
    }
  }

  void default_labels() {
    if (labels_.empty()) {
      for (std::size_t m = 0; m < elements_.size(); ++m) labels_.push_back(std::to_string(m));
    }
    if (labels_.size() != elements_.size()) {
      throw InvalidPovm("ReadoutPOVM: " + std::to_string(labels_.size()) + " labels for " +
                        std::to_string(elements_.size()) + " elements");
    }
  }

  Index dim_ = 0;
  std::vector<ComplexMatrix<Scalar>> elements_;
  std::optional<ComplexMatrix<Scalar>> basis_;
  std::vector<std::string> labels_;
};

/// Readout probabilities at one value of the meter parameter.
template <typename Scalar = double>
struct OutcomeDistribution {
  RealVector<Scalar> probabilities;
  Scalar parameter;  // phi_B
};

/// Squared-Hellinger resolution sampled over a grid of parameter offsets.
template <typename Scalar = double>
struct ResolutionCurve {
  Scalar base_parameter;
  RealVector<Scalar> offsets;
  RealVector<Scalar> values;
};

/// Meter-side sensitivity summary: Fisher information, the quantitative
/// resolution derived from it, and the generator-uncertainty bound.
template <typename Scalar = double>
struct SensitivityReport {
  Scalar fisher;             // F
  Scalar second_derivative;  // d^2R/deps^2 at 0 = F/4
  Scalar delta_epsilon;      // 1/sqrt(F); +inf when the readout carries no information
  Scalar qfi_bound;          // 4*Var(B)/hbar^2
  Scalar sensitivity;        // 1/delta_epsilon (0 when no sensitivity)
  bool bound_satisfied;      // F <= qfi_bound + tol.bound
  Scalar delta_a;            // delta_epsilon / g

  bool no_sensitivity() const { return !std::isfinite(delta_epsilon); }
};

/// Meter state after a response of magnitude phi_B: exp(-i*phi_B*B/hbar)|Phi>.
template <typename Scalar = double>
PureState<Scalar> meter_output_state(const MeterSpec<Scalar>& meter, Scalar phi_B) {
  return PureState<Scalar>(
      meter.generator.evolve(meter.initial_state.amplitudes(), phi_B, meter.hbar));
}

/// P(m|phi_B) = <phi(phi_B)|E(m)|phi(phi_B)>, clamped to [0, 1].
template <typename Scalar = double>
OutcomeDistribution<Scalar> outcome_distribution(
    const MeterSpec<Scalar>& meter, const ReadoutPOVM<Scalar>& povm, Scalar phi_B,
    const Tolerances<Scalar>& tol = Tolerances<Scalar>::active()) {
  if (povm.dim() != meter.dim()) {
    throw DimensionMismatch("outcome_distribution: POVM dim " + std::to_string(povm.dim()) +
                            " vs meter dim " + std::to_string(meter.dim()));
  }
  const ComplexVector<Scalar> phi = meter_output_state(meter, phi_B).amplitudes();
  RealVector<Scalar> probs(povm.size());
  for (Index m = 0; m < povm.size(); ++m) {
    const Scalar p = povm.projective_basis()
                         ? std::norm(povm.projective_basis()->col(m).dot(phi))
                         : phi.dot(povm.element(m) * phi).real();
    if (p < -tol.psd || p > Scalar(1) + tol.psd) {
      throw ValidationError("outcome_distribution: P(" + std::to_string(m) + ") = " +
                            std::to_string(p));
    }
    probs(m) = std::clamp(p, Scalar(0), Scalar(1));
  }
  const Scalar total_err = std::abs(probs.sum() - Scalar(1));
  if (total_err > tol.norm) {
    throw ValidationError("outcome_distribution: |sum P - 1| = " + std::to_string(total_err));
  }
  return {std::move(probs), phi_B};
}

/// Squared Hellinger distance between the readout distributions at phi_B and
/// phi_B + eps: R = (1/2) sum_m (sqrt(P(m|phi_B+eps)) - sqrt(P(m|phi_B)))^2.
template <typename Scalar = double>
Scalar hellinger_resolution(const MeterSpec<Scalar>& meter, const ReadoutPOVM<Scalar>& povm,
                            Scalar phi_B, Scalar eps,
                            const Tolerances<Scalar>& tol = Tolerances<Scalar>::active()) {
  const RealVector<Scalar> p = outcome_distribution(meter, povm, phi_B, tol).probabilities;
  const RealVector<Scalar> q = outcome_distribution(meter, povm, phi_B + eps, tol).probabilities;
  const RealVector<Scalar> diff = q.cwiseSqrt() - p.cwiseSqrt();
  return diff.squaredNorm() / Scalar(2);
}

template <typename Scalar = double>
ResolutionCurve<Scalar> resolution_curve(const MeterSpec<Scalar>& meter,
                                         const ReadoutPOVM<Scalar>& povm, Scalar phi_B,
                                         const RealVector<Scalar>& offsets) {
  RealVector<Scalar> values(offsets.size());
  for (Index i = 0; i < offsets.size(); ++i) {
    values(i) = hellinger_resolution(meter, povm, phi_B, offsets(i));
  }
  return {phi_B, offsets, std::move(values)};
}

/// Analytic dP(m|phi_B)/dphi_B = (2/hbar) Im <phi(phi_B)|E(m) B|phi(phi_B)>.
template <typename Scalar = double>
Scalar probability_derivative(const MeterSpec<Scalar>& meter, const ReadoutPOVM<Scalar>& povm,
                              Scalar phi_B, Index m) {
  if (povm.dim() != meter.dim()) {
    throw DimensionMismatch("probability_derivative: POVM dim vs meter dim");
  }
  if (m < 0 || m >= povm.size()) {
    throw IndexOutOfRange("probability_derivative: outcome " + std::to_string(m));
  }
  const ComplexVector<Scalar> phi = meter_output_state(meter, phi_B).amplitudes();
  const ComplexVector<Scalar> bphi = meter.generator.matrix() * phi;
  if (povm.projective_basis()) {
    const auto col = povm.projective_basis()->col(m);
    // dP = (2/hbar) Im[<phi|m><m|B|phi>]
    return Scalar(2) / meter.hbar * (std::conj(col.dot(phi)) * col.dot(bphi)).imag();
  }
  return Scalar(2) / meter.hbar * phi.dot(povm.element(m) * bphi).imag();
}

/// Fisher information F = sum_m (dP/dphi_B)^2 / P of the parameterized readout
/// distribution.
///
/// Outcomes whose probability sits below tol.prob are handled by the analytic
/// limit of the Fisher term: for a smooth quantum model, P(m) -> 0 forces
/// dP(m) -> 0 with (dP)^2/P -> (4/hbar^2) <phi|B E(m) B|phi>, so the term stays
/// finite and well defined. A vanishing probability with a non-vanishing
/// derivative cannot occur in exact arithmetic and is reported as
/// SingularOutcome instead of being dropped.
template <typename Scalar = double>
Scalar fisher_information(const MeterSpec<Scalar>& meter, const ReadoutPOVM<Scalar>& povm,
                          Scalar phi_B,
                          const Tolerances<Scalar>& tol = Tolerances<Scalar>::active()) {
  const OutcomeDistribution<Scalar> dist = outcome_distribution(meter, povm, phi_B, tol);
  const ComplexVector<Scalar> phi = meter_output_state(meter, phi_B).amplitudes();
  const ComplexVector<Scalar> bphi = meter.generator.matrix() * phi;
  const auto& basis = povm.projective_basis();
  Scalar fisher(0);
  for (Index m = 0; m < povm.size(); ++m) {
    const Scalar p = dist.probabilities(m);
    const Scalar dp =
        basis ? Scalar(2) / meter.hbar * (std::conj(basis->col(m).dot(phi)) * basis->col(m).dot(bphi)).imag()
              : Scalar(2) / meter.hbar * phi.dot(povm.element(m) * bphi).imag();
    if (p >= tol.prob) {
      fisher += dp * dp / p;
    } else if (dp * dp >= tol.prob) {
      throw SingularOutcome("fisher_information: outcome " + povm.label(m) + " has P = " +
                            std::to_string(p) + " but dP/dphi_B = " + std::to_string(dp));
    } else {
      // Analytic limit of the vanishing-probability term, (4/hbar^2) <phi|B E B|phi>.
      const Scalar limit =
          basis ? std::norm(basis->col(m).dot(bphi))
                : bphi.dot(povm.element(m) * bphi).real();
      fisher += Scalar(4) / (meter.hbar * meter.hbar) * limit;
    }
  }
  return fisher;
}

/// Quantitative resolution delta_eps = 1/(2 sqrt(d^2R/deps^2|_0)) = 1/sqrt(F),
/// the parameter difference at which the Taylor estimate of R reaches 1/8.
template <typename Scalar = double>
Scalar quantitative_resolution(const MeterSpec<Scalar>& meter, const ReadoutPOVM<Scalar>& povm,
                               Scalar phi_B,
                               const Tolerances<Scalar>& tol = Tolerances<Scalar>::active()) {
  const Scalar fisher = fisher_information(meter, povm, phi_B, tol);
  if (fisher <= tol.prob) {
    throw NoSensitivity("quantitative_resolution: Fisher information = " +
                        std::to_string(fisher));
  }
  return Scalar(1) / std::sqrt(fisher);
}

/// Smallest eps > 0 at which R(phi_B, phi_B + eps) crosses `target`, located by
/// bisection to 1e-10. Diagnostic companion to the Taylor-based delta_eps.
template <typename Scalar = double>
Scalar resolution_crossing(const MeterSpec<Scalar>& meter, const ReadoutPOVM<Scalar>& povm,
                           Scalar phi_B, Scalar target = Scalar(0.125)) {
  const auto r = [&](Scalar eps) { return hellinger_resolution(meter, povm, phi_B, eps); };
  Scalar lo(0), hi(1e-3);
  while (r(hi) < target) {
    lo = hi;
    hi *= Scalar(2);
    if (hi > Scalar(1e6)) {
      throw NoSensitivity("resolution_crossing: R never reaches " + std::to_string(target));
    }
  }
  while (hi - lo > Scalar(1e-10)) {
    const Scalar mid = (lo + hi) / Scalar(2);
    (r(mid) < target ? lo : hi) = mid;
  }
  return (lo + hi) / Scalar(2);
}

/// Assembles the full meter-side sensitivity picture for a scenario, including
/// the Mandelstam-Tamm / quantum Cramer-Rao audit F <= 4 Var(B)/hbar^2 and the
/// target-observable resolution delta_A = delta_eps / g.
template <typename Scalar = double>
SensitivityReport<Scalar> sensitivity_report(
    const MeasurementScenario<Scalar>& sc, const ReadoutPOVM<Scalar>& povm, Scalar phi_B,
    const Tolerances<Scalar>& tol = Tolerances<Scalar>::active()) {
  const Scalar fisher = fisher_information(sc.meter, povm, phi_B, tol);
  const Moments<Scalar> b_moments = mean_and_variance(sc.meter.generator, sc.meter.initial_state);
  const Scalar hbar = sc.hbar();
  SensitivityReport<Scalar> report;
  report.fisher = fisher;
  report.second_derivative = fisher / Scalar(4);
  report.qfi_bound = Scalar(4) * b_moments.variance / (hbar * hbar);
  report.bound_satisfied = fisher <= report.qfi_bound + tol.bound;
  if (fisher > tol.prob) {
    report.delta_epsilon = Scalar(1) / std::sqrt(fisher);
    report.sensitivity = std::sqrt(fisher);
  } else {
    report.delta_epsilon = std::numeric_limits<Scalar>::infinity();
    report.sensitivity = Scalar(0);
  }
  report.delta_a = sc.coupling > Scalar(0)
                       ? report.delta_epsilon / sc.coupling
                       : std::numeric_limits<Scalar>::infinity();
  return report;
}

}  // namespace meterbench
