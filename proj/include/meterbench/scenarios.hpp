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

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "meterbench/backaction.hpp"
#include "meterbench/interaction.hpp"
#include "meterbench/qcore.hpp"
#include "meterbench/sensitivity.hpp"
#include "meterbench/types.hpp"

namespace meterbench {

template <typename Scalar = double>
struct MeterWithReadout {
  MeterSpec<Scalar> meter;
  ReadoutPOVM<Scalar> readout;
};

template <typename Scalar = double>
struct ScenarioWithReadout {
  MeasurementScenario<Scalar> scenario;
  ReadoutPOVM<Scalar> readout;
};

// Closed-form references for the spin-1/2 meter (B eigenvalues +-hbar/2,
// initial state an equal superposition of the B eigenstates).
template <typename Scalar = double>
Scalar qubit_resolution_oracle(Scalar eps) {
  return Scalar(1) - std::abs(std::cos(eps / Scalar(2)));
}

template <typename Scalar = double>
Scalar qubit_decoherence_oracle(Scalar eps) {
  return Scalar(1) - std::abs(std::cos(eps / Scalar(2)));
}

/// Continuum reference for a Gaussian generator distribution of width sigma_b:
/// D(eps) = 1 - exp(-sigma_b^2 eps^2 / (2 hbar^2)).
template <typename Scalar = double>
Scalar gaussian_decoherence_oracle(Scalar sigma_b, Scalar hbar, Scalar eps) {
  return Scalar(1) - std::exp(-sigma_b * sigma_b * eps * eps / (Scalar(2) * hbar * hbar));
}

/// Single-qubit meter: B = (hbar/2) sigma_z, initialized in the equal
/// superposition of the B eigenstates. The readout projects onto spin
/// directions at angle alpha from the initial orientation, so that
/// P(m=0) = cos^2((alpha + phi_B)/2) and P(m=1) = sin^2((alpha + phi_B)/2).
template <typename Scalar = double>
MeterWithReadout<Scalar> make_qubit_meter(Scalar alpha, Scalar hbar = Scalar(1)) {
  ComplexMatrix<Scalar> b(2, 2);
  b << Complex<Scalar>(hbar / Scalar(2)), Complex<Scalar>(0), Complex<Scalar>(0),
      Complex<Scalar>(-hbar / Scalar(2));
  ComplexVector<Scalar> phi(2);
  const Scalar inv_sqrt2 = Scalar(1) / std::sqrt(Scalar(2));
  phi << Complex<Scalar>(inv_sqrt2), Complex<Scalar>(inv_sqrt2);

  // Bloch azimuth -alpha reproduces the stated probabilities; the evolved
  // state sits at azimuth +phi_B, so the projector overlap closes the angle
  // (alpha + phi_B)/2.
  ComplexMatrix<Scalar> basis(2, 2);
  const Complex<Scalar> phase = std::exp(Complex<Scalar>(0, -alpha));
  basis << Complex<Scalar>(inv_sqrt2), Complex<Scalar>(inv_sqrt2), phase * inv_sqrt2,
      -phase * inv_sqrt2;

  return {MeterSpec<Scalar>(PureState<Scalar>(std::move(phi)),
                            HermitianObservable<Scalar>(std::move(b)), hbar),
          ReadoutPOVM<Scalar>::projective(basis, {"1", "2"})};
}

/// Truncated-Gaussian pointer meter on a uniform eigenvalue grid.
///
/// The grid spans [-k sigma_b, +k sigma_b] with k = 6 at the reference
/// dimension 64 and k growing like dim^(1/4), so refining the grid widens the
/// support at the same time. This keeps the truncation error decaying along
/// with the discretization error; a fixed radius would leave the convergence
/// floor at the truncated tail mass. The readout is projective in the discrete
/// Fourier conjugate of the grid basis (pointer-position readout for a
/// momentum-like generator).
template <typename Scalar = double>
MeterWithReadout<Scalar> make_pointer_meter(Index dim, Scalar sigma_b, Scalar hbar = Scalar(1)) {
  if (dim < 16) throw DimensionTooSmall("make_pointer_meter: dim " + std::to_string(dim));
  if (!(sigma_b > Scalar(0))) throw ValidationError("make_pointer_meter: sigma_b must be > 0");
  const Scalar k =
      Scalar(6) * std::pow(Scalar(dim) / Scalar(64), Scalar(0.25));
  ComplexMatrix<Scalar> b = ComplexMatrix<Scalar>::Zero(dim, dim);
  ComplexVector<Scalar> phi(dim);
  for (Index j = 0; j < dim; ++j) {
    const Scalar bj = -k * sigma_b + Scalar(2) * k * sigma_b * Scalar(j) / Scalar(dim - 1);
    b(j, j) = bj;
    phi(j) = std::exp(-bj * bj / (Scalar(4) * sigma_b * sigma_b));
  }
  phi /= phi.norm();

  ComplexMatrix<Scalar> dft(dim, dim);
  const Scalar two_pi = Scalar(2) * Scalar(EIGEN_PI);
  for (Index j = 0; j < dim; ++j) {
    for (Index l = 0; l < dim; ++l) {
      dft(j, l) = std::exp(Complex<Scalar>(0, -two_pi * Scalar(j) * Scalar(l) / Scalar(dim))) /
                  std::sqrt(Scalar(dim));
    }
  }
  return {MeterSpec<Scalar>(PureState<Scalar>(std::move(phi)),
                            HermitianObservable<Scalar>(std::move(b)), hbar),
          ReadoutPOVM<Scalar>::projective(dft)};
}

namespace detail {

template <typename Scalar>
ComplexMatrix<Scalar> random_hermitian(Index dim, std::mt19937_64& rng) {
  std::normal_distribution<Scalar> normal(Scalar(0), Scalar(1));
  ComplexMatrix<Scalar> m(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) m(i, j) = Complex<Scalar>(normal(rng), normal(rng));
  return (m + m.adjoint()) / Scalar(2);
}

template <typename Scalar>
ComplexVector<Scalar> random_state(Index dim, std::mt19937_64& rng) {
  std::normal_distribution<Scalar> normal(Scalar(0), Scalar(1));
  ComplexVector<Scalar> v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = Complex<Scalar>(normal(rng), normal(rng));
  return v / v.norm();
}

template <typename Scalar>
ComplexMatrix<Scalar> random_unitary(Index dim, std::mt19937_64& rng) {
  std::normal_distribution<Scalar> normal(Scalar(0), Scalar(1));
  ComplexMatrix<Scalar> m(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) m(i, j) = Complex<Scalar>(normal(rng), normal(rng));
  return Eigen::HouseholderQR<ComplexMatrix<Scalar>>(m).householderQ();
}

}  // namespace detail

/// Deterministic random scenario for audits. Draw order: A, Psi, B, Phi, g,
/// readout basis. A and B are GUE-style (standard-normal entries,
/// symmetrized), states are normalized standard-normal complex vectors,
/// g is uniform in [0.1, 5], the readout is a Haar-ish projective basis from a
/// QR factorization. hbar = 1.
template <typename Scalar = double>
ScenarioWithReadout<Scalar> make_random_scenario(std::uint64_t seed, Index dim_system,
                                                 Index dim_meter) {
  if (dim_system < 2 || dim_system > 8 || dim_meter < 2 || dim_meter > 8) {
    throw InputError("make_random_scenario: dims must lie in [2, 8]");
  }
  std::mt19937_64 rng(seed);
  HermitianObservable<Scalar> a(detail::random_hermitian<Scalar>(dim_system, rng));
  PureState<Scalar> psi(detail::random_state<Scalar>(dim_system, rng));
  HermitianObservable<Scalar> b(detail::random_hermitian<Scalar>(dim_meter, rng));
  PureState<Scalar> phi(detail::random_state<Scalar>(dim_meter, rng));
  std::uniform_real_distribution<Scalar> g_dist(Scalar(0.1), Scalar(5));
  const Scalar g = g_dist(rng);
  ReadoutPOVM<Scalar> readout =
      ReadoutPOVM<Scalar>::projective(detail::random_unitary<Scalar>(dim_meter, rng));
  MeterSpec<Scalar> meter(std::move(phi), std::move(b), Scalar(1));
  return {MeasurementScenario<Scalar>(std::move(a), std::move(psi), std::move(meter), g),
          std::move(readout)};
}

}  // namespace meterbench
