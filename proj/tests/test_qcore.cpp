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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <random>

#include "meterbench/qcore.hpp"
#include "test_support.hpp"

using namespace meterbench;
using mbtest::Cplx;
using mbtest::Mat;
using mbtest::Vec;

namespace {

Mat pauli_z() {
  Mat m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

Mat pauli_x() {
  Mat m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

}  // namespace

TEST_CASE("hermitian_eigensystem: diagonal input sorts ascending") {
  const HermitianObservable<double> obs(pauli_z());
  CHECK(obs.eigenvalues()(0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(obs.eigenvalues()(1) == doctest::Approx(1.0).epsilon(1e-14));
  // Eigenvectors are the standard basis up to phase.
  CHECK(std::abs(obs.eigenvectors()(1, 0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(obs.eigenvectors()(0, 1)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("hermitian_eigensystem: identity is reconstructed exactly") {
  const HermitianObservable<double> obs(Mat::Identity(3, 3));
  for (Index i = 0; i < 3; ++i) CHECK(obs.eigenvalues()(i) == doctest::Approx(1.0));
  const Mat recon = obs.eigenvectors() * obs.eigenvalues().asDiagonal().toDenseMatrix().cast<Cplx>() *
                    obs.eigenvectors().adjoint();
  CHECK(max_abs_diff(recon, Mat::Identity(3, 3)) <= 1e-14);
}

TEST_CASE("hermitian_eigensystem: random 4x4 reconstruction oracle (seed 42)") {
  std::mt19937_64 rng(42);
  const Mat m = mbtest::random_hermitian(4, rng);
  const HermitianObservable<double> obs(m);
  const Mat recon = obs.eigenvectors() * obs.eigenvalues().asDiagonal().toDenseMatrix().cast<Cplx>() *
                    obs.eigenvectors().adjoint();
  CHECK(max_abs_diff(recon, m) <= 1e-12);
  CHECK(max_abs_diff(obs.eigenvectors().adjoint() * obs.eigenvectors(), Mat::Identity(4, 4)) <=
        1e-12);
}

TEST_CASE("hermitian_eigensystem: rejects non-Hermitian and non-square input") {
  Mat bad(2, 2);
  bad << 0.0, 1.0, 0.0, 0.0;
  CHECK_THROWS_AS(hermitian_eigensystem(bad), NotHermitian);
  CHECK_THROWS_AS(hermitian_eigensystem(Mat(Mat::Zero(2, 3))), DimensionMismatch);
}

TEST_CASE("hermitian_eigensystem: deterministic for identical input") {
  std::mt19937_64 rng(1234);
  const Mat m = mbtest::random_hermitian(5, rng);
  const HermitianObservable<double> a(m);
  const HermitianObservable<double> b(m);
  CHECK(max_abs_diff(a.eigenvectors(), b.eigenvectors()) == 0.0);
  CHECK((a.eigenvalues() - b.eigenvalues()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("invariants: reconstruction and unitarity over random observables") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 2 + Index(trial % 5);
    const Mat m = mbtest::random_hermitian(n, rng);
    const HermitianObservable<double> obs(m);
    const Mat recon = obs.eigenvectors() *
                      obs.eigenvalues().asDiagonal().toDenseMatrix().cast<Cplx>() *
                      obs.eigenvectors().adjoint();
    CHECK(max_abs_diff(recon, m) <= 1e-10);
    CHECK(max_abs_diff(obs.eigenvectors().adjoint() * obs.eigenvectors(), Mat::Identity(n, n)) <=
          1e-10);
    // Ascending order.
    for (Index i = 0; i + 1 < n; ++i) CHECK(obs.eigenvalues()(i) <= obs.eigenvalues()(i + 1));
  }
}

TEST_CASE("evolve_by_generator: theta = 0 returns the input state") {
  std::mt19937_64 rng(2);
  const PureState<double> s(mbtest::random_unit_vector(4, rng));
  const HermitianObservable<double> g(mbtest::random_hermitian(4, rng));
  const PureState<double> out = evolve_by_generator(s, g, 0.0, 1.0);
  CHECK(max_abs_diff(out.amplitudes(), s.amplitudes()) <= 1e-14);
}

TEST_CASE("evolve_by_generator: spin-1/2 eigenbranch phases at theta = pi") {
  // G eigenvalues are +-hbar/2; each branch picks up exp(-i*theta*B_b/hbar).
  Mat g(2, 2);
  g << 0.5, 0.0, 0.0, -0.5;
  Vec amps(2);
  amps << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const PureState<double> out =
      evolve_by_generator(PureState<double>(amps), HermitianObservable<double>(g), M_PI, 1.0);
  const Cplx expected_plus = std::exp(Cplx(0, -M_PI / 2)) / std::sqrt(2.0);   // on |+>
  const Cplx expected_minus = std::exp(Cplx(0, M_PI / 2)) / std::sqrt(2.0);   // on |->
  CHECK(std::abs(out.amplitudes()(0) - expected_plus) <= 1e-14);
  CHECK(std::abs(out.amplitudes()(1) - expected_minus) <= 1e-14);
  // Relative phase pi between the branches.
  const double rel = std::arg(out.amplitudes()(0) / out.amplitudes()(1));
  CHECK(std::abs(std::abs(rel) - M_PI) <= 1e-12);
}

TEST_CASE("evolve_by_generator: 2*pi periodicity for integer-hbar spectra") {
  Mat g = Mat::Zero(3, 3);
  g(0, 0) = 1.0;
  g(1, 1) = 2.0;
  g(2, 2) = -1.0;
  std::mt19937_64 rng(3);
  const PureState<double> s(mbtest::random_unit_vector(3, rng));
  const PureState<double> out =
      evolve_by_generator(s, HermitianObservable<double>(g), 2.0 * M_PI, 1.0);
  CHECK(max_abs_diff(out.amplitudes(), s.amplitudes()) <= 1e-12);
}

TEST_CASE("evolve_by_generator: norm preserved over 100 random triples") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> theta_dist(-10.0, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 2 + Index(trial % 4);
    const HermitianObservable<double> g(mbtest::random_hermitian(n, rng));
    const PureState<double> s(mbtest::random_unit_vector(n, rng));
    const PureState<double> out = evolve_by_generator(s, g, theta_dist(rng), 1.0);
    CHECK(std::abs(out.amplitudes().norm() - 1.0) <= 1e-10);
  }
}

TEST_CASE("evolve_by_generator: dimension mismatch") {
  std::mt19937_64 rng(4);
  const HermitianObservable<double> g(mbtest::random_hermitian(3, rng));
  const PureState<double> s(mbtest::random_unit_vector(2, rng));
  CHECK_THROWS_AS(evolve_by_generator(s, g, 1.0, 1.0), DimensionMismatch);
}

TEST_CASE("tensor_product: identities and diagonal blocks") {
  CHECK(max_abs_diff(tensor_product(Mat::Identity(2, 2), Mat::Identity(3, 3)),
                     Mat::Identity(6, 6)) == 0.0);
  Mat a = Mat::Zero(2, 2), b = Mat::Zero(2, 2);
  a(0, 0) = 2.0;
  a(1, 1) = 3.0;
  b(0, 0) = 5.0;
  b(1, 1) = 7.0;
  Mat expected = Mat::Zero(4, 4);
  expected(0, 0) = 10.0;
  expected(1, 1) = 14.0;
  expected(2, 2) = 15.0;
  expected(3, 3) = 21.0;
  CHECK(max_abs_diff(tensor_product(a, b), expected) == 0.0);
}

TEST_CASE("tensor_product: order matters, Hermiticity survives") {
  const Mat zx = tensor_product(pauli_z(), pauli_x());
  const Mat xz = tensor_product(pauli_x(), pauli_z());
  CHECK(max_abs_diff(zx, zx.adjoint()) == 0.0);
  CHECK(max_abs_diff(xz, xz.adjoint()) == 0.0);
  CHECK(max_abs_diff(zx, xz) > 0.5);
}

TEST_CASE("tensor_product: matches the index-formula oracle on random input") {
  std::mt19937_64 rng(21);
  const Mat x = mbtest::random_complex_matrix(3, 2, rng);
  const Mat y = mbtest::random_complex_matrix(2, 4, rng);
  CHECK(max_abs_diff(tensor_product(x, y), mbtest::kron_oracle(x, y)) == 0.0);
}

TEST_CASE("tensor_product: associative on a random 2x2x2 triple") {
  std::mt19937_64 rng(22);
  const Mat a = mbtest::random_complex_matrix(2, 2, rng);
  const Mat b = mbtest::random_complex_matrix(2, 2, rng);
  const Mat c = mbtest::random_complex_matrix(2, 2, rng);
  CHECK(max_abs_diff(tensor_product(Mat(tensor_product(a, b)), c),
                     tensor_product(a, Mat(tensor_product(b, c)))) <= 1e-14);
}

TEST_CASE("partial_trace: factorized input returns each factor") {
  std::mt19937_64 rng(5);
  const Vec psi = mbtest::random_unit_vector(2, rng);
  const Vec phi = mbtest::random_unit_vector(3, rng);
  const Mat rho_s = psi * psi.adjoint();
  const Mat rho_m = phi * phi.adjoint();
  const DensityMatrix<double> joint(tensor_product(rho_s, rho_m));
  CHECK(max_abs_diff(partial_trace(joint, 2, 3, Subsystem::system).matrix(), rho_s) <= 1e-12);
  CHECK(max_abs_diff(partial_trace(joint, 2, 3, Subsystem::meter).matrix(), rho_m) <= 1e-12);
}

TEST_CASE("partial_trace: Bell state reduces to identity/2 on either side") {
  Vec bell = Vec::Zero(4);
  bell(0) = 1.0 / std::sqrt(2.0);
  bell(3) = 1.0 / std::sqrt(2.0);
  const DensityMatrix<double> rho(bell * bell.adjoint());
  const Mat half_identity = 0.5 * Mat::Identity(2, 2);
  CHECK(max_abs_diff(partial_trace(rho, 2, 2, Subsystem::system).matrix(), half_identity) <=
        1e-14);
  CHECK(max_abs_diff(partial_trace(rho, 2, 2, Subsystem::meter).matrix(), half_identity) <= 1e-14);
}

TEST_CASE("partial_trace: random joint pure state matches the summation oracle (seed 7)") {
  std::mt19937_64 rng(7);
  const Vec joint = mbtest::random_unit_vector(12, rng);
  const Mat rho = joint * joint.adjoint();
  const DensityMatrix<double> dm(rho);
  CHECK(max_abs_diff(partial_trace(dm, 3, 4, Subsystem::system).matrix(),
                     mbtest::partial_trace_oracle(rho, 3, 4, true)) <= 1e-13);
  CHECK(max_abs_diff(partial_trace(dm, 3, 4, Subsystem::meter).matrix(),
                     mbtest::partial_trace_oracle(rho, 3, 4, false)) <= 1e-13);
}

TEST_CASE("partial_trace: unit trace and positivity over 100 random joint states") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const Index ds = 2 + Index(trial % 3);
    const Index dm = 2 + Index(trial % 4);
    const Vec joint = mbtest::random_unit_vector(ds * dm, rng);
    const DensityMatrix<double> rho(joint * joint.adjoint());
    // The DensityMatrix constructor revalidates trace, Hermiticity and positivity.
    const DensityMatrix<double> reduced = partial_trace(rho, ds, dm, Subsystem::system);
    CHECK(std::abs(reduced.matrix().trace().real() - 1.0) <= 1e-10);
  }
}

TEST_CASE("partial_trace: dimension mismatch") {
  std::mt19937_64 rng(9);
  const Vec joint = mbtest::random_unit_vector(6, rng);
  const DensityMatrix<double> rho(joint * joint.adjoint());
  CHECK_THROWS_AS(partial_trace(rho, 2, 4, Subsystem::system), DimensionMismatch);
}

TEST_CASE("mean_and_variance: eigenstate has zero variance") {
  const HermitianObservable<double> obs(pauli_z());
  Vec e0 = Vec::Zero(2);
  e0(0) = 1.0;
  const Moments<double> m = mean_and_variance(obs, PureState<double>(e0));
  CHECK(m.mean == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(m.variance == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(m.variance >= 0.0);
}

TEST_CASE("mean_and_variance: spin-1/2 superposition has uncertainty hbar/2") {
  Mat g(2, 2);
  g << 0.5, 0.0, 0.0, -0.5;  // hbar = 1
  Vec amps(2);
  amps << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const Moments<double> m =
      mean_and_variance(HermitianObservable<double>(g), PureState<double>(amps));
  CHECK(m.mean == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(std::sqrt(m.variance) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("mean_and_variance: matches the spectral-probability oracle (seed 3)") {
  std::mt19937_64 rng(3);
  const Mat m = mbtest::random_hermitian(5, rng);
  const Vec s = mbtest::random_unit_vector(5, rng);
  const HermitianObservable<double> obs(m);
  const Moments<double> got = mean_and_variance(obs, PureState<double>(s));

  // Oracle: probabilities over the eigendecomposition.
  const Vec coeffs = obs.eigenvectors().adjoint() * s;
  double mean = 0.0, second = 0.0;
  for (Index b = 0; b < 5; ++b) {
    const double p = std::norm(coeffs(b));
    mean += p * obs.eigenvalues()(b);
    second += p * obs.eigenvalues()(b) * obs.eigenvalues()(b);
  }
  CHECK(got.mean == doctest::Approx(mean).epsilon(1e-12));
  CHECK(got.variance == doctest::Approx(second - mean * mean).epsilon(1e-12));
}

TEST_CASE("mean_and_variance: dimension mismatch") {
  std::mt19937_64 rng(10);
  const HermitianObservable<double> obs(mbtest::random_hermitian(3, rng));
  CHECK_THROWS_AS(mean_and_variance(obs, PureState<double>(mbtest::random_unit_vector(4, rng))),
                  DimensionMismatch);
}

TEST_CASE("type invariants: PureState and DensityMatrix validation") {
  Vec bad(2);
  bad << 1.0, 1.0;  // norm sqrt(2)
  CHECK_THROWS_AS(PureState<double>{bad}, ValidationError);

  Mat not_unit_trace = 2.0 * Mat::Identity(2, 2);
  CHECK_THROWS_AS(DensityMatrix<double>{not_unit_trace}, ValidationError);

  Mat not_psd(2, 2);
  not_psd << 1.5, 0.0, 0.0, -0.5;
  CHECK_THROWS_AS(DensityMatrix<double>{not_psd}, ValidationError);

  Mat not_herm(2, 2);
  not_herm << 0.5, Cplx(0.0, 0.3), Cplx(0.0, 0.3), 0.5;
  CHECK_THROWS_AS(DensityMatrix<double>{not_herm}, NotHermitian);
}

TEST_CASE("tolerance profiles: env var selects the strict set") {
  CHECK(Tolerances<double>::active().herm == doctest::Approx(1e-10));
  setenv("METERBENCH_TOLERANCE_PROFILE", "strict", 1);
  CHECK(Tolerances<double>::active().herm == doctest::Approx(1e-12));
  CHECK(Tolerances<double>::active().prob == doctest::Approx(1e-14));
  setenv("METERBENCH_TOLERANCE_PROFILE", "bogus", 1);
  CHECK_THROWS_AS(Tolerances<double>::active(), ParseError);
  unsetenv("METERBENCH_TOLERANCE_PROFILE");
  CHECK(Tolerances<double>::active().herm == doctest::Approx(1e-10));
}

TEST_CASE("scalar genericity: the kernel instantiates with long double") {
  using LMat = ComplexMatrix<long double>;
  LMat g(2, 2);
  g << 0.5L, 0.0L, 0.0L, -0.5L;
  const HermitianObservable<long double> obs(g);
  ComplexVector<long double> amps(2);
  amps << std::complex<long double>(1.0L / std::sqrt(2.0L)),
      std::complex<long double>(1.0L / std::sqrt(2.0L));
  const PureState<long double> s(amps);
  const Moments<long double> m = mean_and_variance(obs, s);
  CHECK(double(std::sqrt(m.variance)) == doctest::Approx(0.5).epsilon(1e-15));
  const PureState<long double> out = evolve_by_generator(s, obs, (long double)M_PI, 1.0L);
  CHECK(double(std::abs(out.amplitudes()(0) - std::complex<long double>(0.0L, -1.0L / std::sqrt(2.0L)))) <=
        1e-15);
}
