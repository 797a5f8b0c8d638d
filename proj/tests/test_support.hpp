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

// Test-only helpers and independent oracles. The oracles deliberately use
// plain index loops so they share no code path with the library.

#pragma once

#include <complex>
#include <random>

#include <Eigen/Dense>

namespace mbtest {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Eigen::Index;

inline Mat random_complex_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Mat m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = Cplx(normal(rng), normal(rng));
  return m;
}

inline Mat random_hermitian(Index n, std::mt19937_64& rng) {
  const Mat m = random_complex_matrix(n, n, rng);
  return (m + m.adjoint()) / 2.0;
}

inline Vec random_unit_vector(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec v(n);
  for (Index i = 0; i < n; ++i) v(i) = Cplx(normal(rng), normal(rng));
  return v / v.norm();
}

// Kronecker product by direct evaluation of the defining index formula.
inline Mat kron_oracle(const Mat& x, const Mat& y) {
  Mat out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Index i = 0; i < x.rows(); ++i)
    for (Index k = 0; k < y.rows(); ++k)
      for (Index j = 0; j < x.cols(); ++j)
        for (Index l = 0; l < y.cols(); ++l)
          out(i * y.rows() + k, j * y.cols() + l) = x(i, j) * y(k, l);
  return out;
}

// Partial trace by brute-force index summation, system index major.
inline Mat partial_trace_oracle(const Mat& rho, Index ds, Index dm, bool keep_system) {
  if (keep_system) {
    Mat out = Mat::Zero(ds, ds);
    for (Index i = 0; i < ds; ++i)
      for (Index j = 0; j < ds; ++j) {
        Cplx sum = 0.0;
        for (Index k = 0; k < dm; ++k) sum += rho(i * dm + k, j * dm + k);
        out(i, j) = sum;
      }
    return out;
  }
  Mat out = Mat::Zero(dm, dm);
  for (Index k = 0; k < dm; ++k)
    for (Index l = 0; l < dm; ++l) {
      Cplx sum = 0.0;
      for (Index i = 0; i < ds; ++i) sum += rho(i * dm + k, i * dm + l);
      out(k, l) = sum;
    }
  return out;
}

}  // namespace mbtest
