// Copyright 2026 The cvpol Authors
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

// Exact Stokes statistics of a two-mode coherent state |alpha_H>|alpha_V>,
// evaluated in a truncated number basis. Independent of the Gaussian
// machinery; used to validate the linearized Stokes forms.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "cvpol/stokes.hpp"

namespace cvpol {

template <typename Scalar>
struct FockStatistics {
  StokesMeansT<Scalar> means;
  /// Var(S1), Var(S2), Var(S3).
  std::array<Scalar, 3> variance{};
  Scalar norm_deficit = Scalar(0);
};

namespace detail {

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> coherent_amplitudes(Scalar alpha, int n_max) {
  using std::exp;
  using std::sqrt;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> c(n_max + 1);
  c(0) = exp(-alpha * alpha / Scalar(2));
  for (int n = 1; n <= n_max; ++n) c(n) = c(n - 1) * alpha / sqrt(Scalar(n));
  return c;
}

}  // namespace detail

template <typename Scalar>
FockStatistics<Scalar> fock_oracle(Scalar alpha_h, Scalar alpha_v, Scalar theta, int n_max) {
  using Complex = std::complex<Scalar>;
  using Grid = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
  using std::sqrt;

  if (n_max < 1) throw std::invalid_argument("Fock truncation must be at least 1");

  const auto ch = detail::coherent_amplitudes(alpha_h, n_max);
  const auto cv = detail::coherent_amplitudes(alpha_v, n_max);
  const Scalar deficit = Scalar(1) - ch.squaredNorm() * cv.squaredNorm();
  if (deficit > Scalar(1e-8))
    throw std::domain_error("Fock truncation too small: norm deficit " + std::to_string(double(deficit)));

  // psi(n, m) with n photons in H and m in V, zero-padded by one so that a single
  // creation operator never leaves the grid; S psi is then exact for the
  // truncated psi and <S^2> = |S psi|^2.
  const int d = n_max + 2;
  Grid psi = Grid::Zero(d, d);
  psi.topLeftCorner(n_max + 1, n_max + 1) = (ch * cv.transpose()).template cast<Complex>();
  psi /= Complex(psi.norm());

  const Complex phase = std::polar(Scalar(1), theta);
  const Complex i(0, 1);
  auto at = [&](int n, int m) { return (n < 0 || m < 0 || n >= d || m >= d) ? Complex(0) : psi(n, m); };

  std::array<Grid, 4> s;
  for (auto& g : s) g = Grid::Zero(d, d);
  for (int n = 0; n < d; ++n) {
    for (int m = 0; m < d; ++m) {
      const Scalar nh = Scalar(n), nv = Scalar(m);
      // (a_H^dag a_V psi)(n, m) = sqrt(n) sqrt(m + 1) psi(n - 1, m + 1)
      const Complex hv = sqrt(nh) * sqrt(nv + 1) * at(n - 1, m + 1);
      // (a_V^dag a_H psi)(n, m) = sqrt(n + 1) sqrt(m) psi(n + 1, m - 1)
      const Complex vh = sqrt(nh + 1) * sqrt(nv) * at(n + 1, m - 1);
      s[0](n, m) = (nh + nv) * psi(n, m);
      s[1](n, m) = (nh - nv) * psi(n, m);
      s[2](n, m) = hv * phase + vh * std::conj(phase);
      s[3](n, m) = i * vh * std::conj(phase) - i * hv * phase;
    }
  }

  FockStatistics<Scalar> out;
  out.norm_deficit = deficit;
  std::array<Scalar, 4> mean{};
  for (int k = 0; k < 4; ++k) mean[k] = psi.conjugate().cwiseProduct(s[k]).sum().real();
  out.means = {mean[0], mean[1], mean[2], mean[3]};
  for (int k = 1; k < 4; ++k) out.variance[k - 1] = s[k].squaredNorm() - mean[k] * mean[k];
  return out;
}

}  // namespace cvpol
