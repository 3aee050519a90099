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

/**
 * @file gaussian.hpp
 * @brief Multimode Gaussian states of light in the quadrature picture.
 *
 * A register of N optical modes is described by its quadrature mean vector
 * (X+_1, X-_1, ..., X+_N, X-_N) and the symmetrized 2N x 2N covariance matrix
 * of the quadrature fluctuations. Quadratures are X+ = a + a^dag and
 * X- = i(a^dag - a), so a vacuum mode has unit variance in both and a coherent
 * amplitude alpha shows up as a mean X+ of 2 alpha.
 *
 * Observables that are linear in the quadrature fluctuations are represented
 * by LinearForm coefficient vectors; their variances and covariances are plain
 * quadratic forms of the covariance matrix.
 */

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "cvpol/errors.hpp"

namespace cvpol {

/// Position of a mode inside its register. Indices never move once assigned.
struct ModeId {
  std::size_t index = 0;

  friend bool operator==(ModeId, ModeId) = default;
};

/// Coefficients of a linearized fluctuation observable over the quadrature basis.
template <typename Scalar>
using LinearFormT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

struct Vacuum {};

template <typename Scalar>
struct Coherent {
  Scalar alpha;
};

template <typename Scalar>
struct Squeezed {
  Scalar vplus;
  Scalar vminus;
  Scalar alpha = Scalar(0);
};

template <typename Scalar>
class GaussianRegister {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Mat2 = Eigen::Matrix<Scalar, 2, 2>;
  using Vec2 = Eigen::Matrix<Scalar, 2, 1>;

  GaussianRegister() = default;

  std::size_t num_modes() const { return static_cast<std::size_t>(means_.size() / 2); }
  Eigen::Index dim() const { return means_.size(); }

  const Vector& means() const { return means_; }
  const Matrix& cov() const { return cov_; }

  ModeId add_mode(Vacuum) { return append(Vec2::Zero(), Mat2::Identity()); }

  ModeId add_mode(const Coherent<Scalar>& c) {
    return append(Vec2(Scalar(2) * c.alpha, Scalar(0)), Mat2::Identity());
  }

  ModeId add_mode(const Squeezed<Scalar>& s) {
    using std::isfinite;
    if (!(s.vplus > 0) || !(s.vminus > 0) || !isfinite(s.vplus) || !isfinite(s.vminus))
      throw PhysicsError("squeezed mode needs positive finite quadrature variances");
    // Small slack so that vminus = 1/vplus survives rounding.
    if (s.vplus * s.vminus < Scalar(1) - Scalar(64) * Eigen::NumTraits<Scalar>::epsilon())
      throw PhysicsError("squeezed mode violates Var(X+)Var(X-) >= 1");
    Mat2 block = Mat2::Zero();
    block(0, 0) = s.vplus;
    block(1, 1) = s.vminus;
    return append(Vec2(Scalar(2) * s.alpha, Scalar(0)), block);
  }

  /// Phase-space rotation of one mode by phi: (X+, X-) -> R (X+, X-) with
  /// R = [[cos phi, sin phi], [-sin phi, cos phi]].
  void apply_rotation(ModeId m, Scalar phi) {
    check(m);
    using std::cos;
    using std::sin;
    const Scalar c = cos(phi), s = sin(phi);
    Mat2 r;
    r << c, s, -s, c;
    apply_local(m, r);
  }

  /// Beamsplitter: rotation(phase) on mode b, then
  /// a' = sqrt(eta) a + sqrt(1-eta) b,  b' = sqrt(1-eta) a - sqrt(eta) b.
  void apply_beamsplitter(ModeId a, ModeId b, Scalar eta, Scalar phase) {
    check(a);
    check(b);
    if (a == b) throw std::invalid_argument("beamsplitter needs two distinct modes");
    check_efficiency(eta, "beamsplitter transmittance");
    apply_rotation(b, phase);

    using std::sqrt;
    const Scalar t = sqrt(eta), r = sqrt(Scalar(1) - eta);
    const Eigen::Index ia = 2 * Eigen::Index(a.index), ib = 2 * Eigen::Index(b.index);

    // Only the rows and columns of the two modes change.
    Matrix mix = Matrix::Identity(dim(), dim());
    for (Eigen::Index k = 0; k < 2; ++k) {
      mix(ia + k, ia + k) = t;
      mix(ia + k, ib + k) = r;
      mix(ib + k, ia + k) = r;
      mix(ib + k, ib + k) = -t;
    }
    means_ = mix * means_;
    cov_ = mix * cov_ * mix.transpose();
    symmetrize();
  }

  /// Mixes the mode with vacuum on a beamsplitter of transmittance eta.
  void apply_loss(ModeId m, Scalar eta) {
    check(m);
    check_efficiency(eta, "loss efficiency");
    using std::sqrt;
    const Scalar k = sqrt(eta);
    const Eigen::Index i = 2 * Eigen::Index(m.index);
    means_.template segment<2>(i) *= k;
    cov_.middleRows(i, 2) *= k;
    cov_.middleCols(i, 2) *= k;
    cov_.template block<2, 2>(i, i) += (Scalar(1) - eta) * Mat2::Identity();
  }

  Vec2 mode_means(ModeId m) const {
    check(m);
    return means_.template segment<2>(2 * Eigen::Index(m.index));
  }

  Mat2 mode_cov(ModeId m) const {
    check(m);
    const Eigen::Index i = 2 * Eigen::Index(m.index);
    return cov_.template block<2, 2>(i, i);
  }

  /// Var(X+) Var(X-) of one mode's marginal; at least 1 for physical states.
  Scalar heisenberg_product(ModeId m) const {
    const Mat2 b = mode_cov(m);
    return b(0, 0) * b(1, 1);
  }

  LinearFormT<Scalar> zero_form() const { return LinearFormT<Scalar>::Zero(dim()); }

  /// Unit form picking X+ (quadrature 0) or X- (quadrature 1) of a mode.
  LinearFormT<Scalar> quadrature_form(ModeId m, int quadrature) const {
    check(m);
    LinearFormT<Scalar> f = zero_form();
    f(2 * Eigen::Index(m.index) + quadrature) = Scalar(1);
    return f;
  }

  bool contains(ModeId m) const { return m.index < num_modes(); }

  void check(ModeId m) const {
    if (!contains(m))
      throw std::out_of_range("mode " + std::to_string(m.index) + " is not in the register");
  }

 private:
  ModeId append(const Vec2& mean, const Mat2& block) {
    const Eigen::Index n = dim();
    Vector means(n + 2);
    means << means_, mean;
    Matrix cov = Matrix::Zero(n + 2, n + 2);
    cov.topLeftCorner(n, n) = cov_;
    cov.template bottomRightCorner<2, 2>() = block;
    means_ = std::move(means);
    cov_ = std::move(cov);
    return ModeId{static_cast<std::size_t>(n / 2)};
  }

  void apply_local(ModeId m, const Mat2& r) {
    const Eigen::Index i = 2 * Eigen::Index(m.index);
    means_.template segment<2>(i) = r * means_.template segment<2>(i);
    cov_.middleRows(i, 2) = (r * cov_.middleRows(i, 2)).eval();
    cov_.middleCols(i, 2) = (cov_.middleCols(i, 2) * r.transpose()).eval();
    symmetrize();
  }

  void symmetrize() { cov_ = (Scalar(0.5) * (cov_ + cov_.transpose())).eval(); }

  static void check_efficiency(Scalar eta, const char* what) {
    if (!(eta >= Scalar(0) && eta <= Scalar(1)))
      throw PhysicsError(std::string(what) + " must lie in [0, 1]");
  }

  Vector means_;
  Matrix cov_;
};

using Register = GaussianRegister<double>;
using LinearForm = LinearFormT<double>;

template <typename Scalar>
void check_dims(const GaussianRegister<Scalar>& reg, const LinearFormT<Scalar>& f) {
  if (f.size() != reg.dim())
    throw std::invalid_argument("linear form has length " + std::to_string(f.size()) +
                                ", register dimension is " + std::to_string(reg.dim()));
}

/// f^T cov f.
template <typename Scalar>
Scalar form_variance(const GaussianRegister<Scalar>& reg, const LinearFormT<Scalar>& f) {
  check_dims(reg, f);
  return f.dot(reg.cov() * f);
}

/// f^T cov g, i.e. half the symmetrized correlator <df dg + dg df>.
template <typename Scalar>
Scalar form_covariance(const GaussianRegister<Scalar>& reg, const LinearFormT<Scalar>& f,
                       const LinearFormT<Scalar>& g) {
  check_dims(reg, f);
  check_dims(reg, g);
  return f.dot(reg.cov() * g);
}

/// Expectation value of the observable sum_k f_k X_k.
template <typename Scalar>
Scalar form_mean(const GaussianRegister<Scalar>& reg, const LinearFormT<Scalar>& f) {
  check_dims(reg, f);
  return f.dot(reg.means());
}

/// Imaginary part c of the commutator [f.dX, g.dX] = i c. Follows from
/// [X+, X-] = 2i on each mode; state independent.
template <typename Scalar>
Scalar form_commutator(const LinearFormT<Scalar>& f, const LinearFormT<Scalar>& g) {
  if (f.size() != g.size() || f.size() % 2 != 0)
    throw std::invalid_argument("commutator of forms with mismatched dimensions");
  Scalar c(0);
  for (Eigen::Index i = 0; i < f.size(); i += 2) c += f(i) * g(i + 1) - f(i + 1) * g(i);
  return Scalar(2) * c;
}

}  // namespace cvpol
