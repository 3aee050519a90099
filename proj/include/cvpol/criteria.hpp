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
 * @file criteria.hpp
 * @brief Two-beam entanglement witnesses for pairs of non-commuting observables.
 *
 * For observables A, B measured on beams x and y, with
 * D(O) = min over +- of <(dO_x +- dO_y)^2>:
 *
 *   inseparability  I(A, B) = (D(A) + D(B)) / (2 |[dA, dB]|)      (< 1: inseparable)
 *   EPR product     E(A, B) = Vc(A) Vc(B) / (|[dA, dB]|^2 / 4)    (< 1: EPR paradox)
 *
 * where Vc is the conditional variance min over g of <(dO_x + g dO_y)^2>.
 * Both are normalized so that the classical bound is 1. The quadrature
 * versions use A = X+, B = X-, |[dX+, dX-]| = 2.
 */

#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "cvpol/gaussian.hpp"
#include "cvpol/stokes.hpp"

namespace cvpol {

template <typename Scalar>
struct CriterionResultT {
  std::string name;
  /// NaN when zero_bound is set.
  Scalar value = std::numeric_limits<Scalar>::quiet_NaN();
  Scalar bound = Scalar(1);
  /// |[dA, dB]| the value was normalized by.
  Scalar commutator = Scalar(0);
  std::array<Sign, 2> signs{Sign::Sum, Sign::Sum};
  std::array<Scalar, 2> gains{Scalar(1), Scalar(1)};
  /// |<dA dB + dB dA>| on a single beam (largest of the two beams).
  Scalar correlation_term = Scalar(0);
  /// The commutator vanishes; the criterion cannot certify anything.
  bool zero_bound = false;

  bool certifies() const { return !zero_bound && value < bound; }
};

/// Conditional knowledge of beam y after measuring beam x, for the two
/// Stokes observables other than conditioned_on.
template <typename Scalar>
struct EllipsePointT {
  StokesIndex conditioned_on = StokesIndex::S1;
  std::array<StokesIndex, 2> observables{StokesIndex::S2, StokesIndex::S3};
  std::array<Scalar, 2> conditional{};
  std::array<Scalar, 2> unconditional{};
  /// Stokes variance of a coherent beam with the same mean field (S0).
  Scalar coherent_variance = Scalar(1);
  /// Per-observable EPR threshold |[dS_j1, dS_j2]| / 2.
  Scalar dashed_bound = Scalar(0);

  Scalar normalized_conditional(int k) const { return conditional[k] / coherent_variance; }
  Scalar normalized_unconditional(int k) const { return unconditional[k] / coherent_variance; }
  Scalar normalized_dashed_bound() const { return dashed_bound / coherent_variance; }
};

using CriterionResult = CriterionResultT<double>;
using EllipsePoint = EllipsePointT<double>;

template <typename Scalar>
struct ConditionalVariance {
  Scalar value;
  /// Optimal g in Var(f_x + g f_y).
  Scalar gain;
};

/// min over g of Var(f_x + g f_y) = Var(f_x) - Cov^2 / Var(f_y).
template <typename Scalar>
ConditionalVariance<Scalar> conditional_variance(const GaussianRegister<Scalar>& reg, const LinearFormT<Scalar>& fx,
                                                 const LinearFormT<Scalar>& fy) {
  const Scalar vy = form_variance(reg, fy);
  if (!(vy > Scalar(0))) throw std::domain_error("conditioning observable has zero variance");
  const Scalar c = form_covariance(reg, fx, fy);
  const Scalar vx = form_variance(reg, fx);
  using std::max;
  return {max(Scalar(0), vx - c * c / vy), -c / vy};
}

namespace detail {

template <typename Scalar>
bool is_zero_bound(Scalar commutator, Scalar scale) {
  using std::max;
  return !(commutator > Scalar(1e-10) * max(scale, Scalar(1e-300)));
}

template <typename Scalar>
Scalar correlation_term(const GaussianRegister<Scalar>& reg, const LinearFormT<Scalar>& ax,
                        const LinearFormT<Scalar>& bx, const LinearFormT<Scalar>& ay,
                        const LinearFormT<Scalar>& by) {
  using std::abs;
  using std::max;
  return Scalar(2) * max(abs(form_covariance(reg, ax, bx)), abs(form_covariance(reg, ay, by)));
}

}  // namespace detail

/// (D(A) + D(B)) / (2 commutator). `scale` sets what counts as a zero commutator.
template <typename Scalar>
CriterionResultT<Scalar> inseparability(const GaussianRegister<Scalar>& reg, const LinearFormT<Scalar>& ax,
                                        const LinearFormT<Scalar>& ay, const LinearFormT<Scalar>& bx,
                                        const LinearFormT<Scalar>& by, Scalar commutator, Scalar scale,
                                        std::string name) {
  CriterionResultT<Scalar> r;
  r.name = std::move(name);
  r.commutator = commutator;
  r.correlation_term = detail::correlation_term(reg, ax, bx, ay, by);
  const auto da = sum_or_difference(reg, ax, ay);
  const auto db = sum_or_difference(reg, bx, by);
  r.signs = {da.sign, db.sign};
  if (detail::is_zero_bound(commutator, scale)) {
    r.zero_bound = true;
    return r;
  }
  r.value = (da.value + db.value) / (Scalar(2) * commutator);
  return r;
}

/// Vc(A) Vc(B) / (commutator^2 / 4), gains optimized independently.
template <typename Scalar>
CriterionResultT<Scalar> epr_product(const GaussianRegister<Scalar>& reg, const LinearFormT<Scalar>& ax,
                                     const LinearFormT<Scalar>& ay, const LinearFormT<Scalar>& bx,
                                     const LinearFormT<Scalar>& by, Scalar commutator, Scalar scale,
                                     std::string name) {
  using std::abs;
  CriterionResultT<Scalar> r;
  r.name = std::move(name);
  r.commutator = commutator;
  r.correlation_term = detail::correlation_term(reg, ax, bx, ay, by);
  const auto ca = conditional_variance(reg, ax, ay);
  const auto cb = conditional_variance(reg, bx, by);
  r.signs = {ca.gain < Scalar(0) ? Sign::Difference : Sign::Sum, cb.gain < Scalar(0) ? Sign::Difference : Sign::Sum};
  r.gains = {abs(ca.gain), abs(cb.gain)};
  if (detail::is_zero_bound(commutator, scale)) {
    r.zero_bound = true;
    return r;
  }
  r.value = ca.value * cb.value / (commutator * commutator / Scalar(4));
  return r;
}

namespace detail {

inline void check_distinct(ModeId x, ModeId y) {
  if (x == y) throw std::invalid_argument("criterion needs two distinct modes");
}

inline std::string pair_name(const char* prefix, StokesIndex i, StokesIndex j) {
  return std::string(prefix) + "_S" + std::to_string(to_int(i)) + "S" + std::to_string(to_int(j));
}

}  // namespace detail

template <typename Scalar>
CriterionResultT<Scalar> duan_quadrature(const GaussianRegister<Scalar>& reg, ModeId x, ModeId y) {
  detail::check_distinct(x, y);
  return inseparability(reg, reg.quadrature_form(x, 0), reg.quadrature_form(y, 0), reg.quadrature_form(x, 1),
                        reg.quadrature_form(y, 1), Scalar(2), Scalar(1), "duan");
}

template <typename Scalar>
CriterionResultT<Scalar> epr_product_quadrature(const GaussianRegister<Scalar>& reg, ModeId x, ModeId y) {
  detail::check_distinct(x, y);
  return epr_product(reg, reg.quadrature_form(x, 0), reg.quadrature_form(y, 0), reg.quadrature_form(x, 1),
                     reg.quadrature_form(y, 1), Scalar(2), Scalar(1), "epr_quad");
}

template <typename Scalar>
CriterionResultT<Scalar> stokes_inseparability(const GaussianRegister<Scalar>& reg, const PolBeamT<Scalar>& bx,
                                               const PolBeamT<Scalar>& by, StokesIndex i, StokesIndex j) {
  check_disjoint(bx, by);
  const auto px = beam_amplitudes(reg, bx);
  check_symmetric(px, beam_amplitudes(reg, by));
  const Scalar bound = commutator_bound(px, i, j);
  return inseparability(reg, stokes_fluctuation_form(reg, bx, i), stokes_fluctuation_form(reg, by, i),
                        stokes_fluctuation_form(reg, bx, j), stokes_fluctuation_form(reg, by, j), bound,
                        stokes_means(px).s0, detail::pair_name("insep", i, j));
}

template <typename Scalar>
CriterionResultT<Scalar> epr_product_stokes(const GaussianRegister<Scalar>& reg, const PolBeamT<Scalar>& bx,
                                            const PolBeamT<Scalar>& by, StokesIndex i, StokesIndex j) {
  check_disjoint(bx, by);
  const auto px = beam_amplitudes(reg, bx);
  check_symmetric(px, beam_amplitudes(reg, by));
  const Scalar bound = commutator_bound(px, i, j);
  return epr_product(reg, stokes_fluctuation_form(reg, bx, i), stokes_fluctuation_form(reg, by, i),
                     stokes_fluctuation_form(reg, bx, j), stokes_fluctuation_form(reg, by, j), bound,
                     stokes_means(px).s0, detail::pair_name("epr_stokes", i, j));
}

template <typename Scalar>
EllipsePointT<Scalar> conditional_ellipse(const GaussianRegister<Scalar>& reg, const PolBeamT<Scalar>& bx,
                                          const PolBeamT<Scalar>& by, StokesIndex conditioned_on) {
  check_disjoint(bx, by);
  const auto py = beam_amplitudes(reg, by);
  check_symmetric(beam_amplitudes(reg, bx), py);

  EllipsePointT<Scalar> e;
  e.conditioned_on = conditioned_on;
  int k = 0;
  for (int idx = 1; idx <= 3; ++idx)
    if (idx != to_int(conditioned_on)) e.observables[k++] = stokes_index(idx);

  for (int n = 0; n < 2; ++n) {
    const auto fy = stokes_fluctuation_form(reg, by, e.observables[n]);
    const auto fx = stokes_fluctuation_form(reg, bx, e.observables[n]);
    e.unconditional[n] = form_variance(reg, fy);
    e.conditional[n] = conditional_variance(reg, fy, fx).value;
  }
  e.coherent_variance = stokes_means(py).s0;
  e.dashed_bound = commutator_bound(py, e.observables[0], e.observables[1]) / Scalar(2);
  return e;
}

/// Bright-V limit of I(S1, S2) at theta = pi/2:
/// (alpha_V / alpha_H) (D(X+_V) + D(X-_H)) / 8.
template <typename Scalar>
Scalar insep_s1s2_bright_limit(Scalar alpha_h, Scalar alpha_v, Scalar d_xplus_v, Scalar d_xminus_h) {
  return alpha_v / alpha_h * (d_xplus_v + d_xminus_h) / Scalar(8);
}

/// Bright-V limit of I(S2, S3) at theta = pi/2:
/// (1 + alpha_H^2 / alpha_V^2) (D(X+_H) + D(X-_H)) / 4.
template <typename Scalar>
Scalar insep_s2s3_bright_limit(Scalar alpha_h, Scalar alpha_v, Scalar d_xplus_h, Scalar d_xminus_h) {
  return (Scalar(1) + alpha_h * alpha_h / (alpha_v * alpha_v)) * (d_xplus_h + d_xminus_h) / Scalar(4);
}

}  // namespace cvpol
