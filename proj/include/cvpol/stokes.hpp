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
 * @file stokes.hpp
 * @brief Stokes operators of a beam built from an H and a V polarized mode.
 *
 * With a_H, a_V the constituent modes and theta their relative phase,
 *
 *   S0 = a_H^dag a_H + a_V^dag a_V        S2 = a_H^dag a_V e^{i theta} + h.c.
 *   S1 = a_H^dag a_H - a_V^dag a_V        S3 = i a_V^dag a_H e^{-i theta} + h.c.
 *
 * Constituent modes carry real mean amplitudes (alpha_H, alpha_V); theta is
 * stored on the beam. Fluctuations are linearized around the mean field,
 * which is accurate to first order in 1/alpha.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cvpol/gaussian.hpp"

namespace cvpol {

enum class StokesIndex : int { S1 = 1, S2 = 2, S3 = 3 };

inline StokesIndex stokes_index(int i) {
  if (i < 1 || i > 3) throw std::invalid_argument("Stokes index must be 1, 2 or 3");
  return static_cast<StokesIndex>(i);
}

inline int to_int(StokesIndex i) { return static_cast<int>(i); }

template <typename Scalar>
struct PolBeamT {
  ModeId h;
  ModeId v;
  Scalar theta = Scalar(0);
};

/// Mean-field Stokes vector in photon-flux units.
template <typename Scalar>
struct StokesMeansT {
  Scalar s0 = Scalar(0);
  Scalar s1 = Scalar(0);
  Scalar s2 = Scalar(0);
  Scalar s3 = Scalar(0);

  Scalar operator[](StokesIndex i) const {
    switch (i) {
      case StokesIndex::S1: return s1;
      case StokesIndex::S2: return s2;
      case StokesIndex::S3: return s3;
    }
    return s0;
  }

  /// 0 selects S0, 1..3 the Stokes components.
  Scalar component(int k) const { return k == 0 ? s0 : (*this)[stokes_index(k)]; }
};

/// Mean-field parameters of a beam: the inputs to the commutator bounds.
template <typename Scalar>
struct BeamAmplitudes {
  Scalar alpha_h;
  Scalar alpha_v;
  Scalar theta;
};

enum class Sign { Sum, Difference };

inline const char* to_string(Sign s) { return s == Sign::Sum ? "sum" : "difference"; }

template <typename Scalar>
struct SumDiffVariance {
  Scalar value;
  Sign sign;
};

using PolBeam = PolBeamT<double>;
using StokesMeans = StokesMeansT<double>;

template <typename Scalar>
PolBeamT<Scalar> make_beam(const GaussianRegister<Scalar>& reg, ModeId h, ModeId v, Scalar theta) {
  reg.check(h);
  reg.check(v);
  if (h == v) throw std::invalid_argument("a beam needs distinct H and V modes");
  return PolBeamT<Scalar>{h, v, theta};
}

/// Reads alpha_H, alpha_V off the register. A nonzero X- mean means the
/// optical phase was put on a mode rather than on the beam, which is rejected.
template <typename Scalar>
BeamAmplitudes<Scalar> beam_amplitudes(const GaussianRegister<Scalar>& reg, const PolBeamT<Scalar>& b) {
  using std::abs;
  auto alpha = [&](ModeId m, const char* which) {
    const auto mean = reg.mode_means(m);
    const Scalar tol = Scalar(1e-9) * std::max(Scalar(1), abs(mean(0)));
    if (abs(mean(1)) > tol)
      throw std::invalid_argument(std::string(which) +
                                  " constituent has a nonzero X- mean; put optical phases on the beam");
    return mean(0) / Scalar(2);
  };
  return {alpha(b.h, "H"), alpha(b.v, "V"), b.theta};
}

template <typename Scalar>
StokesMeansT<Scalar> stokes_means(const BeamAmplitudes<Scalar>& p) {
  using std::cos;
  using std::sin;
  const Scalar hh = p.alpha_h * p.alpha_h, vv = p.alpha_v * p.alpha_v, hv = p.alpha_h * p.alpha_v;
  return {hh + vv, hh - vv, Scalar(2) * hv * cos(p.theta), Scalar(2) * hv * sin(p.theta)};
}

template <typename Scalar>
StokesMeansT<Scalar> stokes_means(const GaussianRegister<Scalar>& reg, const PolBeamT<Scalar>& b) {
  return stokes_means(beam_amplitudes(reg, b));
}

/// First-order fluctuation dS_i of a beam as a form over the register.
template <typename Scalar>
LinearFormT<Scalar> stokes_fluctuation_form(const GaussianRegister<Scalar>& reg, const PolBeamT<Scalar>& b,
                                            StokesIndex i) {
  using std::cos;
  using std::sin;
  const auto p = beam_amplitudes(reg, b);
  const Scalar c = cos(p.theta), s = sin(p.theta);
  const Eigen::Index h = 2 * Eigen::Index(b.h.index), v = 2 * Eigen::Index(b.v.index);

  LinearFormT<Scalar> f = reg.zero_form();
  switch (i) {
    case StokesIndex::S1:
      f(h) = p.alpha_h;
      f(v) = -p.alpha_v;
      break;
    case StokesIndex::S2:
      f(h) = p.alpha_v * c;
      f(h + 1) = p.alpha_v * s;
      f(v) = p.alpha_h * c;
      f(v + 1) = -p.alpha_h * s;
      break;
    case StokesIndex::S3:
      f(h) = p.alpha_v * s;
      f(h + 1) = -p.alpha_v * c;
      f(v) = p.alpha_h * s;
      f(v + 1) = p.alpha_h * c;
      break;
  }
  return f;
}

/// |[dS_i, dS_j]| for a beam with the given mean field:
/// (1,2): 4 aH aV |sin theta|, (1,3): 4 aH aV |cos theta|, (2,3): 2 |aH^2 - aV^2|.
template <typename Scalar>
Scalar commutator_bound(const BeamAmplitudes<Scalar>& p, StokesIndex i, StokesIndex j) {
  using std::abs;
  using std::cos;
  using std::sin;
  if (i == j) throw std::invalid_argument("commutator bound needs two different Stokes operators");
  const int lo = std::min(to_int(i), to_int(j)), hi = std::max(to_int(i), to_int(j));
  const Scalar hv = abs(p.alpha_h * p.alpha_v);
  if (lo == 1 && hi == 2) return Scalar(4) * hv * abs(sin(p.theta));
  if (lo == 1 && hi == 3) return Scalar(4) * hv * abs(cos(p.theta));
  return Scalar(2) * abs(p.alpha_h * p.alpha_h - p.alpha_v * p.alpha_v);
}

/// The two beams must share alpha_H, alpha_V and |sin theta|, |cos theta|
/// (theta_y = +-theta_x + m pi) to relative precision 1e-6.
template <typename Scalar>
void check_symmetric(const BeamAmplitudes<Scalar>& x, const BeamAmplitudes<Scalar>& y) {
  using std::abs;
  using std::cos;
  using std::sin;
  const Scalar scale = std::max({abs(x.alpha_h), abs(x.alpha_v), Scalar(1e-300)});
  auto close = [&](Scalar a, Scalar b, Scalar ref) { return abs(a - b) <= Scalar(1e-6) * ref; };
  if (!close(abs(x.alpha_h), abs(y.alpha_h), scale) || !close(abs(x.alpha_v), abs(y.alpha_v), scale) ||
      !close(abs(sin(x.theta)), abs(sin(y.theta)), Scalar(1)) ||
      !close(abs(cos(x.theta)), abs(cos(y.theta)), Scalar(1)))
    throw std::invalid_argument("beams are not in the symmetric configuration the criterion assumes");
}

template <typename Scalar>
void check_disjoint(const PolBeamT<Scalar>& x, const PolBeamT<Scalar>& y) {
  if (x.h == y.h || x.h == y.v || x.v == y.h || x.v == y.v)
    throw std::invalid_argument("the two beams share a mode");
}

/// min over +- of Var(f_x +- f_y); ties go to the sum.
template <typename Scalar>
SumDiffVariance<Scalar> sum_or_difference(const GaussianRegister<Scalar>& reg, const LinearFormT<Scalar>& fx,
                                          const LinearFormT<Scalar>& fy) {
  const Scalar plus = form_variance<Scalar>(reg, fx + fy);
  const Scalar minus = form_variance<Scalar>(reg, fx - fy);
  return minus < plus ? SumDiffVariance<Scalar>{minus, Sign::Difference} : SumDiffVariance<Scalar>{plus, Sign::Sum};
}

template <typename Scalar>
SumDiffVariance<Scalar> stokes_sumdiff_variance(const GaussianRegister<Scalar>& reg, const PolBeamT<Scalar>& bx,
                                                const PolBeamT<Scalar>& by, StokesIndex i) {
  check_disjoint(bx, by);
  return sum_or_difference(reg, stokes_fluctuation_form(reg, bx, i), stokes_fluctuation_form(reg, by, i));
}

}  // namespace cvpol
