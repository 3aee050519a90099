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

#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "cvpol/criteria.hpp"
#include "cvpol/scenario.hpp"

using namespace cvpol;

namespace {

constexpr double kPi = std::numbers::pi;

struct Pair {
  Register reg;
  ModeId x, y;
};

Pair entangled(double vp, double vm) {
  Pair p;
  p.x = p.reg.add_mode(Squeezed<double>{vp, vm});
  p.y = p.reg.add_mode(Squeezed<double>{vp, vm});
  p.reg.apply_beamsplitter(p.x, p.y, 0.5, kPi / 2);
  return p;
}

Pair coherent_pair() {
  Pair p;
  p.x = p.reg.add_mode(Coherent<double>{1.0});
  p.y = p.reg.add_mode(Coherent<double>{3.0});
  return p;
}

// Golden-section minimum of v(g) = vx + 2 g c + g^2 vy, entries read straight
// from the covariance matrix.
double scanned_conditional(double vx, double c, double vy) {
  auto v = [&](double g) { return vx + 2 * g * c + g * g * vy; };
  double lo = -50.0, hi = 50.0;
  const double phi = (std::sqrt(5.0) - 1) / 2;
  for (int k = 0; k < 200; ++k) {
    const double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
    (v(a) < v(b) ? hi : lo) = (v(a) < v(b) ? b : a);
  }
  return v((lo + hi) / 2);
}

// Quadrature conditional variance after the entangler: Var = (V+ + V-)/2,
// Cov = (V+ - V-)/2, hence Var - Cov^2/Var = 2 V+ V- / (V+ + V-).
double closed_conditional(double vp, double vm) { return 2 * vp * vm / (vp + vm); }

}  // namespace

TEST_CASE("coherent modes sit exactly on the classical bound") {
  const Pair p = coherent_pair();
  const auto d = duan_quadrature(p.reg, p.x, p.y);
  const auto e = epr_product_quadrature(p.reg, p.x, p.y);
  CHECK(std::abs(d.value - 1.0) < 1e-12);
  CHECK(std::abs(e.value - 1.0) < 1e-12);
  CHECK(d.name == "duan");
  CHECK(e.name == "epr_quad");
  CHECK_FALSE(d.certifies());
  CHECK(d.correlation_term == 0.0);
}

TEST_CASE("pure two-squeezer entangler") {
  const Pair p = entangled(0.1, 10.0);
  const auto d = duan_quadrature(p.reg, p.x, p.y);
  CHECK(d.value == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(d.signs[0] == Sign::Sum);
  CHECK(d.signs[1] == Sign::Difference);
  CHECK(d.certifies());

  const auto e = epr_product_quadrature(p.reg, p.x, p.y);
  const double vc = 5.05 - 4.95 * 4.95 / 5.05;
  CHECK(vc == doctest::Approx(0.19801980198).epsilon(1e-10));
  CHECK(e.value == doctest::Approx(vc * vc).epsilon(1e-12));
  CHECK(e.value == doctest::Approx(0.039212).epsilon(1e-5));
  CHECK(e.gains[0] == doctest::Approx(4.95 / 5.05));
}

TEST_CASE("fitted quadrature squeezing") {
  const Pair p = entangled(0.44, 2.831);
  CHECK(duan_quadrature(p.reg, p.x, p.y).value == doctest::Approx(0.44).epsilon(1e-12));
  const double vc = closed_conditional(0.44, 2.831);
  CHECK(epr_product_quadrature(p.reg, p.x, p.y).value == doctest::Approx(vc * vc).epsilon(1e-12));
  CHECK(std::abs(vc * vc - 0.58) < 0.005);
}

TEST_CASE("conditional variance matches a brute-force gain scan") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> sq(0.05, 1.0), eta(0.2, 1.0), phase(0.0, 2 * kPi);
  for (int k = 0; k < 40; ++k) {
    const double vp = sq(rng);
    Pair p = entangled(vp, 1.0 / vp);
    p.reg.apply_loss(p.x, eta(rng));
    p.reg.apply_rotation(p.y, 0.1 * phase(rng));
    for (int q = 0; q < 2; ++q) {
      const Eigen::Index ix = 2 * Eigen::Index(p.x.index) + q, iy = 2 * Eigen::Index(p.y.index) + q;
      const double oracle = scanned_conditional(p.reg.cov()(ix, ix), p.reg.cov()(ix, iy), p.reg.cov()(iy, iy));
      const auto cv = conditional_variance(p.reg, p.reg.quadrature_form(p.x, q), p.reg.quadrature_form(p.y, q));
      CHECK(cv.value == doctest::Approx(oracle).epsilon(1e-9));
    }
  }
}

TEST_CASE("optimal gain is a minimum") {
  const Pair p = entangled(0.3, 4.0);
  const LinearForm fx = p.reg.quadrature_form(p.x, 0), fy = p.reg.quadrature_form(p.y, 0);
  const auto cv = conditional_variance(p.reg, fx, fy);
  for (double dg : {-1e-3, 1e-3}) {
    const LinearForm f = fx + (cv.gain + dg) * fy;
    CHECK(form_variance(p.reg, f) >= cv.value);
  }
}

TEST_CASE("zero-variance conditioning is an error") {
  Register reg;
  const ModeId x = reg.add_mode(Vacuum{});
  const ModeId y = reg.add_mode(Vacuum{});
  CHECK_THROWS_AS(conditional_variance(reg, reg.quadrature_form(x, 0), reg.zero_form()), std::domain_error);
  CHECK_THROWS_AS(duan_quadrature(reg, x, x), std::invalid_argument);
  CHECK_THROWS_AS(epr_product_quadrature(reg, y, y), std::invalid_argument);
}

TEST_CASE("loss never improves the quadrature inseparability") {
  // Equal loss on both modes maps I to eta I + (1 - eta): a pull towards 1.
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> sq(0.05, 1.0), eta(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const double vp = sq(rng);
    Pair p = entangled(vp, 1.0 / vp + sq(rng));
    double last = duan_quadrature(p.reg, p.x, p.y).value;
    for (int step = 0; step < 4; ++step) {
      const double e = eta(rng);
      p.reg.apply_loss(p.x, e);
      p.reg.apply_loss(p.y, e);
      const double now = duan_quadrature(p.reg, p.x, p.y).value;
      CHECK(now == doctest::Approx(e * last + 1 - e).epsilon(1e-12));
      if (last <= 1.0) CHECK(now >= last - 1e-12);
      last = now;
    }
  }
}

TEST_CASE("two-beam experiment: Stokes criteria against closed forms") {
  const auto e = build_paper_experiment(PaperExperimentParams{.eta_interference = 1.0});
  const double ah2 = 100.0, av2 = 3000.0, eta = 0.91, vp = 0.44, vm = 2.831;

  // theta = pi/2: dS2 = aV dX-_H - aH dX-_V, dS3 = aV dX+_H + aH dX+_V.
  const double d_quad = 2 * (eta * vp + 1 - eta);
  const double d2 = av2 * d_quad + 2 * ah2;
  const double bound23 = 2 * (av2 - ah2);
  const auto insep23 = stokes_inseparability(e.reg, e.beam_x, e.beam_y, StokesIndex::S2, StokesIndex::S3);
  CHECK(insep23.value == doctest::Approx((d2 + d2) / (2 * bound23)).epsilon(1e-12));
  CHECK(insep23.value == doctest::Approx(0.541793103).epsilon(1e-8));
  CHECK(insep23.commutator == doctest::Approx(5800.0));

  const double var_h = eta * (vp + vm) / 2 + 1 - eta;
  const double cov_h = eta * (vp - vm) / 2;
  const double var_s = av2 * var_h + ah2;
  const double vc = var_s - av2 * av2 * cov_h * cov_h / var_s;
  const auto epr23 = epr_product_stokes(e.reg, e.beam_x, e.beam_y, StokesIndex::S2, StokesIndex::S3);
  CHECK(epr23.value == doctest::Approx(vc * vc / (bound23 * bound23 / 4)).epsilon(1e-12));
  CHECK(epr23.name == "epr_stokes_S2S3");

  const double bound12 = 4 * std::sqrt(ah2 * av2);
  const double d1 = ah2 * d_quad + 2 * av2;
  const auto insep12 = stokes_inseparability(e.reg, e.beam_x, e.beam_y, StokesIndex::S1, StokesIndex::S2);
  CHECK(insep12.value == doctest::Approx((d1 + d2) / (2 * bound12)).epsilon(1e-12));
  CHECK(insep12.value > 1.5);

  const auto insep13 = stokes_inseparability(e.reg, e.beam_x, e.beam_y, StokesIndex::S1, StokesIndex::S3);
  CHECK(insep13.zero_bound);
  CHECK(std::isnan(insep13.value));
  CHECK_FALSE(insep13.certifies());
  CHECK(insep13.correlation_term > 0.0);
  CHECK(epr_product_stokes(e.reg, e.beam_x, e.beam_y, StokesIndex::S1, StokesIndex::S3).zero_bound);
}

TEST_CASE("coherent beams with unequal amplitudes stay above the bound") {
  auto e = build_paper_experiment(PaperExperimentParams{.vplus = 1.0, .vminus = 1.0});
  const auto insep = stokes_inseparability(e.reg, e.beam_x, e.beam_y, StokesIndex::S2, StokesIndex::S3);
  const auto epr = epr_product_stokes(e.reg, e.beam_x, e.beam_y, StokesIndex::S2, StokesIndex::S3);
  CHECK(insep.value == doctest::Approx(31.0 / 29.0).epsilon(1e-12));
  CHECK(epr.value == doctest::Approx((31.0 / 29.0) * (31.0 / 29.0)).epsilon(1e-12));
  CHECK(epr.value == doctest::Approx(1.142687).epsilon(1e-6));
}

TEST_CASE("asymmetric beams are rejected") {
  Register reg;
  const ModeId hx = reg.add_mode(Coherent<double>{1.0});
  const ModeId vx = reg.add_mode(Coherent<double>{2.0});
  const ModeId hy = reg.add_mode(Coherent<double>{1.5});
  const ModeId vy = reg.add_mode(Coherent<double>{2.0});
  const PolBeam bx = make_beam(reg, hx, vx, 0.3);
  const PolBeam by = make_beam(reg, hy, vy, 0.3);
  CHECK_THROWS_AS(stokes_inseparability(reg, bx, by, StokesIndex::S1, StokesIndex::S2), std::invalid_argument);
  CHECK_THROWS_AS(stokes_inseparability(reg, bx, bx, StokesIndex::S1, StokesIndex::S2), std::invalid_argument);
}

TEST_CASE("symmetric scheme: Stokes inseparability is sqrt3 times the quadrature one") {
  for (double vp : {0.05, 0.1, 0.3, 0.5, 0.8, 1.0}) {
    const auto s = build_symmetric_scheme(10.0, vp, 1.0 / vp);
    const double dq = duan_quadrature(s.reg, s.h_x, s.h_y).value;
    CHECK(dq == doctest::Approx(vp).epsilon(1e-12));
    for (int i = 1; i <= 3; ++i)
      for (int j = i + 1; j <= 3; ++j) {
        const auto r = stokes_inseparability(s.reg, s.beam_x, s.beam_y, stokes_index(i), stokes_index(j));
        CHECK(std::abs(r.value - std::sqrt(3.0) * dq) < 1e-9);
        CHECK(r.correlation_term < 1e-9);
      }
  }
  const double v_star = 1.0 / std::sqrt(3.0);
  const auto s = build_symmetric_scheme(10.0, v_star, 1.0 / v_star);
  CHECK(stokes_inseparability(s.reg, s.beam_x, s.beam_y, StokesIndex::S2, StokesIndex::S3).value ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("symmetric scheme with theta_y = theta_x") {
  // With X+ anticorrelated and X- correlated, S2 and S3 need theta_y = -theta_x;
  // the other branch mixes a squeezed and an antisqueezed combination.
  const auto s = build_symmetric_scheme(10.0, 0.1, 10.0, -1);
  CHECK(s.beam_y.theta == doctest::Approx(s.beam_x.theta));
  const double dq = duan_quadrature(s.reg, s.h_x, s.h_y).value;
  const auto r12 = stokes_inseparability(s.reg, s.beam_x, s.beam_y, StokesIndex::S1, StokesIndex::S2);
  const auto r23 = stokes_inseparability(s.reg, s.beam_x, s.beam_y, StokesIndex::S2, StokesIndex::S3);
  CHECK(r12.value > std::sqrt(3.0) * dq + 0.1);
  CHECK(r23.value > 1.0);
  // S1 contains X+ only and stays squeezed.
  CHECK(stokes_sumdiff_variance(s.reg, s.beam_x, s.beam_y, StokesIndex::S1).value ==
        doctest::Approx(std::sqrt(3.0) * 100.0 * 0.2).epsilon(1e-12));
}

TEST_CASE("conditional ellipse of the symmetric scheme") {
  const auto s = build_symmetric_scheme(10.0, 0.1, 10.0);
  for (int i = 1; i <= 3; ++i) {
    const auto e = conditional_ellipse(s.reg, s.beam_x, s.beam_y, stokes_index(i));
    CHECK(to_int(e.conditioned_on) == i);
    CHECK(to_int(e.observables[0]) != i);
    CHECK(to_int(e.observables[1]) != i);
    for (int k = 0; k < 2; ++k) {
      CHECK(e.normalized_conditional(k) == doctest::Approx(closed_conditional(0.1, 10.0)).epsilon(1e-9));
      CHECK(e.normalized_unconditional(k) == doctest::Approx(5.05).epsilon(1e-12));
      CHECK(e.conditional[k] <= e.unconditional[k] + 1e-9);
      CHECK(e.normalized_conditional(k) < e.normalized_dashed_bound());
    }
    CHECK(e.normalized_dashed_bound() == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
  }

  const auto coh = build_symmetric_scheme(10.0, 1.0, 1.0);
  const auto c = conditional_ellipse(coh.reg, coh.beam_x, coh.beam_y, StokesIndex::S1);
  CHECK(c.normalized_conditional(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.normalized_unconditional(1) == doctest::Approx(1.0).epsilon(1e-12));

  double previous = 0.0;
  for (double vp : {0.5, 0.9, 0.99, 0.999, 0.9999}) {
    const auto sch = build_symmetric_scheme(10.0, vp, 1.0 / vp);
    const double now = conditional_ellipse(sch.reg, sch.beam_x, sch.beam_y, StokesIndex::S2).normalized_conditional(0);
    CHECK(now > previous);
    CHECK(now <= 1.0 + 1e-12);
    previous = now;
  }
  CHECK(previous == doctest::Approx(1.0).epsilon(1e-6));

  const auto half = build_symmetric_scheme(10.0, 0.5, 2.0);
  CHECK(conditional_ellipse(half.reg, half.beam_x, half.beam_y, StokesIndex::S3).normalized_conditional(1) ==
        doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("bright-beam limit formulas") {
  CHECK(insep_s2s3_bright_limit(10.0, 1e6, 0.88, 0.88) == doctest::Approx(0.44).epsilon(1e-9));
  CHECK(insep_s1s2_bright_limit(10.0, std::sqrt(3000.0), 2.0, 0.88) ==
        doctest::Approx(std::sqrt(30.0) * 2.88 / 8).epsilon(1e-12));
}
