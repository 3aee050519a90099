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

#include "cvpol/errors.hpp"
#include "cvpol/scenario.hpp"

namespace cvpol {

namespace {

constexpr double kPi = std::numbers::pi;

struct EntangledPair {
  ModeId x, y;
};

// Squeezers a and b on a 50/50 beamsplitter with pi/2 phase: X+_x + X+_y and
// X-_x - X-_y carry the squeezed noise. Only a carries a mean field, so both
// outputs get the same real amplitude alpha_out.
EntangledPair entangle(Register& reg, double vplus, double vminus, double alpha_out) {
  const ModeId a = reg.add_mode(Squeezed<double>{vplus, vminus, std::sqrt(2.0) * alpha_out});
  const ModeId b = reg.add_mode(Squeezed<double>{vplus, vminus, 0.0});
  reg.apply_beamsplitter(a, b, 0.5, kPi / 2);
  return {a, b};
}

}  // namespace

PaperExperiment build_paper_experiment(const PaperExperimentParams& p) {
  if (!(p.eta_interference > 0.0 && p.eta_interference <= 1.0) || !(p.eta_pol > 0.0 && p.eta_pol <= 1.0))
    throw PhysicsError("efficiencies must lie in (0, 1]");
  if (!(p.ratio > 0.0) || !(p.alpha_h > 0.0)) throw PhysicsError("amplitudes must be positive");
  if (p.theta_sign != 1 && p.theta_sign != -1) throw std::invalid_argument("theta_sign must be +1 or -1");

  PaperExperiment out;
  Register& reg = out.reg;
  // Amplitudes are set so that alpha_h is what reaches the polarizing beamsplitter.
  const double alpha_entangled = p.alpha_h / std::sqrt(p.eta_interference * p.eta_pol);

  if (p.placement == InterferencePlacement::BeforeEntangler) {
    const ModeId a = reg.add_mode(Squeezed<double>{p.vplus, p.vminus, std::sqrt(2.0) * alpha_entangled});
    const ModeId b = reg.add_mode(Squeezed<double>{p.vplus, p.vminus, 0.0});
    reg.apply_loss(a, p.eta_interference);
    reg.apply_loss(b, p.eta_interference);
    reg.apply_beamsplitter(a, b, 0.5, kPi / 2);
    out.h_x = a;
    out.h_y = b;
  } else {
    const auto pair = entangle(reg, p.vplus, p.vminus, alpha_entangled);
    out.h_x = pair.x;
    out.h_y = pair.y;
    reg.apply_loss(out.h_x, p.eta_interference);
    reg.apply_loss(out.h_y, p.eta_interference);
  }
  out.duan = duan_quadrature(reg, out.h_x, out.h_y);
  out.epr_quad = epr_product_quadrature(reg, out.h_x, out.h_y);

  reg.apply_loss(out.h_x, p.eta_pol);
  reg.apply_loss(out.h_y, p.eta_pol);

  const double alpha_v = std::sqrt(p.ratio) * p.alpha_h;
  out.v_x = reg.add_mode(Coherent<double>{alpha_v});
  out.v_y = reg.add_mode(Coherent<double>{alpha_v});
  out.beam_x = make_beam(reg, out.h_x, out.v_x, p.theta);
  out.beam_y = make_beam(reg, out.h_y, out.v_y, p.theta_sign * p.theta);
  return out;
}

SymmetricScheme build_symmetric_scheme(double alpha, double vplus, double vminus, int theta_sign) {
  if (!(alpha > 0.0)) throw PhysicsError("alpha must be positive");
  if (theta_sign != 1 && theta_sign != -1) throw std::invalid_argument("theta_sign must be +1 or -1");
  const double sqrt3 = std::sqrt(3.0);
  const double alpha_h = std::sqrt((sqrt3 + 1.0) / 2.0) * alpha;
  const double alpha_v = std::sqrt((sqrt3 - 1.0) / 2.0) * alpha;

  SymmetricScheme out;
  const auto h = entangle(out.reg, vplus, vminus, alpha_h);
  const auto v = entangle(out.reg, vplus, vminus, alpha_v);
  out.h_x = h.x;
  out.h_y = h.y;
  out.v_x = v.x;
  out.v_y = v.y;
  out.beam_x = make_beam(out.reg, h.x, v.x, kPi / 4);
  out.beam_y = make_beam(out.reg, h.y, v.y, -theta_sign * kPi / 4);
  return out;
}

}  // namespace cvpol
