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

#pragma once

#include <cmath>

#include "cvpol/errors.hpp"

namespace cvpol {

/// Lorentzian squeezing spectrum of a cavity source. A qualitative model:
///   V+(f) = 1 - (1 - vmin) / (1 + (f/fc)^2),   V-(f) = 1 + (vmax - 1) / (1 + (f/fc)^2).
/// V+(f) V-(f) >= 1 at every f exactly when vmin * vmax >= 1.
class SqueezingSpectrum {
 public:
  SqueezingSpectrum(double vmin, double vmax, double fc) : vmin_(vmin), vmax_(vmax), fc_(fc) {
    if (!(vmin > 0.0 && vmin <= 1.0)) throw PhysicsError("spectrum vmin must lie in (0, 1]");
    if (!(vmax >= 1.0 && std::isfinite(vmax))) throw PhysicsError("spectrum vmax must be at least 1");
    if (!(fc > 0.0 && std::isfinite(fc))) throw PhysicsError("spectrum corner frequency must be positive");
    if (vmin * vmax < 1.0 - 1e-12) throw PhysicsError("spectrum needs vmin * vmax >= 1");
  }

  double vplus(double f) const { return 1.0 - (1.0 - vmin_) * lorentzian(f); }
  double vminus(double f) const { return 1.0 + (vmax_ - 1.0) * lorentzian(f); }

  double vmin() const { return vmin_; }
  double vmax() const { return vmax_; }
  double corner() const { return fc_; }

 private:
  double lorentzian(double f) const {
    const double x = f / fc_;
    return 1.0 / (1.0 + x * x);
  }

  double vmin_;
  double vmax_;
  double fc_;
};

}  // namespace cvpol
