// Copyright 2026 The bayescap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef BAYESCAP_QUADRATURE_HPP_
#define BAYESCAP_QUADRATURE_HPP_

#include <functional>
#include <span>

namespace bayescap::numerics {

// Integration domains used by the continuous-capacity oracles.
//   adaptive_1d   line segment [-truncation, truncation]
//   polar_2d      disk of radius `truncation` in the plane
//   spherical_3d  ball of radius `truncation` in 3-space
//   circle_1d     surface of the unit circle S^1 (arc-length measure)
//   sphere_2d     surface of the unit sphere S^2 (area measure)
enum class QuadratureMethod {
  adaptive_1d,
  polar_2d,
  spherical_3d,
  circle_1d,
  sphere_2d,
};

struct QuadratureSpec {
  QuadratureMethod method = QuadratureMethod::adaptive_1d;
  int resolution = 256;      // node count along the main axis, >= 16
  double truncation = 10.0;  // outer radius for unbounded domains, > 0

  void validate() const;
};

struct IntegralEstimate {
  double value = 0.0;
  double error = 0.0;  // absolute-error estimate
};

// Densities receive Cartesian coordinates (dimension set by the domain).
using Density = std::function<double(std::span<const double>)>;

// Integral of a non-negative density over the domain named by `spec`.
// Throws std::runtime_error naming the coordinate if the density returns a
// non-finite value. Deterministic for a fixed spec; fixed-order reduction.
IntegralEstimate integrate_sup_density(const Density& density,
                                       const QuadratureSpec& spec);

// Lower-level pieces used by the capacity oracles, which integrate interior
// ball and exterior shell separately (the kink of a sup-density sits on the
// shared boundary).
//
// dim = 1 integrates over {r_inner <= |y| <= r_outer} on the line (both
// signs), dim = 2 over the annulus in the plane, dim = 3 over the shell in
// 3-space.
IntegralEstimate integrate_shell(int dim, const Density& density,
                                 double r_inner, double r_outer,
                                 int resolution);

// Surface integral over S^{p-1} for p = 2 (circle) or p = 3 (sphere).
IntegralEstimate integrate_sphere_surface(int p, const Density& density,
                                          int resolution);

}  // namespace bayescap::numerics

#endif  // BAYESCAP_QUADRATURE_HPP_
