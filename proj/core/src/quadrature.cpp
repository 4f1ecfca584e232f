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
#include "bayescap/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bayescap::numerics {

namespace {

constexpr double kPi = std::numbers::pi;

// 16-point Gauss-Legendre rule on [-1, 1].
constexpr std::array<double, 8> kGlNodes = {
    0.0950125098376374401853193, 0.2816035507792589132304605,
    0.4580167776572273863424194, 0.6178762444026437484466718,
    0.7554044083550030338951012, 0.8656312023878317438804679,
    0.9445750230732325760779884, 0.9894009349916499325961542,
};
constexpr std::array<double, 8> kGlWeights = {
    0.1894506104550684962853967, 0.1826034150449235888667637,
    0.1691565193950025381893121, 0.1495959888165767320815017,
    0.1246289712555338720524763, 0.0951585116824927848099251,
    0.0622535239386478928628438, 0.0271524594117540948517806,
};

[[noreturn]] void throw_nonfinite(std::span<const double> pt) {
  std::string where = "(";
  for (std::size_t i = 0; i < pt.size(); ++i) {
    if (i) where += ", ";
    where += std::to_string(pt[i]);
  }
  where += ")";
  throw std::runtime_error(
      "integrate_sup_density: density is not finite at " + where);
}

double eval(const Density& f, std::span<const double> pt) {
  const double v = f(pt);
  if (!std::isfinite(v)) throw_nonfinite(pt);
  return v;
}

// Composite 16-point Gauss-Legendre over [a, b] with roughly `nodes` points.
double composite_gl(const std::function<double(double)>& f, double a, double b,
                    int nodes) {
  const int panels = std::max(1, nodes / 16);
  const double h = (b - a) / panels;
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    const double half = 0.5 * h;
    double panel = 0.0;
    for (std::size_t i = 0; i < kGlNodes.size(); ++i) {
      panel += kGlWeights[i] *
               (f(mid - half * kGlNodes[i]) + f(mid + half * kGlNodes[i]));
    }
    acc += panel * half;
  }
  return acc;
}

// Adaptive Simpson on [a, b]; accumulates an error estimate.
struct AdaptiveResult {
  double value;
  double error;
};

AdaptiveResult adaptive_simpson_rec(const std::function<double(double)>& f,
                                    double a, double b, double fa, double fm,
                                    double fb, double whole, double tol,
                                    int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return {left + right + delta / 15.0, std::abs(delta) / 15.0};
  }
  const AdaptiveResult l =
      adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1);
  const AdaptiveResult r =
      adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
  return {l.value + r.value, l.error + r.error};
}

AdaptiveResult adaptive_simpson(const std::function<double(double)>& f,
                                double a, double b, double tol, int panels) {
  const double h = (b - a) / panels;
  AdaptiveResult total{0.0, 0.0};
  for (int p = 0; p < panels; ++p) {
    const double pa = a + p * h;
    const double pb = pa + h;
    const double pm = 0.5 * (pa + pb);
    const double fa = f(pa);
    const double fm = f(pm);
    const double fb = f(pb);
    const double whole = h / 6.0 * (fa + 4.0 * fm + fb);
    const AdaptiveResult r = adaptive_simpson_rec(f, pa, pb, fa, fm, fb, whole,
                                                  tol / panels, 40);
    total.value += r.value;
    total.error += r.error;
  }
  return total;
}

double line_1d(const Density& f, double a, double b, int nodes) {
  auto g = [&](double x) {
    const std::array<double, 1> pt{x};
    return eval(f, pt);
  };
  return composite_gl(g, a, b, nodes);
}

// Annulus r in [r0, r1] in the plane; midpoint rule in the angle (periodic,
// so it converges spectrally for smooth densities), Gauss-Legendre radially.
double annulus_2d(const Density& f, double r0, double r1, int radial_nodes,
                  int angular_nodes) {
  const double dtheta = 2.0 * kPi / angular_nodes;
  double acc = 0.0;
  for (int j = 0; j < angular_nodes; ++j) {
    const double theta = (j + 0.5) * dtheta;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    auto g = [&](double r) {
      const std::array<double, 2> pt{r * c, r * s};
      return eval(f, pt) * r;
    };
    acc += composite_gl(g, r0, r1, radial_nodes);
  }
  return acc * dtheta;
}

// Shell r in [r0, r1] in 3-space; Gauss-Legendre in r and in u = cos(theta),
// midpoint in the azimuth.
double shell_3d(const Density& f, double r0, double r1, int radial_nodes,
                int polar_nodes, int azimuth_nodes) {
  const double dphi = 2.0 * kPi / azimuth_nodes;
  double acc = 0.0;
  for (int j = 0; j < azimuth_nodes; ++j) {
    const double phi = (j + 0.5) * dphi;
    const double cp = std::cos(phi);
    const double sp = std::sin(phi);
    auto over_u = [&](double u) {
      const double su = std::sqrt(std::max(0.0, 1.0 - u * u));
      auto g = [&](double r) {
        const std::array<double, 3> pt{r * su * cp, r * su * sp, r * u};
        return eval(f, pt) * r * r;
      };
      return composite_gl(g, r0, r1, radial_nodes);
    };
    acc += composite_gl(over_u, -1.0, 1.0, polar_nodes);
  }
  return acc * dphi;
}

double circle_surface(const Density& f, int nodes) {
  const double dtheta = 2.0 * kPi / nodes;
  double acc = 0.0;
  for (int j = 0; j < nodes; ++j) {
    const double theta = (j + 0.5) * dtheta;
    const std::array<double, 2> pt{std::cos(theta), std::sin(theta)};
    acc += eval(f, pt);
  }
  return acc * dtheta;
}

double sphere_surface(const Density& f, int polar_nodes, int azimuth_nodes) {
  const double dphi = 2.0 * kPi / azimuth_nodes;
  double acc = 0.0;
  for (int j = 0; j < azimuth_nodes; ++j) {
    const double phi = (j + 0.5) * dphi;
    const double cp = std::cos(phi);
    const double sp = std::sin(phi);
    auto over_u = [&](double u) {
      const double su = std::sqrt(std::max(0.0, 1.0 - u * u));
      const std::array<double, 3> pt{su * cp, su * sp, u};
      return eval(f, pt);
    };
    acc += composite_gl(over_u, -1.0, 1.0, polar_nodes);
  }
  return acc * dphi;
}

IntegralEstimate with_half_resolution_error(
    const std::function<double(int)>& run, int resolution) {
  const double full = run(resolution);
  const double half = run(std::max(16, resolution / 2));
  const double err =
      std::max(std::abs(full - half), 1e-15 * std::max(1.0, std::abs(full)));
  return {full, err};
}

}  // namespace

void QuadratureSpec::validate() const {
  if (resolution < 16) {
    throw std::invalid_argument("QuadratureSpec: resolution must be >= 16");
  }
  if (!(truncation > 0.0)) {
    throw std::invalid_argument("QuadratureSpec: truncation must be > 0");
  }
}

IntegralEstimate integrate_shell(int dim, const Density& density,
                                 double r_inner, double r_outer,
                                 int resolution) {
  if (dim < 1 || dim > 3) {
    throw std::invalid_argument("integrate_shell: dim must be 1, 2 or 3");
  }
  if (!(r_inner >= 0.0) || !(r_outer > r_inner)) {
    throw std::invalid_argument("integrate_shell: need 0 <= r_inner < r_outer");
  }
  resolution = std::max(16, resolution);
  switch (dim) {
    case 1:
      return with_half_resolution_error(
          [&](int n) {
            double v = line_1d(density, r_inner, r_outer, n);
            if (r_inner > 0.0) {
              v += line_1d(density, -r_outer, -r_inner, n);
            } else {
              v += line_1d(density, -r_outer, 0.0, n);
            }
            return v;
          },
          resolution);
    case 2:
      return with_half_resolution_error(
          [&](int n) {
            return annulus_2d(density, r_inner, r_outer, n, std::max(32, n / 2));
          },
          resolution);
    default:
      return with_half_resolution_error(
          [&](int n) {
            return shell_3d(density, r_inner, r_outer, n, std::max(24, n / 4),
                            std::max(24, n / 4));
          },
          resolution);
  }
}

IntegralEstimate integrate_sphere_surface(int p, const Density& density,
                                          int resolution) {
  if (p != 2 && p != 3) {
    throw std::invalid_argument("integrate_sphere_surface: p must be 2 or 3");
  }
  resolution = std::max(16, resolution);
  if (p == 2) {
    return with_half_resolution_error(
        [&](int n) { return circle_surface(density, n); }, resolution);
  }
  return with_half_resolution_error(
      [&](int n) { return sphere_surface(density, n, std::max(32, n)); },
      resolution);
}

IntegralEstimate integrate_sup_density(const Density& density,
                                       const QuadratureSpec& spec) {
  spec.validate();
  const double T = spec.truncation;
  switch (spec.method) {
    case QuadratureMethod::adaptive_1d: {
      auto g = [&](double x) {
        const std::array<double, 1> pt{x};
        return eval(density, pt);
      };
      // Coarse pass sets the absolute tolerance scale.
      const double rough = composite_gl(g, -T, T, 64);
      const double tol = std::max(1e-13, 1e-10 * std::max(1.0, std::abs(rough)));
      const AdaptiveResult r =
          adaptive_simpson(g, -T, T, tol, std::max(8, spec.resolution / 32));
      return {r.value, std::max(r.error, tol)};
    }
    case QuadratureMethod::polar_2d:
      return integrate_shell(2, density, 0.0, T, spec.resolution);
    case QuadratureMethod::spherical_3d:
      return integrate_shell(3, density, 0.0, T, spec.resolution);
    case QuadratureMethod::circle_1d:
      return integrate_sphere_surface(2, density, spec.resolution);
    case QuadratureMethod::sphere_2d:
      return integrate_sphere_surface(3, density, spec.resolution);
  }
  throw std::logic_error("integrate_sup_density: unknown method");
}

}  // namespace bayescap::numerics
