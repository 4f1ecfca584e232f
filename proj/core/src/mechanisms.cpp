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
#include "bayescap/mechanisms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "bayescap/special.hpp"

namespace bayescap::mech {

namespace {

constexpr int kVmfRejectionCap = 1000;  // iterations per draw

// Gamma(shape, 1) via Marsaglia-Tsang, boosted for shape < 1.
double gamma_draw(double shape, SeededRng& rng) {
  if (shape < 1.0) {
    const double u = rng.uniform_pos();
    return gamma_draw(shape + 1.0, rng) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_pos();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double beta_draw(double a, double b, SeededRng& rng) {
  const double x = gamma_draw(a, rng);
  const double y = gamma_draw(b, rng);
  return x / (x + y);
}

}  // namespace

Vector clip(const Vector& v, double c) {
  if (!(c > 0.0)) throw std::domain_error("clip: bound must be positive");
  const double n = norm2(v);
  if (n <= c) return v;
  Vector out(v);
  const double scale = c / n;
  for (double& x : out) x *= scale;
  return out;
}

Vector gaussian_perturb(const Vector& v, double sigma, double c, int L,
                        SeededRng& rng) {
  if (sigma < 0.0) {
    throw std::domain_error("gaussian_perturb: sigma must be >= 0");
  }
  if (!(c > 0.0)) {
    throw std::domain_error("gaussian_perturb: clip bound must be positive");
  }
  if (L < 1) {
    throw std::domain_error("gaussian_perturb: group size must be >= 1");
  }
  if (sigma == 0.0) return v;
  Vector out(v);
  const double stddev = c * sigma / L;
  for (double& x : out) x += stddev * rng.normal();
  return out;
}

Vector scale_to_sphere(const Vector& v) {
  const double n = norm2(v);
  if (n == 0.0) {
    throw std::domain_error("scale_to_sphere: zero vector has no direction");
  }
  Vector out(v);
  for (double& x : out) x /= n;
  return out;
}

VmfDensityParams::VmfDensityParams(Vector mu_in, double kappa_in)
    : mu(std::move(mu_in)), kappa(kappa_in), p(static_cast<int>(mu.size())) {
  if (p < 2) throw std::invalid_argument("VmfDensityParams: p must be >= 2");
  if (!(kappa > 0.0)) {
    throw std::invalid_argument("VmfDensityParams: kappa must be > 0");
  }
  if (std::abs(norm2(mu) - 1.0) > 1e-9) {
    throw std::invalid_argument(
        "VmfDensityParams: mean direction must be a unit vector");
  }
}

double vmf_log_density(const VmfDensityParams& params, const Vector& y) {
  if (static_cast<int>(y.size()) != params.p) {
    throw std::invalid_argument("vmf_log_density: dimension mismatch");
  }
  if (std::abs(norm2(y) - 1.0) > 1e-9) {
    throw std::domain_error(
        "vmf_log_density: y must be a unit vector, |y| = " +
        std::to_string(norm2(y)));
  }
  const double nu = 0.5 * params.p - 1.0;
  const double log_c = (nu + 1.0) * std::log(2.0 * std::numbers::pi) +
                       numerics::log_bessel_i(nu, params.kappa) -
                       nu * std::log(params.kappa);
  return params.kappa * dot(params.mu, y) - log_c;
}

Vector uniform_unit_vector(int p, SeededRng& rng) {
  if (p < 1) throw std::invalid_argument("uniform_unit_vector: p must be >= 1");
  Vector v(static_cast<std::size_t>(p));
  for (;;) {
    for (double& x : v) x = rng.normal();
    const double n = norm2(v);
    if (n > 1e-12) {
      for (double& x : v) x /= n;
      return v;
    }
  }
}

Vector vmf_sample(const VmfDensityParams& params, SeededRng& rng) {
  const int p = params.p;
  const double kappa = params.kappa;
  const double dim = static_cast<double>(p - 1);

  // Wood's envelope for the polar cosine w.
  const double b = dim / (2.0 * kappa + std::sqrt(4.0 * kappa * kappa + dim * dim));
  const double x0 = (1.0 - b) / (1.0 + b);
  const double c = kappa * x0 + dim * std::log(1.0 - x0 * x0);

  double w = x0;
  bool accepted = false;
  for (int it = 0; it < kVmfRejectionCap; ++it) {
    const double z = beta_draw(0.5 * dim, 0.5 * dim, rng);
    w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
    const double u = rng.uniform_pos();
    if (kappa * w + dim * std::log(1.0 - x0 * w) - c >= std::log(u)) {
      accepted = true;
      break;
    }
  }
  if (!accepted) {
    // The envelope acceptance rate is bounded well away from zero for every
    // (p, kappa); reaching the cap indicates a broken rng stream.
    throw std::runtime_error("vmf_sample: rejection cap exceeded");
  }

  // Uniform tangent direction orthogonal to mu.
  Vector tangent(static_cast<std::size_t>(p));
  for (;;) {
    for (double& x : tangent) x = rng.normal();
    const double along = dot(tangent, params.mu);
    for (int i = 0; i < p; ++i) tangent[i] -= along * params.mu[i];
    const double n = norm2(tangent);
    if (n > 1e-12) {
      for (double& x : tangent) x /= n;
      break;
    }
  }

  const double s = std::sqrt(std::max(0.0, 1.0 - w * w));
  Vector out(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) out[i] = w * params.mu[i] + s * tangent[i];
  // Guard against accumulated rounding: the output contract is unit norm.
  const double n = norm2(out);
  for (double& x : out) x /= n;
  return out;
}

}  // namespace bayescap::mech
