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
#include "bayescap/capacity.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "bayescap/special.hpp"
#include "bayescap/vec.hpp"

namespace bayescap::capacity {

namespace {

using numerics::IntegralEstimate;
using numerics::log_binomial;
using numerics::log_gamma;
using numerics::log_bessel_i;
using numerics::log_sum_exp;
using numerics::QuadratureMethod;
using numerics::QuadratureSpec;

constexpr double kLn2 = std::numbers::ln2;
constexpr double kPi = std::numbers::pi;

LogCapacity from_nat_log(double nat_log) {
  // Capacity >= 1 always; clamp fp dust just below zero.
  if (nat_log < 0.0 && nat_log > -1e-12) nat_log = 0.0;
  return {nat_log, nat_log / kLn2};
}

// ln of the Gaussian sup-density at distance `dist` beyond the ball surface
// (dist <= 0 means inside: the density peak).
double log_sup_density_gaussian(int p, double sigma, double dist) {
  const double log_norm = -0.5 * p * std::log(2.0 * kPi * sigma * sigma);
  if (dist <= 0.0) return log_norm;
  return log_norm - dist * dist / (2.0 * sigma * sigma);
}

}  // namespace

void GaussianMechSpec::validate() const {
  if (p < 1) throw std::domain_error("GaussianMechSpec: p must be >= 1");
  if (!(sigma > 0.0)) {
    throw std::domain_error("GaussianMechSpec: sigma must be > 0");
  }
  if (!(radius_R > 0.0)) {
    throw std::domain_error("GaussianMechSpec: radius_R must be > 0");
  }
  if (batch_L < 1) {
    throw std::domain_error("GaussianMechSpec: batch_L must be >= 1");
  }
  if (clip_c != 1.0) {
    throw std::domain_error(
        "GaussianMechSpec: the closed form is stated for clip_c = 1");
  }
}

void VmfMechSpec::validate() const {
  if (p < 2) throw std::domain_error("VmfMechSpec: p must be >= 2");
  if (!(kappa > 0.0)) throw std::domain_error("VmfMechSpec: kappa must be > 0");
}

LogCapacity log_bayes_capacity_gaussian(const GaussianMechSpec& spec,
                                        GaussianCoefficient variant) {
  spec.validate();
  const int p = spec.p;
  const double sigma = spec.sigma;
  const double R = spec.radius_R;
  const double log_sqrt2_sigma = 0.5 * kLn2 + std::log(sigma);
  const double log_R = std::log(R);

  // ln Z, with Z = sum_{i=0}^{p-1} Gamma((p-i)/2) (sqrt2 sigma)^{p-i}
  //                C(p-1, i) R^i, summed stably in log space.
  std::vector<double> terms(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) {
    terms[static_cast<std::size_t>(i)] =
        log_gamma(0.5 * (p - i)) + (p - i) * log_sqrt2_sigma +
        log_binomial(static_cast<std::size_t>(p - 1),
                     static_cast<std::size_t>(i)) +
        i * log_R;
  }
  const double log_z = log_sum_exp(terms);

  const double log_common =
      log_gamma(0.5 * p) + 0.5 * p * kLn2 + p * std::log(sigma);
  double log_tail = log_z - log_common;
  if (variant == GaussianCoefficient::theorem_literal) log_tail += kLn2;

  const double log_interior =
      p * log_R - log_gamma(0.5 * p + 1.0) - 0.5 * p * kLn2 -
      p * std::log(sigma);

  const std::array<double, 2> parts{log_tail, log_interior};
  return from_nat_log(log_sum_exp(parts));
}

LogCapacity log_bayes_capacity_vmf(const VmfMechSpec& spec) {
  spec.validate();
  const double half_p = 0.5 * spec.p;
  const double nu = half_p - 1.0;
  const double nat =
      kLn2 - log_gamma(half_p) + nu * std::log(spec.kappa) - half_p * kLn2 -
      log_bessel_i(nu, spec.kappa) + spec.kappa;
  return from_nat_log(nat);
}

IntegralEstimate capacity_oracle_gaussian(const GaussianMechSpec& spec,
                                          const QuadratureSpec& quad) {
  spec.validate();
  quad.validate();
  if (spec.p > 3) {
    throw std::invalid_argument(
        "capacity_oracle_gaussian: unsupported dimension p = " +
        std::to_string(spec.p) + " (oracle requires p <= 3)");
  }
  const int p = spec.p;
  const double sigma = spec.sigma;
  const double R = spec.radius_R;
  // Gaussian tail mass beyond 12 sigma is below 1e-30.
  const double T = std::max(quad.truncation, R + 12.0 * sigma);

  // sup_x f(x)(y): the center can sit at y itself inside the ball, and at
  // the nearest surface point R y/|y| outside it.
  auto sup_density = [&](std::span<const double> y) {
    const double r = norm2(y);
    return std::exp(log_sup_density_gaussian(p, sigma, r - R));
  };

  const IntegralEstimate interior =
      numerics::integrate_shell(p, sup_density, 0.0, R, quad.resolution);
  const IntegralEstimate exterior =
      numerics::integrate_shell(p, sup_density, R, T, quad.resolution);
  return {interior.value + exterior.value, interior.error + exterior.error};
}

IntegralEstimate capacity_oracle_vmf(const VmfMechSpec& spec,
                                     const QuadratureSpec& quad) {
  spec.validate();
  quad.validate();
  if (spec.p != 2 && spec.p != 3) {
    throw std::invalid_argument(
        "capacity_oracle_vmf: unsupported dimension p = " +
        std::to_string(spec.p) + " (oracle requires p in {2, 3})");
  }
  const double nu = 0.5 * spec.p - 1.0;
  // ln C_{p,kappa} = (nu+1) ln(2 pi) + ln I_nu(kappa) - nu ln kappa.
  const double log_c = (nu + 1.0) * std::log(2.0 * kPi) +
                       log_bessel_i(nu, spec.kappa) -
                       nu * std::log(spec.kappa);
  // The pointwise supremum over X at output y is the density centred at y
  // itself: exp(kappa * y.y) / C = exp(kappa) / C for every y on the sphere.
  auto sup_density = [&](std::span<const double> y) {
    return std::exp(spec.kappa * dot(y, y) - log_c);
  };
  return numerics::integrate_sphere_surface(spec.p, sup_density,
                                            quad.resolution);
}

SaferOrdering safer_than(const LogCapacity& a, const LogCapacity& b) {
  if (std::abs(a.nat_log - b.nat_log) <= 1e-12) return SaferOrdering::tie;
  return a.nat_log < b.nat_log ? SaferOrdering::a_safer
                               : SaferOrdering::b_safer;
}

VariantSelection select_gaussian_coefficient(int oracle_resolution) {
  VariantSelection out;
  int proof_wins = 0;
  int literal_wins = 0;
  double max_err_proof = 0.0;
  double max_err_literal = 0.0;
  for (int p : {1, 2, 3}) {
    for (double sigma : {0.5, 1.0, 2.0}) {
      for (double R : {1.0, 2.0}) {
        GaussianMechSpec spec{p, sigma, 1.0, 1, R};
        QuadratureSpec quad{QuadratureMethod::adaptive_1d, oracle_resolution,
                            R + 12.0 * sigma};
        const double oracle = capacity_oracle_gaussian(spec, quad).value;
        const double proof = std::exp(
            log_bayes_capacity_gaussian(spec, GaussianCoefficient::proof_derived)
                .nat_log);
        const double literal = std::exp(
            log_bayes_capacity_gaussian(spec,
                                        GaussianCoefficient::theorem_literal)
                .nat_log);
        const double err_proof = std::abs(proof / oracle - 1.0);
        const double err_literal = std::abs(literal / oracle - 1.0);
        max_err_proof = std::max(max_err_proof, err_proof);
        max_err_literal = std::max(max_err_literal, err_literal);
        (err_proof <= err_literal ? proof_wins : literal_wins) += 1;
        ++out.grid_points;
      }
    }
  }
  const bool proof_selected = proof_wins >= literal_wins;
  out.selected = proof_selected ? GaussianCoefficient::proof_derived
                                : GaussianCoefficient::theorem_literal;
  out.unanimous = proof_wins == out.grid_points || literal_wins == out.grid_points;
  out.max_rel_err_selected = proof_selected ? max_err_proof : max_err_literal;
  out.max_rel_err_rejected = proof_selected ? max_err_literal : max_err_proof;
  return out;
}

const char* to_string(GaussianCoefficient v) {
  return v == GaussianCoefficient::proof_derived ? "proof-derived"
                                                 : "theorem-literal";
}

}  // namespace bayescap::capacity
