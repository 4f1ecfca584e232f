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
#include "bayescap/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bayescap::numerics {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Series term log: t(m) = (2m+nu) ln(kappa/2) - lgamma(m+1) - lgamma(nu+m+1).
double series_term_log(double nu, double log_half_kappa, double m) {
  return (2.0 * m + nu) * log_half_kappa - std::lgamma(m + 1.0) -
         std::lgamma(nu + m + 1.0);
}

// Power series for ln I_nu(kappa), summed around its largest term so the
// cost is proportional to the peak width rather than to kappa. All terms
// are positive; there is no cancellation.
double log_bessel_series(double nu, double kappa) {
  const double log_half_kappa = std::log(kappa / 2.0);
  // Largest term index: 2m(m+nu) ~ kappa^2/2.
  const double m_peak_real =
      0.5 * (-nu + std::sqrt(nu * nu + kappa * kappa));
  const double m_peak = std::floor(std::max(0.0, m_peak_real));
  const double t_peak = series_term_log(nu, log_half_kappa, m_peak);

  // Terms ~45 nats below the peak are irrelevant at double precision.
  constexpr double kCutoff = 2.9e-20;  // exp(-45)
  const double q = kappa * kappa / 4.0;

  double sum = 1.0;  // peak term, normalized
  // Upward from the peak: ratio t(m+1)/t(m) = q / ((m+1)(nu+m+1)).
  double c = 1.0;
  for (double m = m_peak;; m += 1.0) {
    c *= q / ((m + 1.0) * (nu + m + 1.0));
    if (!(c > kCutoff)) break;
    sum += c;
  }
  // Downward from the peak: ratio t(m-1)/t(m) = m(nu+m)/q.
  c = 1.0;
  for (double m = m_peak; m >= 1.0; m -= 1.0) {
    c *= m * (nu + m) / q;
    if (!(c > kCutoff)) break;
    sum += c;
  }
  return t_peak + std::log(sum);
}

// Uniform large-order asymptotic expansion (Olver):
//   I_nu(nu z) ~ e^{nu eta} / (sqrt(2 pi nu) (1+z^2)^{1/4}) * sum u_k(t)/nu^k
// with t = 1/sqrt(1+z^2), eta = sqrt(1+z^2) + ln(z / (1 + sqrt(1+z^2))).
double log_bessel_uniform(double nu, double kappa) {
  const double z = kappa / nu;
  const double s = std::sqrt(1.0 + z * z);
  const double t = 1.0 / s;
  const double eta = s + std::log(z / (1.0 + s));

  const double t2 = t * t;
  const double u1 = t * (3.0 - 5.0 * t2) / 24.0;
  const double u2 = t2 * (81.0 + t2 * (-462.0 + 385.0 * t2)) / 1152.0;
  const double u3 =
      t * t2 *
      (30375.0 + t2 * (-369603.0 + t2 * (765765.0 - 425425.0 * t2))) /
      414720.0;
  const double u4 =
      t2 * t2 *
      (4465125.0 +
       t2 * (-94121676.0 +
             t2 * (349922430.0 + t2 * (-446185740.0 + 185910725.0 * t2)))) /
      39813120.0;
  const double u5 =
      t * t2 * t2 *
      (1519035525.0 +
       t2 * (-49286948607.0 +
             t2 * (284499769554.0 +
                   t2 * (-614135872350.0 +
                         t2 * (566098157625.0 - 188699385875.0 * t2))))) /
      6688604160.0;

  const double inv_nu = 1.0 / nu;
  const double series =
      1.0 +
      inv_nu * (u1 + inv_nu * (u2 + inv_nu * (u3 + inv_nu * (u4 + inv_nu * u5))));

  return nu * eta - 0.5 * std::log(2.0 * std::numbers::pi * nu) -
         0.25 * std::log1p(z * z) + std::log(series);
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("log_gamma: argument must be positive, got " +
                            std::to_string(x));
  }
  return std::lgamma(x);
}

double log_bessel_i(double nu, double kappa) {
  if (!(nu >= 0.0)) {
    throw std::domain_error("log_bessel_i: order must be non-negative, got " +
                            std::to_string(nu));
  }
  if (!(kappa >= 0.0)) {
    throw std::domain_error(
        "log_bessel_i: argument must be non-negative, got " +
        std::to_string(kappa));
  }
  if (kappa == 0.0) {
    return nu == 0.0 ? 0.0 : kNegInf;
  }
  if (nu >= 15.0) {
    return log_bessel_uniform(nu, kappa);
  }
  return log_bessel_series(nu, kappa);
}

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) {
    throw std::invalid_argument("log_sum_exp: empty input");
  }
  double m = kNegInf;
  for (double v : values) {
    if (std::isnan(v)) return v;
    m = std::max(m, v);
  }
  if (m == kNegInf) return kNegInf;  // all terms are exp(-inf) = 0
  double acc = 0.0;
  for (double v : values) {
    acc += std::exp(v - m);
  }
  return m + std::log(acc);
}

double log_binomial(std::size_t n, std::size_t k) {
  if (k > n) {
    throw std::domain_error("log_binomial: k > n");
  }
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  return std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) -
         std::lgamma(nd - kd + 1.0);
}

}  // namespace bayescap::numerics
