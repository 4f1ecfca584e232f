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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "bayescap/rng.hpp"
#include "bayescap/special.hpp"
#include "support/test_oracles.hpp"

using namespace bayescap::numerics;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("log_gamma matches known values") {
  CHECK(log_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(log_gamma(5.0) == doctest::Approx(std::log(24.0)).epsilon(1e-13));
  // ln Gamma(1/2) = ln sqrt(pi); series-oracle value.
  CHECK(log_gamma(0.5) == doctest::Approx(0.5723649429247001).epsilon(1e-13));
  CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
  CHECK_THROWS_AS(log_gamma(-2.5), std::domain_error);
}

TEST_CASE("log_gamma recurrence over sampled range") {
  bayescap::SeededRng rng(17);
  for (int i = 0; i < 200; ++i) {
    const double x = std::exp(rng.uniform() * 12.0 - 2.0);  // ~[0.14, 2e4]
    const double lhs = log_gamma(x + 1.0);
    const double rhs = log_gamma(x) + std::log(x);
    CHECK(std::abs(lhs - rhs) <=
          1e-10 * std::max(1.0, std::max(std::abs(lhs), std::abs(rhs))));
  }
  // Large-argument relative accuracy: extremes of the contract range.
  CHECK(log_gamma(1e6 + 1.0) - log_gamma(1e6) ==
        doctest::Approx(std::log(1e6)).epsilon(1e-12));
}

TEST_CASE("log_bessel_i small-order values against the series oracle") {
  CHECK(log_bessel_i(0.0, 0.0) == 0.0);
  CHECK(log_bessel_i(2.0, 0.0) == -kInf);
  // ln I_0(1); oracle-computed (spec's printed 8th digit was off).
  CHECK(log_bessel_i(0.0, 1.0) ==
        doctest::Approx(test_oracle::log_bessel_series(0.0, 1.0))
            .epsilon(1e-12));
  CHECK(log_bessel_i(0.0, 1.0) == doctest::Approx(0.235914358507).epsilon(1e-10));
  // Half-integer closed form I_{1/2}(k) = sqrt(2/(pi k)) sinh k.
  const double closed =
      std::log(std::sqrt(2.0 / (3.14159265358979323846 * 2.0)) * std::sinh(2.0));
  CHECK(log_bessel_i(0.5, 2.0) == doctest::Approx(closed).epsilon(1e-12));
  CHECK_THROWS_AS(log_bessel_i(-1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(log_bessel_i(1.0, -1.0), std::domain_error);
}

TEST_CASE("log_bessel_i agrees with the oracle across regimes") {
  // Covers the series regime, the uniform-asymptotic regime (nu >= 15) and
  // the dispatch boundary.
  const std::vector<double> nus = {0.0, 0.5,  1.0,  3.0,   7.5,  14.9,
                                   15.0, 15.1, 40.0, 604.0, 5000.0};
  const std::vector<double> kappas = {1e-6, 0.1, 1.0, 10.0, 100.0,
                                      1000.0, 20000.0};
  for (double nu : nus) {
    for (double kappa : kappas) {
      const double got = log_bessel_i(nu, kappa);
      const double want = test_oracle::log_bessel_series(nu, kappa);
      const double tol = 1e-8 * std::max(1.0, std::abs(want));
      INFO("nu=", nu, " kappa=", kappa, " got=", got, " want=", want);
      CHECK(std::abs(got - want) <= tol);
    }
  }
  // Experiment-scale order: nu = p/2 - 1 at p = 1e5.
  const double nu = 49999.0;
  for (double kappa : {0.5, 173.0, 49999.0, 2e5}) {
    const double got = log_bessel_i(nu, kappa);
    const double want = test_oracle::log_bessel_series(nu, kappa);
    INFO("kappa=", kappa);
    CHECK(std::abs(got - want) <= 1e-8 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("log_bessel_i three-term recurrence in log space") {
  // I_{nu-1}(k) - I_{nu+1}(k) = (2 nu / k) I_nu(k).
  for (double nu : {1.0, 2.5, 6.0, 12.0, 30.0, 100.0}) {
    for (double kappa : {0.5, 2.0, 10.0, 80.0}) {
      const double lo = log_bessel_i(nu - 1.0, kappa);
      const double hi = log_bessel_i(nu + 1.0, kappa);
      const double mid = log_bessel_i(nu, kappa);
      const double lhs = std::exp(lo - mid) - std::exp(hi - mid);
      const double rhs = 2.0 * nu / kappa;
      INFO("nu=", nu, " kappa=", kappa);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
    }
  }
}

TEST_CASE("log_bessel_i regime overlap is consistent") {
  // The series is exact (up to rounding) on both sides of the nu = 15
  // dispatch boundary; crossing it must not introduce a jump.
  for (double kappa : {0.3, 3.0, 33.0, 700.0}) {
    const double below = log_bessel_i(14.999999, kappa);
    const double above = log_bessel_i(15.000001, kappa);
    CHECK(std::abs(below - above) <=
          1e-6 * std::max(1.0, std::abs(below)) + 1e-4);
  }
}

TEST_CASE("log_sum_exp basics") {
  const std::vector<double> two_zeros = {0.0, 0.0};
  CHECK(log_sum_exp(two_zeros) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  const std::vector<double> big = {1000.0, 1000.0};
  CHECK(log_sum_exp(big) ==
        doctest::Approx(1000.0 + std::log(2.0)).epsilon(1e-15));
  const std::vector<double> with_neg_inf = {0.0, -kInf};
  CHECK(log_sum_exp(with_neg_inf) == 0.0);
  const std::vector<double> all_neg_inf = {-kInf, -kInf};
  CHECK(log_sum_exp(all_neg_inf) == -kInf);
  CHECK_THROWS_AS(log_sum_exp(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("log_binomial against the exact big-integer oracle") {
  CHECK(log_binomial(4, 2) == doctest::Approx(std::log(6.0)).epsilon(1e-13));
  CHECK(log_binomial(10, 0) == doctest::Approx(0.0).epsilon(1e-15));
  // C(60,30) = 118264581564861424; ln = 39.3117007260...
  const double exact = test_oracle::log_binomial_exact(60, 30);
  CHECK(exact == doctest::Approx(39.31170072601126).epsilon(1e-12));
  CHECK(log_binomial(60, 30) == doctest::Approx(exact).epsilon(1e-12));
  for (unsigned n : {1u, 7u, 23u, 61u, 97u}) {
    for (unsigned k = 0; k <= n; k += 1 + n / 7) {
      CHECK(log_binomial(n, k) ==
            doctest::Approx(test_oracle::log_binomial_exact(n, k))
                .epsilon(1e-11));
    }
  }
  CHECK_THROWS_AS(log_binomial(3, 4), std::domain_error);
}
