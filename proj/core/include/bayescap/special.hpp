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
#ifndef BAYESCAP_SPECIAL_HPP_
#define BAYESCAP_SPECIAL_HPP_

#include <cstddef>
#include <span>

namespace bayescap::numerics {

// Natural log of the Gamma function for x > 0.
// Throws std::domain_error for x <= 0.
double log_gamma(double x);

// Natural log of the modified Bessel function of the first kind I_nu(kappa),
// nu >= 0, kappa >= 0, evaluated entirely in log space. Two regimes:
// a peak-pivoted power series for small orders and the uniform large-order
// asymptotic expansion for nu >= 15; the overlap is test-checked.
// I_nu(0) = 0 for nu > 0, reported as -infinity.
// Throws std::domain_error for negative arguments.
double log_bessel_i(double nu, double kappa);

// log(sum_i exp(v[i])) without overflow. -infinity entries are permitted
// (they contribute nothing); an empty input is an error.
double log_sum_exp(std::span<const double> values);

// Natural log of the binomial coefficient C(n, k), 0 <= k <= n.
double log_binomial(std::size_t n, std::size_t k);

}  // namespace bayescap::numerics

#endif  // BAYESCAP_SPECIAL_HPP_
