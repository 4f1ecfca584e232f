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
#include "bayescap/calibrate.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bayescap::harness {

namespace {

void check(double eps_or_sigma, double delta, double sensitivity,
           const char* what) {
  if (!(eps_or_sigma > 0.0)) {
    throw std::domain_error(std::string(what) + ": value must be > 0");
  }
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw std::domain_error(std::string(what) + ": delta must be in (0, 1)");
  }
  if (!(sensitivity > 0.0)) {
    throw std::domain_error(std::string(what) + ": sensitivity must be > 0");
  }
}

}  // namespace

double epsilon_to_sigma(double eps, double delta, double sensitivity) {
  check(eps, delta, sensitivity, "epsilon_to_sigma");
  return sensitivity * std::sqrt(2.0 * std::log(1.25 / delta)) / eps;
}

double sigma_to_epsilon(double sigma, double delta, double sensitivity) {
  check(sigma, delta, sensitivity, "sigma_to_epsilon");
  return sensitivity * std::sqrt(2.0 * std::log(1.25 / delta)) / sigma;
}

double epsilon_to_kappa(double eps) {
  if (!(eps > 0.0)) {
    throw std::domain_error("epsilon_to_kappa: eps must be > 0");
  }
  return eps;
}

}  // namespace bayescap::harness
