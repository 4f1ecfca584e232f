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
#ifndef BAYESCAP_CALIBRATE_HPP_
#define BAYESCAP_CALIBRATE_HPP_

namespace bayescap::harness {

// Classical Gaussian-mechanism calibration:
//   sigma = sensitivity * sqrt(2 ln(1.25/delta)) / eps.
// The default sensitivity for the clipped average under replace-one
// adjacency is 2c/L.
double epsilon_to_sigma(double eps, double delta, double sensitivity);

// Inverse of the above, used to label direct-sigma sweeps with an epsilon.
double sigma_to_epsilon(double sigma, double delta, double sensitivity);

// The VMF concentration plays the role of the eps scaling parameter in
// eps d_theta-privacy; the correspondence is the identity. Note this maps
// metric-DP eps, not an (eps, delta) guarantee - an assumption, not an
// established equivalence.
double epsilon_to_kappa(double eps);

}  // namespace bayescap::harness

#endif  // BAYESCAP_CALIBRATE_HPP_
