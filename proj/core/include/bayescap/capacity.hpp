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
//
// Closed-form Bayes' capacities of the continuous Gaussian and von
// Mises-Fisher mechanisms, numerical oracles that integrate the sup-density
// directly for p <= 3, and the mechanism-comparison predicate. Everything is
// evaluated in natural-log space: raw capacities at experiment-scale p
// overflow any fixed-width float.
#ifndef BAYESCAP_CAPACITY_HPP_
#define BAYESCAP_CAPACITY_HPP_

#include "bayescap/quadrature.hpp"

namespace bayescap::capacity {

// Gaussian noise mechanism on the clipped-gradient ball B_R^p.
// The closed form is stated for clip_c = 1; batch_L never changes the
// capacity (the 1/L averaging rescales signal and noise identically, a
// bijection on outputs).
struct GaussianMechSpec {
  int p = 1;            // dimension (model parameter count)
  double sigma = 1.0;   // noise scale, > 0
  double clip_c = 1.0;  // gradient norm bound; must be 1 for the closed form
  int batch_L = 1;      // group size, >= 1
  double radius_R = 1.0;  // ball radius of the clipped-gradient domain, > 0

  void validate() const;
};

// Von Mises-Fisher mechanism on the unit sphere S^{p-1}.
struct VmfMechSpec {
  int p = 2;           // dimension, >= 2
  double kappa = 1.0;  // concentration, > 0

  void validate() const;
};

struct LogCapacity {
  double nat_log = 0.0;  // ln of the Bayes' capacity, always >= 0
  double bits = 0.0;     // nat_log / ln 2
};

// The paper's printed leading coefficient for the Z (tail) term disagrees
// with its own proof by a factor of 2; both variants are implemented and the
// oracle decides. proof_derived is the oracle-selected default.
enum class GaussianCoefficient {
  proof_derived,    // tail = Z / (Gamma(p/2) 2^{p/2} sigma^p)
  theorem_literal,  // tail = 2 Z / (Gamma(p/2) 2^{p/2} sigma^p)
};

LogCapacity log_bayes_capacity_gaussian(
    const GaussianMechSpec& spec,
    GaussianCoefficient variant = GaussianCoefficient::proof_derived);

LogCapacity log_bayes_capacity_vmf(const VmfMechSpec& spec);

// Numerical capacity: integrates sup_x f(x)(y) over the output domain split
// exactly as the proofs decompose it (interior ball at the peak density,
// exterior shell at the nearest-surface-point density). Supports p <= 3.
numerics::IntegralEstimate capacity_oracle_gaussian(
    const GaussianMechSpec& spec, const numerics::QuadratureSpec& quad);

// Numerical capacity for VMF: integrates the pointwise-maximum density over
// S^{p-1} for p in {2, 3}.
numerics::IntegralEstimate capacity_oracle_vmf(
    const VmfMechSpec& spec, const numerics::QuadratureSpec& quad);

enum class SaferOrdering { a_safer, b_safer, tie };

// Mechanism comparison: smaller capacity leaks less. Ties at 1e-12 on the
// natural log.
SaferOrdering safer_than(const LogCapacity& a, const LogCapacity& b);

// Runs both coefficient variants against the Gaussian oracle over the
// p in {1,2,3} x sigma in {0.5,1,2} x R in {1,2} grid and reports which one
// the oracle supports.
struct VariantSelection {
  GaussianCoefficient selected = GaussianCoefficient::proof_derived;
  bool unanimous = false;      // same winner on every grid point
  int grid_points = 0;
  double max_rel_err_selected = 0.0;
  double max_rel_err_rejected = 0.0;
};
VariantSelection select_gaussian_coefficient(int oracle_resolution = 256);

const char* to_string(GaussianCoefficient v);

}  // namespace bayescap::capacity

#endif  // BAYESCAP_CAPACITY_HPP_
