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
// The two noise channels: gradient clipping + Gaussian perturbation, and
// unit-sphere scaling + von Mises-Fisher perturbation, plus the VMF density
// and sampler. Density/clip/scale are pure; samplers mutate only the rng
// they are handed.
#ifndef BAYESCAP_MECHANISMS_HPP_
#define BAYESCAP_MECHANISMS_HPP_

#include "bayescap/rng.hpp"
#include "bayescap/vec.hpp"

namespace bayescap::mech {

// Rescale v so its Euclidean norm is at most c: v / max(1, |v|/c).
// The zero vector passes through unchanged.
Vector clip(const Vector& v, double c);

// v plus i.i.d. zero-mean Gaussian noise of standard deviation c*sigma/L
// per component. sigma = 0 is the exact noiseless limit.
Vector gaussian_perturb(const Vector& v, double sigma, double c, int L,
                        SeededRng& rng);

// v / |v|, placing v on the unit sphere. Throws std::domain_error for the
// zero vector; callers of the VMF round substitute a random direction.
Vector scale_to_sphere(const Vector& v);

// Mean direction, concentration and dimension of a VMF distribution.
struct VmfDensityParams {
  Vector mu;     // unit vector, |mu| = 1 within 1e-9
  double kappa;  // concentration, > 0
  int p;         // dimension, >= 2

  VmfDensityParams(Vector mu_in, double kappa_in);
};

// ln f(y) = kappa mu.y - ln C_{p,kappa}, with the normalisation constant
// evaluated in log space. y must be a unit vector (1e-9 tolerance).
double vmf_log_density(const VmfDensityParams& params, const Vector& y);

// One draw from the VMF distribution: rejection sampling of the polar
// cosine (Ulrich/Wood construction) plus a uniform tangent direction.
// Always unit norm; deterministic given the rng state.
Vector vmf_sample(const VmfDensityParams& params, SeededRng& rng);

// Uniform direction on S^{p-1}.
Vector uniform_unit_vector(int p, SeededRng& rng);

}  // namespace bayescap::mech

#endif  // BAYESCAP_MECHANISMS_HPP_
