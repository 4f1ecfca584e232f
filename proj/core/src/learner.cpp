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
#include "bayescap/learner.hpp"

#include <iostream>
#include <numeric>
#include <stdexcept>

#include "bayescap/mechanisms.hpp"

namespace bayescap::learner {

namespace {

void check_batch(std::span<const Example> batch, const DpSgdParams& params) {
  if (batch.empty()) {
    throw std::invalid_argument("dpsgd round: batch must not be empty");
  }
  if (static_cast<int>(batch.size()) != params.batch_L) {
    throw std::invalid_argument("dpsgd round: |batch| must equal batch_L");
  }
}

// Lines 5-9 of the round: per-example gradients, clipped and averaged.
Vector clipped_average_gradient(const ModelParams& theta,
                                std::span<const Example> batch,
                                const DpSgdParams& params,
                                const MlpArch& arch) {
  Vector avg(theta.theta.size(), 0.0);
  for (const Example& x : batch) {
    const Vector clipped = mech::clip(grad(theta, x, arch), params.clip_c);
    for (std::size_t i = 0; i < avg.size(); ++i) avg[i] += clipped[i];
  }
  const double inv_l = 1.0 / static_cast<double>(params.batch_L);
  for (double& v : avg) v *= inv_l;
  return avg;
}

std::pair<ModelParams, LeakObservation> descend(const ModelParams& theta,
                                                Vector g_tilde,
                                                const DpSgdParams& params,
                                                int round) {
  LeakObservation obs{round, std::move(g_tilde), theta};
  ModelParams next = theta;
  for (std::size_t i = 0; i < next.theta.size(); ++i) {
    next.theta[i] -= params.eta * obs.g_tilde[i];
  }
  return {std::move(next), std::move(obs)};
}

}  // namespace

void DpSgdParams::validate(Mechanism mech) const {
  if (!(eta > 0.0)) throw std::invalid_argument("DpSgdParams: eta must be > 0");
  if (!(clip_c > 0.0)) {
    throw std::invalid_argument("DpSgdParams: clip_c must be > 0");
  }
  if (batch_L < 1) {
    throw std::invalid_argument("DpSgdParams: batch_L must be >= 1");
  }
  if (rounds_T < 0) {
    throw std::invalid_argument("DpSgdParams: rounds_T must be >= 0");
  }
  if (mech == Mechanism::vmf) {
    if (!(sigma_or_kappa > 0.0)) {
      throw std::invalid_argument("DpSgdParams: kappa must be > 0");
    }
  } else if (sigma_or_kappa < 0.0) {
    throw std::invalid_argument("DpSgdParams: sigma must be >= 0");
  }
}

std::pair<ModelParams, LeakObservation> dpsgd_round_gaussian(
    const ModelParams& theta, std::span<const Example> batch,
    const DpSgdParams& params, const MlpArch& arch, SeededRng& rng,
    int round) {
  params.validate(Mechanism::gaussian);
  check_batch(batch, params);
  Vector avg = clipped_average_gradient(theta, batch, params, arch);
  Vector noisy = mech::gaussian_perturb(avg, params.sigma_or_kappa,
                                        params.clip_c, params.batch_L, rng);
  return descend(theta, std::move(noisy), params, round);
}

std::pair<ModelParams, LeakObservation> dpsgd_round_vmf(
    const ModelParams& theta, std::span<const Example> batch,
    const DpSgdParams& params, const MlpArch& arch, SeededRng& rng,
    int round) {
  params.validate(Mechanism::vmf);
  check_batch(batch, params);
  Vector avg = clipped_average_gradient(theta, batch, params, arch);

  Vector direction;
  if (norm2(avg) == 0.0) {
    // The scale step divides by |avg|; substitute a random direction.
    direction = mech::uniform_unit_vector(static_cast<int>(avg.size()), rng);
    std::clog << "dpsgd_round_vmf: zero averaged gradient at round " << round
              << ", substituting a random unit direction\n";
  } else {
    direction = mech::scale_to_sphere(avg);
  }
  const mech::VmfDensityParams vmf(std::move(direction),
                                   params.sigma_or_kappa);
  Vector noisy = mech::vmf_sample(vmf, rng);
  return descend(theta, std::move(noisy), params, round);
}

TrainResult train(const MlpArch& arch, std::span<const Example> dataset,
                  const DpSgdParams& params, Mechanism mechanism,
                  SeededRng& rng) {
  params.validate(mechanism);
  arch.validate();
  if (static_cast<int>(dataset.size()) < params.batch_L) {
    throw std::invalid_argument("train: dataset smaller than batch_L");
  }

  TrainResult result;
  result.final_params = init_params(arch, rng);
  result.observations.reserve(static_cast<std::size_t>(params.rounds_T));

  std::vector<std::size_t> indices(dataset.size());
  std::iota(indices.begin(), indices.end(), 0);
  std::vector<Example> batch(static_cast<std::size_t>(params.batch_L));

  for (int t = 0; t < params.rounds_T; ++t) {
    // Uniform sample of batch_L distinct indices (partial Fisher-Yates);
    // sampling is with replacement across rounds.
    std::vector<std::size_t> chosen(static_cast<std::size_t>(params.batch_L));
    for (int j = 0; j < params.batch_L; ++j) {
      const std::size_t pick =
          j + static_cast<std::size_t>(rng.below(indices.size() - j));
      std::swap(indices[static_cast<std::size_t>(j)], indices[pick]);
      chosen[static_cast<std::size_t>(j)] = indices[static_cast<std::size_t>(j)];
      batch[static_cast<std::size_t>(j)] =
          dataset[indices[static_cast<std::size_t>(j)]];
    }
    result.batch_indices.push_back(std::move(chosen));
    auto step = mechanism == Mechanism::gaussian
                    ? dpsgd_round_gaussian(result.final_params, batch, params,
                                           arch, rng, t)
                    : dpsgd_round_vmf(result.final_params, batch, params,
                                      arch, rng, t);
    result.final_params = std::move(step.first);
    result.observations.push_back(std::move(step.second));
  }
  return result;
}

const char* to_string(Mechanism m) {
  return m == Mechanism::gaussian ? "gaussian" : "vmf";
}

}  // namespace bayescap::learner
