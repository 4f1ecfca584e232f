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
// DP-SGD as a simulated federated round: the client computes per-example
// gradients, clips, averages and noises; the server observes the leaked
// noisy gradient and applies the descent step. A training run is
// single-threaded and deterministic per seed.
#ifndef BAYESCAP_LEARNER_HPP_
#define BAYESCAP_LEARNER_HPP_

#include <span>
#include <utility>
#include <vector>

#include "bayescap/mlp.hpp"
#include "bayescap/rng.hpp"
#include "bayescap/vec.hpp"

namespace bayescap::learner {

enum class Mechanism { gaussian, vmf };

struct DpSgdParams {
  double eta = 0.1;            // learning rate, > 0
  double sigma_or_kappa = 1.0; // noise scale (sigma >= 0, kappa > 0)
  int batch_L = 1;             // group size, >= 1
  double clip_c = 1.0;         // gradient norm bound, > 0
  int rounds_T = 1;            // round count, >= 0

  void validate(Mechanism mech) const;
};

// What the honest-but-curious server sees in one round.
struct LeakObservation {
  int round = 0;
  Vector g_tilde;             // the leaked noisy gradient
  ModelParams theta_before;   // parameters the round started from
};

// One round of DP-SGD with Gaussian noise: clip, average, perturb, leak,
// descend. |batch| must equal batch_L.
std::pair<ModelParams, LeakObservation> dpsgd_round_gaussian(
    const ModelParams& theta, std::span<const Example> batch,
    const DpSgdParams& params, const MlpArch& arch, SeededRng& rng,
    int round = 0);

// One round with unit-sphere scaling and a VMF draw; the leaked gradient
// has unit norm. A zero averaged gradient (which the scale step cannot
// handle) is replaced by a uniformly random direction and logged.
std::pair<ModelParams, LeakObservation> dpsgd_round_vmf(
    const ModelParams& theta, std::span<const Example> batch,
    const DpSgdParams& params, const MlpArch& arch, SeededRng& rng,
    int round = 0);

struct TrainResult {
  ModelParams final_params;
  std::vector<LeakObservation> observations;  // the server's view, one per round
  // Experimenter metadata (not part of the adversary's view): which dataset
  // indices formed each round's batch, needed to score reconstructions.
  std::vector<std::vector<std::size_t>> batch_indices;
};

// T rounds over uniformly sampled batches of batch_L distinct indices.
TrainResult train(const MlpArch& arch, std::span<const Example> dataset,
                  const DpSgdParams& params, Mechanism mechanism,
                  SeededRng& rng);

const char* to_string(Mechanism m);

}  // namespace bayescap::learner

#endif  // BAYESCAP_LEARNER_HPP_
