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
// Toy multilayer perceptron with exact backpropagated gradients. Parameters
// live in one flat vector (per layer: row-major weights, then biases) so the
// learner and the inversion attack can treat the model as a map from a flat
// theta to a flat gradient.
#ifndef BAYESCAP_MLP_HPP_
#define BAYESCAP_MLP_HPP_

#include <span>
#include <vector>

#include "bayescap/rng.hpp"
#include "bayescap/vec.hpp"

namespace bayescap::learner {

enum class Activation { relu, sigmoid };

struct MlpArch {
  std::vector<int> layer_sizes;  // input, hidden..., output
  Activation activation = Activation::sigmoid;

  void validate() const;
  int param_count() const;  // total weights + biases
  int input_size() const { return layer_sizes.front(); }
  int output_size() const { return layer_sizes.back(); }
};

struct ModelParams {
  Vector theta;
};

struct Example {
  Vector features;  // one value per pixel, in [0, 1]
  int label = 0;    // class index
};

// Uniform initialization in [-1/sqrt(fan_in), +1/sqrt(fan_in)] per layer;
// deterministic per seed.
ModelParams init_params(const MlpArch& arch, SeededRng& rng);

// Class logits for one input.
Vector forward_logits(const ModelParams& params, std::span<const double> x,
                      const MlpArch& arch);

// Softmax cross-entropy of the network output against the example label.
double loss(const ModelParams& params, const Example& x, const MlpArch& arch);

// Exact gradient of the loss with respect to every parameter, length p.
Vector grad(const ModelParams& params, const Example& x, const MlpArch& arch);

}  // namespace bayescap::learner

#endif  // BAYESCAP_MLP_HPP_
