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
#include "bayescap/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bayescap::learner {

namespace {

double activate(double z, Activation a) {
  if (a == Activation::relu) return z > 0.0 ? z : 0.0;
  return 1.0 / (1.0 + std::exp(-z));
}

// Derivative expressed through the activation value.
double activate_deriv(double h, double z, Activation a) {
  if (a == Activation::relu) return z > 0.0 ? 1.0 : 0.0;
  return h * (1.0 - h);
}

struct ForwardPass {
  std::vector<Vector> pre;   // z per non-input layer
  std::vector<Vector> post;  // activations, post[0] = input
};

ForwardPass forward(const ModelParams& params, std::span<const double> x,
                    const MlpArch& arch) {
  const auto& sizes = arch.layer_sizes;
  ForwardPass fp;
  fp.post.emplace_back(x.begin(), x.end());
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const int in = sizes[l];
    const int out = sizes[l + 1];
    const double* w = params.theta.data() + offset;
    const double* b = w + static_cast<std::size_t>(in) * out;
    Vector z(static_cast<std::size_t>(out));
    const Vector& h = fp.post.back();
    for (int j = 0; j < out; ++j) {
      double acc = b[j];
      const double* wj = w + static_cast<std::size_t>(j) * in;
      for (int i = 0; i < in; ++i) acc += wj[i] * h[static_cast<std::size_t>(i)];
      z[static_cast<std::size_t>(j)] = acc;
    }
    offset += static_cast<std::size_t>(in) * out + out;
    const bool last = l + 2 == sizes.size();
    Vector h_next(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) {
      h_next[j] = last ? z[j] : activate(z[j], arch.activation);
    }
    fp.pre.push_back(std::move(z));
    fp.post.push_back(std::move(h_next));
  }
  return fp;
}

Vector softmax(const Vector& logits) {
  const double m = *std::max_element(logits.begin(), logits.end());
  Vector out(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - m);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

void check_example(const Example& x, const MlpArch& arch) {
  if (static_cast<int>(x.features.size()) != arch.input_size()) {
    throw std::invalid_argument(
        "example feature length " + std::to_string(x.features.size()) +
        " does not match input layer size " +
        std::to_string(arch.input_size()));
  }
  if (x.label < 0 || x.label >= arch.output_size()) {
    throw std::invalid_argument("example label out of range");
  }
}

void check_shapes(const ModelParams& params, const Example& x,
                  const MlpArch& arch) {
  arch.validate();
  check_example(x, arch);
  if (static_cast<int>(params.theta.size()) != arch.param_count()) {
    throw std::invalid_argument(
        "theta length " + std::to_string(params.theta.size()) +
        " does not match architecture parameter count " +
        std::to_string(arch.param_count()));
  }
}

}  // namespace

void MlpArch::validate() const {
  if (layer_sizes.size() < 2) {
    throw std::invalid_argument("MlpArch: need at least input and output");
  }
  for (int s : layer_sizes) {
    if (s < 1) throw std::invalid_argument("MlpArch: layer sizes must be >= 1");
  }
}

int MlpArch::param_count() const {
  validate();
  int total = 0;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    total += layer_sizes[l] * layer_sizes[l + 1] + layer_sizes[l + 1];
  }
  return total;
}

ModelParams init_params(const MlpArch& arch, SeededRng& rng) {
  arch.validate();
  ModelParams params;
  params.theta.reserve(static_cast<std::size_t>(arch.param_count()));
  for (std::size_t l = 0; l + 1 < arch.layer_sizes.size(); ++l) {
    const int in = arch.layer_sizes[l];
    const int out = arch.layer_sizes[l + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    const int n = in * out + out;
    for (int i = 0; i < n; ++i) {
      params.theta.push_back((2.0 * rng.uniform() - 1.0) * bound);
    }
  }
  return params;
}

Vector forward_logits(const ModelParams& params, std::span<const double> x,
                      const MlpArch& arch) {
  arch.validate();
  if (static_cast<int>(params.theta.size()) != arch.param_count() ||
      static_cast<int>(x.size()) != arch.input_size()) {
    throw std::invalid_argument("forward_logits: shape mismatch");
  }
  return forward(params, x, arch).post.back();
}

double loss(const ModelParams& params, const Example& x, const MlpArch& arch) {
  check_shapes(params, x, arch);
  const Vector logits = forward(params, x.features, arch).post.back();
  const double m = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double z : logits) sum += std::exp(z - m);
  return m + std::log(sum) - logits[static_cast<std::size_t>(x.label)];
}

Vector grad(const ModelParams& params, const Example& x, const MlpArch& arch) {
  check_shapes(params, x, arch);
  const auto& sizes = arch.layer_sizes;
  const ForwardPass fp = forward(params, x.features, arch);

  // delta at the output: softmax(z) - onehot(label).
  Vector delta = softmax(fp.post.back());
  delta[static_cast<std::size_t>(x.label)] -= 1.0;

  Vector g(params.theta.size(), 0.0);
  // Walk layers from last to first; offsets recomputed per layer.
  std::vector<std::size_t> offsets(sizes.size() - 1);
  std::size_t off = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    offsets[l] = off;
    off += static_cast<std::size_t>(sizes[l]) * sizes[l + 1] + sizes[l + 1];
  }

  for (std::size_t l = sizes.size() - 1; l-- > 0;) {
    const int in = sizes[l];
    const int out = sizes[l + 1];
    const std::size_t base = offsets[l];
    const Vector& h_in = fp.post[l];
    // Weight and bias gradients: dW = delta h_in^T, db = delta.
    for (int j = 0; j < out; ++j) {
      const double dj = delta[static_cast<std::size_t>(j)];
      double* gw = g.data() + base + static_cast<std::size_t>(j) * in;
      for (int i = 0; i < in; ++i) gw[i] = dj * h_in[static_cast<std::size_t>(i)];
    }
    double* gb = g.data() + base + static_cast<std::size_t>(in) * out;
    for (int j = 0; j < out; ++j) gb[j] = delta[static_cast<std::size_t>(j)];

    if (l == 0) break;
    // Propagate: delta_prev = (W^T delta) .* act'(z_prev).
    const double* w = params.theta.data() + base;
    Vector prev(static_cast<std::size_t>(in), 0.0);
    for (int j = 0; j < out; ++j) {
      const double dj = delta[static_cast<std::size_t>(j)];
      const double* wj = w + static_cast<std::size_t>(j) * in;
      for (int i = 0; i < in; ++i) prev[static_cast<std::size_t>(i)] += dj * wj[i];
    }
    const Vector& z_prev = fp.pre[l - 1];
    const Vector& h_prev = fp.post[l];
    for (int i = 0; i < in; ++i) {
      prev[static_cast<std::size_t>(i)] *=
          activate_deriv(h_prev[static_cast<std::size_t>(i)],
                         z_prev[static_cast<std::size_t>(i)], arch.activation);
    }
    delta = std::move(prev);
  }
  return g;
}

}  // namespace bayescap::learner
