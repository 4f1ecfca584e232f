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
#include <stdexcept>
#include <vector>

#include "bayescap/dataset.hpp"
#include "bayescap/learner.hpp"
#include "bayescap/mechanisms.hpp"

using namespace bayescap::learner;
using bayescap::SeededRng;
using bayescap::Vector;
using bayescap::norm2;

namespace {

const MlpArch kSmallArch{{6, 5, 3}, Activation::sigmoid};

Example random_example(const MlpArch& arch, SeededRng& rng) {
  Example x;
  x.features.resize(static_cast<std::size_t>(arch.input_size()));
  for (double& v : x.features) v = rng.uniform();
  x.label = static_cast<int>(rng.below(arch.output_size()));
  return x;
}

// Central finite differences of the loss; the independent gradient oracle.
Vector fd_grad(const ModelParams& params, const Example& x,
               const MlpArch& arch, double h) {
  Vector g(params.theta.size());
  ModelParams probe = params;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double saved = probe.theta[i];
    probe.theta[i] = saved + h;
    const double hi = loss(probe, x, arch);
    probe.theta[i] = saved - h;
    const double lo = loss(probe, x, arch);
    probe.theta[i] = saved;
    g[i] = (hi - lo) / (2.0 * h);
  }
  return g;
}

}  // namespace

TEST_CASE("arch bookkeeping") {
  MlpArch arch{{64, 16, 10}, Activation::sigmoid};
  CHECK(arch.param_count() == 64 * 16 + 16 + 16 * 10 + 10);  // 1210
  CHECK_THROWS_AS((MlpArch{{5}, Activation::relu}.validate()),
                  std::invalid_argument);
}

TEST_CASE("init_params determinism and bound") {
  const MlpArch arch{{8, 4, 3}, Activation::sigmoid};
  SeededRng a(1);
  SeededRng b(1);
  SeededRng c(2);
  const ModelParams pa = init_params(arch, a);
  const ModelParams pb = init_params(arch, b);
  const ModelParams pc = init_params(arch, c);
  CHECK(pa.theta == pb.theta);
  CHECK(pa.theta != pc.theta);
  CHECK(static_cast<int>(pa.theta.size()) == arch.param_count());
  for (double v : pa.theta) {
    CHECK(std::isfinite(v));
    CHECK(std::abs(v) <= 1.0);
  }
}

TEST_CASE("loss values") {
  const MlpArch arch{{4, 10}, Activation::sigmoid};
  // Zero parameters -> uniform logits -> ln 10.
  ModelParams zero{Vector(static_cast<std::size_t>(arch.param_count()), 0.0)};
  Example x{Vector{0.2, 0.4, 0.6, 0.8}, 3};
  CHECK(loss(zero, x, arch) == doctest::Approx(std::log(10.0)).epsilon(1e-12));

  // A hugely confident correct logit drives the loss to zero.
  ModelParams confident = zero;
  confident.theta[static_cast<std::size_t>(4 * 10) + 3] = 50.0;  // bias of class 3
  CHECK(loss(confident, x, arch) == doctest::Approx(0.0).epsilon(1e-12));

  SeededRng rng(9);
  for (int i = 0; i < 20; ++i) {
    const ModelParams p = init_params(arch, rng);
    const Example e = random_example(arch, rng);
    CHECK(loss(p, e, arch) >= 0.0);
  }
  Example bad{Vector{0.1, 0.2}, 0};
  CHECK_THROWS_AS(loss(zero, bad, arch), std::invalid_argument);
}

TEST_CASE("grad matches central finite differences") {
  SeededRng rng(20260810);
  for (int trial = 0; trial < 20; ++trial) {
    const ModelParams p = init_params(kSmallArch, rng);
    const Example x = random_example(kSmallArch, rng);
    const Vector bp = grad(p, x, kSmallArch);
    const Vector fd = fd_grad(p, x, kSmallArch, 1e-4);
    for (std::size_t i = 0; i < bp.size(); ++i) {
      const double scale = std::max({1e-6, std::abs(bp[i]), std::abs(fd[i])});
      CHECK(std::abs(bp[i] - fd[i]) / scale < 1e-4);
    }
  }
}

TEST_CASE("grad closed form at zero parameters") {
  // Zero weights, sigmoid: logits are all zero, so the output-bias gradient
  // is softmax(0) - onehot(label).
  const MlpArch arch{{3, 2, 4}, Activation::sigmoid};
  ModelParams zero{Vector(static_cast<std::size_t>(arch.param_count()), 0.0)};
  const Example x{Vector{0.0, 0.0, 0.0}, 1};
  const Vector g = grad(zero, x, arch);
  const std::size_t out_bias = 3 * 2 + 2 + 2 * 4;  // after W1,b1,W2
  for (int j = 0; j < 4; ++j) {
    const double want = 0.25 - (j == 1 ? 1.0 : 0.0);
    CHECK(g[out_bias + static_cast<std::size_t>(j)] ==
          doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("dead relu unit has zero gradient") {
  const MlpArch arch{{2, 2, 2}, Activation::relu};
  // Weights chosen so hidden unit 0 gets a negative pre-activation.
  ModelParams p{Vector(static_cast<std::size_t>(arch.param_count()), 0.0)};
  p.theta[0] = -5.0;  // W1[0][0]
  p.theta[1] = -5.0;  // W1[0][1]
  p.theta[2] = 1.0;   // W1[1][0]
  p.theta[3] = 1.0;   // W1[1][1]
  p.theta[static_cast<std::size_t>(2 * 2) + 2 * 2] = 2.0;  // W2[0][0]
  const Example x{Vector{0.5, 0.5}, 0};
  const Vector g = grad(p, x, arch);
  // Weights feeding the dead unit receive no gradient.
  CHECK(g[0] == 0.0);
  CHECK(g[1] == 0.0);
}

TEST_CASE("gaussian round: plain SGD in the noiseless limit") {
  const MlpArch arch{{4, 3, 2}, Activation::sigmoid};
  SeededRng rng(15);
  const ModelParams theta = init_params(arch, rng);
  const Example x = random_example(arch, rng);

  DpSgdParams params;
  params.eta = 1.0;
  params.sigma_or_kappa = 0.0;
  params.batch_L = 1;
  params.clip_c = 1e9;  // no clipping bite
  params.rounds_T = 1;

  std::vector<Example> batch{x};
  SeededRng round_rng(1);
  const auto [theta1, obs] =
      dpsgd_round_gaussian(theta, batch, params, arch, round_rng, 0);
  const Vector g = grad(theta, x, arch);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(theta1.theta[i] == doctest::Approx(theta.theta[i] - g[i]).epsilon(1e-12));
  }

  // Clipping to half the gradient norm halves the step.
  DpSgdParams half = params;
  half.clip_c = norm2(g) / 2.0;
  SeededRng rng2(1);
  const auto [theta_half, obs_half] =
      dpsgd_round_gaussian(theta, batch, half, arch, rng2, 0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(theta_half.theta[i] ==
          doctest::Approx(theta.theta[i] - g[i] / 2.0).epsilon(1e-9));
  }

  // Leaked g~ equals (theta - theta') / eta exactly.
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(obs.g_tilde[i] ==
          doctest::Approx((theta.theta[i] - theta1.theta[i]) / params.eta)
              .epsilon(1e-15));
  }
  CHECK(obs.round == 0);
  CHECK(obs.theta_before.theta == theta.theta);

  CHECK_THROWS_AS(dpsgd_round_gaussian(theta, std::vector<Example>{}, params,
                                       arch, round_rng, 0),
                  std::invalid_argument);
}

TEST_CASE("per-example clipping bounds the averaged gradient") {
  const MlpArch arch{{6, 4, 3}, Activation::sigmoid};
  SeededRng rng(77);
  const ModelParams theta = init_params(arch, rng);
  std::vector<Example> batch;
  for (int i = 0; i < 4; ++i) batch.push_back(random_example(arch, rng));

  DpSgdParams params;
  params.eta = 0.5;
  params.sigma_or_kappa = 0.0;
  params.batch_L = 4;
  params.clip_c = 0.05;  // forces every example to clip
  params.rounds_T = 1;

  SeededRng round_rng(5);
  const auto [theta1, obs] =
      dpsgd_round_gaussian(theta, batch, params, arch, round_rng, 0);
  // Convexity: the average of clipped gradients stays within the bound.
  CHECK(norm2(obs.g_tilde) <= params.clip_c * (1.0 + 1e-12));
  for (const Example& x : batch) {
    CHECK(norm2(bayescap::mech::clip(grad(theta, x, arch), params.clip_c)) <=
          params.clip_c * (1.0 + 1e-12));
  }
}

TEST_CASE("vmf round: unit norm, concentration limit, determinism") {
  const MlpArch arch{{4, 3, 2}, Activation::sigmoid};
  SeededRng rng(21);
  const ModelParams theta = init_params(arch, rng);
  const Example x = random_example(arch, rng);
  std::vector<Example> batch{x};

  DpSgdParams params;
  params.eta = 0.2;
  params.sigma_or_kappa = 1e6;
  params.batch_L = 1;
  params.clip_c = 1.0;
  params.rounds_T = 1;

  SeededRng r1(3);
  SeededRng r2(3);
  const auto [t1, o1] = dpsgd_round_vmf(theta, batch, params, arch, r1, 0);
  const auto [t2, o2] = dpsgd_round_vmf(theta, batch, params, arch, r2, 0);
  CHECK(o1.g_tilde == o2.g_tilde);
  CHECK(t1.theta == t2.theta);
  CHECK(norm2(o1.g_tilde) == doctest::Approx(1.0).epsilon(1e-9));

  // kappa = 1e6: the draw hugs the true scaled gradient.
  const Vector truth = bayescap::mech::scale_to_sphere(
      bayescap::mech::clip(grad(theta, x, arch), params.clip_c));
  const double cosang =
      std::clamp(bayescap::dot(o1.g_tilde, truth), -1.0, 1.0);
  CHECK(std::acos(cosang) < 0.01);
}

TEST_CASE("gaussian and vmf noiseless limits agree up to positive scale") {
  const MlpArch arch{{5, 4, 3}, Activation::sigmoid};
  SeededRng rng(33);
  const ModelParams theta = init_params(arch, rng);
  const Example x = random_example(arch, rng);
  std::vector<Example> batch{x};

  DpSgdParams gp;
  gp.eta = 1.0;
  gp.sigma_or_kappa = 0.0;
  gp.batch_L = 1;
  gp.clip_c = 1.0;
  DpSgdParams vp = gp;
  vp.sigma_or_kappa = 1e8;

  SeededRng r1(4);
  SeededRng r2(4);
  const auto [tg, og] = dpsgd_round_gaussian(theta, batch, gp, arch, r1, 0);
  const auto [tv, ov] = dpsgd_round_vmf(theta, batch, vp, arch, r2, 0);
  const double cosang = bayescap::dot(og.g_tilde, ov.g_tilde) /
                        (norm2(og.g_tilde) * norm2(ov.g_tilde));
  CHECK(cosang == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("train: observation count, T=0, determinism") {
  const MlpArch arch{{6, 4, 3}, Activation::sigmoid};
  SeededRng data_rng(8);
  // Compact synthetic set at matching resolution is a convenient corpus.
  std::vector<Example> tiny;
  for (int i = 0; i < 12; ++i) {
    Example e;
    e.features.resize(6);
    for (double& v : e.features) v = data_rng.uniform();
    e.label = static_cast<int>(data_rng.below(3));
    tiny.push_back(e);
  }

  DpSgdParams params;
  params.eta = 0.3;
  params.sigma_or_kappa = 0.5;
  params.batch_L = 3;
  params.clip_c = 1.0;
  params.rounds_T = 0;

  SeededRng rng0(12);
  const TrainResult none = train(arch, tiny, params, Mechanism::gaussian, rng0);
  CHECK(none.observations.empty());
  SeededRng ref(12);
  CHECK(none.final_params.theta == init_params(arch, ref).theta);

  params.rounds_T = 7;
  SeededRng rng1(12);
  SeededRng rng2(12);
  const TrainResult a = train(arch, tiny, params, Mechanism::gaussian, rng1);
  const TrainResult b = train(arch, tiny, params, Mechanism::gaussian, rng2);
  CHECK(a.observations.size() == 7);
  CHECK(a.final_params.theta == b.final_params.theta);
  for (std::size_t t = 0; t < 7; ++t) {
    CHECK(a.observations[t].round == static_cast<int>(t));
    CHECK(a.observations[t].g_tilde == b.observations[t].g_tilde);
  }

  params.batch_L = 100;
  SeededRng rng3(12);
  CHECK_THROWS_AS(train(arch, tiny, params, Mechanism::gaussian, rng3),
                  std::invalid_argument);
}

TEST_CASE("train: loss decreases in the noiseless limit") {
  // Tiny separable problem: 4x4 synthetic patterns, 3 classes.
  SeededRng data_rng(99);
  std::vector<Example> data =
      bayescap::harness::synth_dataset(30, 4, data_rng);
  for (Example& e : data) e.label %= 3;  // fold the labels onto 3 classes
  const MlpArch arch{{16, 8, 3}, Activation::sigmoid};

  DpSgdParams params;
  params.eta = 2.0;
  params.sigma_or_kappa = 0.0;
  params.batch_L = 6;
  params.clip_c = 1.0;
  params.rounds_T = 200;

  SeededRng rng(2026);
  SeededRng init_ref(2026);
  const ModelParams theta0 = init_params(arch, init_ref);
  auto mean_loss = [&](const ModelParams& p) {
    double acc = 0.0;
    for (const Example& e : data) acc += loss(p, e, arch);
    return acc / static_cast<double>(data.size());
  };
  const double before = mean_loss(theta0);
  const TrainResult result = train(arch, data, params, Mechanism::gaussian, rng);
  const double after = mean_loss(result.final_params);
  INFO("loss ", before, " -> ", after);
  CHECK(after <= 0.5 * before);
}
