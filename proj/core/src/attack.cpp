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
#include "bayescap/attack.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bayescap::attack {

namespace {

using learner::Example;
using learner::LeakObservation;
using learner::Mechanism;
using learner::MlpArch;

Vector normalized_or_zero(const Vector& v) {
  const double n = norm2(v);
  if (n == 0.0) return v;
  Vector out(v);
  for (double& x : out) x /= n;
  return out;
}

double match_against(const Vector& target, const Vector& g, MatchLoss loss) {
  if (loss == MatchLoss::cosine) {
    const double ng = norm2(g);
    const double nt = norm2(target);
    if (ng == 0.0 || nt == 0.0) return 1.0;  // no direction to match
    return 1.0 - dot(g, target) / (ng * nt);
  }
  // Squared error between unit-normalized gradients. The observation went
  // through a clipping scale the attacker does not know, so only the
  // direction is comparable (the VMF observation is unit norm anyway).
  const Vector gn = normalized_or_zero(g);
  const Vector tn = normalized_or_zero(target);
  double acc = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double d = gn[i] - tn[i];
    acc += d * d;
  }
  return acc / static_cast<double>(g.size());
}

// Anisotropic total variation on the pixel grid (1-D chain when the input
// is not a perfect square).
int grid_side(std::size_t n) {
  const int side = static_cast<int>(std::lround(std::sqrt(double(n))));
  return static_cast<std::size_t>(side) * side == n ? side : 0;
}

double total_variation(const Vector& x) {
  const int side = grid_side(x.size());
  double tv = 0.0;
  if (side == 0) {
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      tv += std::abs(x[i + 1] - x[i]);
    }
    return tv;
  }
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * side + c;
      if (c + 1 < side) tv += std::abs(x[i + 1] - x[i]);
      if (r + 1 < side) tv += std::abs(x[i + side] - x[i]);
    }
  }
  return tv;
}

void add_tv_subgradient(const Vector& x, double weight, Vector& out) {
  if (weight == 0.0) return;
  auto sgn = [](double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); };
  const int side = grid_side(x.size());
  if (side == 0) {
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      const double s = sgn(x[i + 1] - x[i]);
      out[i + 1] += weight * s;
      out[i] -= weight * s;
    }
    return;
  }
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * side + c;
      if (c + 1 < side) {
        const double s = sgn(x[i + 1] - x[i]);
        out[i + 1] += weight * s;
        out[i] -= weight * s;
      }
      if (r + 1 < side) {
        const double s = sgn(x[i + side] - x[i]);
        out[i + side] += weight * s;
        out[i] -= weight * s;
      }
    }
  }
}

struct MatchContext {
  const LeakObservation* obs;
  const MlpArch* arch;
  int label;
  Vector target;  // observation, normalized for VMF
  MatchLoss loss;

  double operator()(const Vector& candidate) const {
    const Vector g =
        learner::grad(obs->theta_before, Example{candidate, label}, *arch);
    return match_against(target, g, loss);
  }
};

}  // namespace

void AttackConfig::validate() const {
  if (iterations < 1) {
    throw std::invalid_argument("AttackConfig: iterations must be >= 1");
  }
  if (restarts < 1) {
    throw std::invalid_argument("AttackConfig: restarts must be >= 1");
  }
  if (!(step_size > 0.0)) {
    throw std::invalid_argument("AttackConfig: step_size must be > 0");
  }
  if (tv_weight < 0.0) {
    throw std::invalid_argument("AttackConfig: tv_weight must be >= 0");
  }
  if (!(fd_step > 0.0)) {
    throw std::invalid_argument("AttackConfig: fd_step must be > 0");
  }
  if (min_alignment < 0.0 || min_alignment >= 1.0) {
    throw std::invalid_argument(
        "AttackConfig: min_alignment must lie in [0, 1)");
  }
}

double mse(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("mse: length mismatch");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc / static_cast<double>(a.size());
}

double gradient_match_loss(const LeakObservation& obs, const MlpArch& arch,
                           int label, const Vector& candidate,
                           Mechanism mechanism, MatchLoss loss) {
  const bool normalize = mechanism == Mechanism::vmf;
  MatchContext ctx{&obs, &arch, label,
                   normalize ? normalized_or_zero(obs.g_tilde) : obs.g_tilde,
                   loss};
  return ctx(candidate);
}

AttackResult invert_gradients(const LeakObservation& obs, const MlpArch& arch,
                              int true_label,
                              std::span<const double> true_features,
                              Mechanism mechanism, const AttackConfig& cfg,
                              SeededRng& rng) {
  cfg.validate();
  arch.validate();
  const std::size_t d = static_cast<std::size_t>(arch.input_size());
  if (static_cast<int>(obs.g_tilde.size()) != arch.param_count()) {
    throw std::invalid_argument(
        "invert_gradients: observation length does not match architecture");
  }
  if (true_features.size() != d) {
    throw std::invalid_argument(
        "invert_gradients: true feature length does not match input size");
  }
  if (true_label < 0 || true_label >= arch.output_size()) {
    throw std::invalid_argument("invert_gradients: label out of range");
  }

  const bool normalize = mechanism == Mechanism::vmf;
  const MatchContext match{&obs, &arch, true_label,
                           normalize ? normalized_or_zero(obs.g_tilde)
                                     : obs.g_tilde,
                           cfg.match_loss};

  AttackResult best;
  double best_objective = std::numeric_limits<double>::infinity();

  Vector x(d), probe(d), step_grad(d);
  for (int restart = 0; restart < cfg.restarts; ++restart) {
    // Mid-gray start plus small seeded noise.
    for (double& v : x) {
      v = std::clamp(0.5 + cfg.init_jitter * (2.0 * rng.uniform() - 1.0), 0.0,
                     1.0);
    }

    int used = 0;
    double current_match = match(x);
    for (int k = 0; k < cfg.iterations; ++k) {
      if (!std::isfinite(current_match)) {
        throw std::runtime_error(
            "invert_gradients: non-finite match loss at iteration " +
            std::to_string(k));
      }
      used = k + 1;
      if (current_match <= 1e-16) break;

      // Central finite differences on the match term.
      probe = x;
      std::fill(step_grad.begin(), step_grad.end(), 0.0);
      for (std::size_t i = 0; i < d; ++i) {
        const double saved = probe[i];
        probe[i] = saved + cfg.fd_step;
        const double hi = match(probe);
        probe[i] = saved - cfg.fd_step;
        const double lo = match(probe);
        probe[i] = saved;
        step_grad[i] = (hi - lo) / (2.0 * cfg.fd_step);
      }
      add_tv_subgradient(x, cfg.tv_weight, step_grad);

      const double step =
          cfg.step_size * 0.5 *
          (1.0 + std::cos(std::numbers::pi * k / cfg.iterations));
      for (std::size_t i = 0; i < d; ++i) {
        if (step_grad[i] > 0.0) {
          x[i] = std::max(0.0, x[i] - step);
        } else if (step_grad[i] < 0.0) {
          x[i] = std::min(1.0, x[i] + step);
        }
      }
      current_match = match(x);
    }

    const double objective = current_match + cfg.tv_weight * total_variation(x);
    if (objective < best_objective) {
      best_objective = objective;
      best.reconstruction = x;
      best.final_match_loss = current_match;
      best.iterations_used = used;
    }
  }

  // Failed attack: the observed gradient never aligned, so the candidate is
  // a noise fit with no information about the input. Report the prior mean.
  if (cfg.match_loss == MatchLoss::cosine && cfg.min_alignment > 0.0 &&
      1.0 - best.final_match_loss < cfg.min_alignment) {
    best.reconstruction.assign(d, 0.5);
    best.final_match_loss = match(best.reconstruction);
  }

  best.mse = mse(best.reconstruction, true_features);
  return best;
}

}  // namespace bayescap::attack
