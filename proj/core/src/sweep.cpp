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
#include "bayescap/sweep.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

#include "bayescap/calibrate.hpp"
#include "bayescap/capacity.hpp"
#include "bayescap/dataset.hpp"

namespace bayescap::harness {

namespace {

using learner::Example;
using learner::Mechanism;

struct Task {
  Mechanism mechanism;
  std::size_t grid_index;   // position in the mechanism's noise grid
  double noise;             // sigma or kappa
  double epsilon;           // reported epsilon for this grid point
  std::size_t seed_index;
  std::uint64_t seed;
};

struct TaskOutcome {
  bool ok = false;
  double mse = 0.0;
  std::string message;
};

int resolve_workers(int configured, std::size_t task_count) {
  int workers = configured;
  if (workers <= 0) {
    if (const char* env = std::getenv("BAYESCAP_WORKERS")) {
      workers = std::atoi(env);
    }
  }
  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
  }
  workers = std::max(1, workers);
  return static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(workers), task_count));
}

// One (mechanism, noise, seed) cell: fresh parameters, one DP-SGD round on
// the seed's attacked image, then the inversion attack.
TaskOutcome run_cell(const ExperimentConfig& cfg, const learner::MlpArch& arch,
                     const std::vector<Example>& dataset, const Task& task) {
  TaskOutcome out;
  try {
    SeededRng theta_rng(mix_seed(task.seed, 0x7e7a));
    const learner::ModelParams theta0 = learner::init_params(arch, theta_rng);

    const Example& target = dataset[task.seed_index % dataset.size()];
    const std::array<Example, 1> batch{target};

    learner::DpSgdParams params;
    params.eta = cfg.eta;
    params.sigma_or_kappa = task.noise;
    params.batch_L = 1;  // the attacked round observes a single example
    params.clip_c = cfg.clip_c;
    params.rounds_T = 1;

    const std::uint64_t mech_tag =
        task.mechanism == Mechanism::gaussian ? 0x6a05 : 0x6b1f;
    SeededRng round_rng(
        mix_seed(task.seed, mix_seed(mech_tag, task.grid_index)));
    auto [theta1, obs] =
        task.mechanism == Mechanism::gaussian
            ? learner::dpsgd_round_gaussian(theta0, batch, params, arch,
                                            round_rng, 0)
            : learner::dpsgd_round_vmf(theta0, batch, params, arch, round_rng,
                                       0);

    SeededRng attack_rng(
        mix_seed(task.seed, mix_seed(mech_tag ^ 0xa77ac, task.grid_index)));
    const attack::AttackResult result = attack::invert_gradients(
        obs, arch, target.label, target.features, task.mechanism, cfg.attack,
        attack_rng);
    out.ok = true;
    out.mse = result.mse;
  } catch (const std::exception& e) {
    out.message = e.what();
  }
  return out;
}

std::vector<Example> build_dataset(const ExperimentConfig& cfg) {
  if (cfg.dataset.source == DatasetConfig::Source::synthetic) {
    SeededRng rng(cfg.dataset.seed);
    return synth_dataset(cfg.dataset.n, cfg.dataset.resolution, rng);
  }
  IdxLoadOptions options;
  options.downsample = cfg.dataset.downsample;
  options.center_crop = cfg.dataset.center_crop;
  return load_idx(cfg.dataset.images_path, cfg.dataset.labels_path, options);
}

}  // namespace

void ExperimentConfig::validate() const {
  if (mechanisms.empty()) {
    throw std::invalid_argument("ExperimentConfig: at least one mechanism");
  }
  if (seeds.empty()) {
    throw std::invalid_argument("ExperimentConfig: seeds must be non-empty");
  }
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw std::invalid_argument("ExperimentConfig: delta must be in (0, 1)");
  }
  const bool has_eps = !epsilon_grid.empty();
  for (Mechanism m : mechanisms) {
    const bool has_direct = m == Mechanism::gaussian ? !sigma_grid.empty()
                                                     : !kappa_grid.empty();
    if (!has_eps && !has_direct) {
      throw std::invalid_argument(
          std::string("ExperimentConfig: no noise grid for mechanism ") +
          learner::to_string(m));
    }
  }
  learner::MlpArch arch{arch_layers, activation};
  arch.validate();
  attack.validate();
  if (!(clip_c > 0.0) || !(eta > 0.0) || !(radius_R > 0.0)) {
    throw std::invalid_argument(
        "ExperimentConfig: clip_c, eta and radius_R must be > 0");
  }
}

ExperimentConfig ExperimentConfig::desk_default() {
  ExperimentConfig cfg;
  cfg.sigma_grid = {0.005, 0.01, 0.02, 0.03, 0.05};
  cfg.kappa_grid = {300.0, 1000.0, 3000.0, 10000.0, 30000.0};
  cfg.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  return cfg;
}

SweepResult run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const learner::MlpArch arch{cfg.arch_layers, cfg.activation};
  const int p = arch.param_count();
  const std::vector<Example> dataset = build_dataset(cfg);
  if (dataset.empty()) {
    throw std::runtime_error("run_sweep: empty dataset");
  }
  if (static_cast<int>(dataset.front().features.size()) != arch.input_size()) {
    throw std::runtime_error(
        "run_sweep: dataset feature size does not match the architecture");
  }

  // Replace-one sensitivity of the clipped average with the attacked round's
  // group size of 1.
  const double sensitivity = 2.0 * cfg.clip_c / 1.0;

  struct GridPoint {
    Mechanism mechanism;
    std::size_t index;
    double noise;
    double epsilon;
  };
  std::vector<GridPoint> grid;
  for (Mechanism m : cfg.mechanisms) {
    if (!cfg.epsilon_grid.empty()) {
      for (std::size_t i = 0; i < cfg.epsilon_grid.size(); ++i) {
        const double eps = cfg.epsilon_grid[i];
        const double noise = m == Mechanism::gaussian
                                 ? epsilon_to_sigma(eps, cfg.delta, sensitivity)
                                 : epsilon_to_kappa(eps);
        grid.push_back({m, i, noise, eps});
      }
    } else if (m == Mechanism::gaussian) {
      for (std::size_t i = 0; i < cfg.sigma_grid.size(); ++i) {
        const double sigma = cfg.sigma_grid[i];
        const double eps = sigma > 0.0
                               ? sigma_to_epsilon(sigma, cfg.delta, sensitivity)
                               : std::numeric_limits<double>::infinity();
        grid.push_back({m, i, sigma, eps});
      }
    } else {
      for (std::size_t i = 0; i < cfg.kappa_grid.size(); ++i) {
        grid.push_back({m, i, cfg.kappa_grid[i], cfg.kappa_grid[i]});
      }
    }
  }

  std::vector<Task> tasks;
  tasks.reserve(grid.size() * cfg.seeds.size());
  for (const GridPoint& gp : grid) {
    for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
      tasks.push_back(
          {gp.mechanism, gp.index, gp.noise, gp.epsilon, s, cfg.seeds[s]});
    }
  }

  std::vector<TaskOutcome> outcomes(tasks.size());
  const int workers = resolve_workers(cfg.workers, tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      outcomes[i] = run_cell(cfg, arch, dataset, tasks[i]);
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  // Aggregate per grid point, in grid order (independent of scheduling).
  SweepResult result;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const GridPoint& gp = grid[g];
    std::vector<double> mses;
    std::string first_error;
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      if (tasks[t].mechanism != gp.mechanism || tasks[t].grid_index != gp.index)
        continue;
      if (outcomes[t].ok) {
        mses.push_back(outcomes[t].mse);
      } else if (first_error.empty()) {
        first_error = outcomes[t].message;
      }
    }
    if (mses.empty()) {
      result.failures.push_back({learner::to_string(gp.mechanism), gp.noise,
                                 first_error.empty() ? "no successful seeds"
                                                     : first_error});
      continue;
    }
    double mean = 0.0;
    for (double v : mses) mean += v;
    mean /= static_cast<double>(mses.size());
    double var = 0.0;
    for (double v : mses) var += (v - mean) * (v - mean);
    const double stddev =
        mses.size() > 1 ? std::sqrt(var / static_cast<double>(mses.size() - 1))
                        : 0.0;

    double log_capacity = 0.0;
    try {
      if (gp.mechanism == Mechanism::gaussian) {
        log_capacity = capacity::log_bayes_capacity_gaussian(
                           {p, gp.noise, cfg.clip_c, 1, cfg.radius_R})
                           .nat_log;
      } else {
        log_capacity =
            capacity::log_bayes_capacity_vmf({p, gp.noise}).nat_log;
      }
    } catch (const std::exception& e) {
      result.failures.push_back(
          {learner::to_string(gp.mechanism), gp.noise, e.what()});
      continue;
    }

    result.records.push_back({learner::to_string(gp.mechanism), gp.epsilon,
                              gp.noise, log_capacity, mean, stddev,
                              static_cast<int>(mses.size())});
  }

  std::sort(result.records.begin(), result.records.end(),
            [](const ExperimentRecord& a, const ExperimentRecord& b) {
              if (a.mechanism != b.mechanism) return a.mechanism < b.mechanism;
              return a.sigma_or_kappa < b.sigma_or_kappa;
            });
  std::sort(result.failures.begin(), result.failures.end(),
            [](const SweepFailure& a, const SweepFailure& b) {
              if (a.mechanism != b.mechanism) return a.mechanism < b.mechanism;
              return a.sigma_or_kappa < b.sigma_or_kappa;
            });
  return result;
}

}  // namespace bayescap::harness
