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
// Experiment orchestration: noise calibration, dataset construction, sweeps
// over mechanisms and noise levels, and aggregation into experiment records.
// Grid points execute concurrently up to a worker count; every task derives
// its rng from (seed, mechanism, grid point), so results are independent of
// scheduling and records are sorted before emission.
#ifndef BAYESCAP_SWEEP_HPP_
#define BAYESCAP_SWEEP_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bayescap/attack.hpp"
#include "bayescap/learner.hpp"

namespace bayescap::harness {

struct DatasetConfig {
  enum class Source { synthetic, idx_files };
  Source source = Source::synthetic;
  // synthetic
  int n = 64;
  int resolution = 8;
  std::uint64_t seed = 2026;
  // idx-files
  std::string images_path;
  std::string labels_path;
  int downsample = 2;
  int center_crop = 8;
};

struct ExperimentConfig {
  std::vector<learner::Mechanism> mechanisms = {learner::Mechanism::gaussian,
                                                learner::Mechanism::vmf};
  // Either an epsilon grid (calibrated per mechanism) or direct noise grids.
  std::vector<double> epsilon_grid;
  std::vector<double> sigma_grid;  // gaussian, used when epsilon_grid empty
  std::vector<double> kappa_grid;  // vmf, used when epsilon_grid empty
  double delta = 1e-5;
  std::vector<std::uint64_t> seeds;
  std::vector<int> arch_layers = {64, 16, 10};
  learner::Activation activation = learner::Activation::sigmoid;
  DatasetConfig dataset;
  attack::AttackConfig attack;
  double radius_R = 1.0;  // capacity-reporting radius (whole-gradient clip)
  double clip_c = 1.0;
  double eta = 0.1;
  int workers = 0;  // 0: $BAYESCAP_WORKERS, else hardware concurrency
  std::string output_dir = "out";

  void validate() const;

  // Desk-scale defaults: noise grids spanning each mechanism's transition
  // from reconstructible to noise-dominated at p = 1210, 10 seeds.
  static ExperimentConfig desk_default();
};

struct ExperimentRecord {
  std::string mechanism;
  double epsilon = 0.0;
  double sigma_or_kappa = 0.0;
  double log_bayes_capacity = 0.0;  // natural log
  double mse_mean = 0.0;
  double mse_std = 0.0;
  int n_seeds = 0;
};

struct SweepFailure {
  std::string mechanism;
  double sigma_or_kappa = 0.0;
  std::string message;
};

struct SweepResult {
  std::vector<ExperimentRecord> records;  // sorted by (mechanism, noise)
  std::vector<SweepFailure> failures;     // failed grid points, sweep continued
};

SweepResult run_sweep(const ExperimentConfig& cfg);

// JSON configuration mirroring ExperimentConfig field-for-field.
ExperimentConfig load_config_json(std::istream& in);
ExperimentConfig load_config_file(const std::string& path);

}  // namespace bayescap::harness

#endif  // BAYESCAP_SWEEP_HPP_
