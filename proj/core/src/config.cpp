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
// JSON experiment configuration, mirroring ExperimentConfig field-for-field.
// Missing fields keep the desk-scale defaults.
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "bayescap/sweep.hpp"

namespace bayescap::harness {

namespace {

using nlohmann::json;

learner::Mechanism parse_mechanism(const std::string& name) {
  if (name == "gaussian") return learner::Mechanism::gaussian;
  if (name == "vmf") return learner::Mechanism::vmf;
  throw std::runtime_error("config: unknown mechanism \"" + name + "\"");
}

attack::MatchLoss parse_match_loss(const std::string& name) {
  if (name == "cosine") return attack::MatchLoss::cosine;
  if (name == "squared-error") return attack::MatchLoss::squared_error;
  throw std::runtime_error("config: unknown match_loss \"" + name + "\"");
}

learner::Activation parse_activation(const std::string& name) {
  if (name == "relu") return learner::Activation::relu;
  if (name == "sigmoid") return learner::Activation::sigmoid;
  throw std::runtime_error("config: unknown activation \"" + name + "\"");
}

}  // namespace

ExperimentConfig load_config_json(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("config: invalid JSON: ") + e.what());
  }

  ExperimentConfig cfg = ExperimentConfig::desk_default();

  if (j.contains("mechanisms")) {
    cfg.mechanisms.clear();
    for (const auto& m : j.at("mechanisms")) {
      cfg.mechanisms.push_back(parse_mechanism(m.get<std::string>()));
    }
  }
  if (j.contains("epsilon_grid")) {
    cfg.epsilon_grid = j.at("epsilon_grid").get<std::vector<double>>();
  }
  if (j.contains("sigma_grid")) {
    cfg.sigma_grid = j.at("sigma_grid").get<std::vector<double>>();
  }
  if (j.contains("kappa_grid")) {
    cfg.kappa_grid = j.at("kappa_grid").get<std::vector<double>>();
  }
  if (j.contains("delta")) cfg.delta = j.at("delta").get<double>();
  if (j.contains("seeds")) {
    cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  }
  if (j.contains("arch")) {
    cfg.arch_layers = j.at("arch").get<std::vector<int>>();
  }
  if (j.contains("activation")) {
    cfg.activation = parse_activation(j.at("activation").get<std::string>());
  }
  if (j.contains("dataset")) {
    const json& d = j.at("dataset");
    const std::string source = d.value("source", "synthetic");
    if (source == "synthetic") {
      cfg.dataset.source = DatasetConfig::Source::synthetic;
      cfg.dataset.n = d.value("n", cfg.dataset.n);
      cfg.dataset.resolution = d.value("resolution", cfg.dataset.resolution);
      cfg.dataset.seed = d.value("seed", cfg.dataset.seed);
    } else if (source == "idx-files") {
      cfg.dataset.source = DatasetConfig::Source::idx_files;
      cfg.dataset.images_path = d.at("images").get<std::string>();
      cfg.dataset.labels_path = d.at("labels").get<std::string>();
      cfg.dataset.downsample = d.value("downsample", cfg.dataset.downsample);
      cfg.dataset.center_crop = d.value("center_crop", cfg.dataset.center_crop);
    } else {
      throw std::runtime_error("config: unknown dataset source \"" + source +
                               "\"");
    }
  }
  if (j.contains("attack")) {
    const json& a = j.at("attack");
    cfg.attack.iterations = a.value("iterations", cfg.attack.iterations);
    cfg.attack.step_size = a.value("step_size", cfg.attack.step_size);
    cfg.attack.tv_weight = a.value("tv_weight", cfg.attack.tv_weight);
    cfg.attack.restarts = a.value("restarts", cfg.attack.restarts);
    if (a.contains("match_loss")) {
      cfg.attack.match_loss =
          parse_match_loss(a.at("match_loss").get<std::string>());
    }
  }
  if (j.contains("radius_R")) cfg.radius_R = j.at("radius_R").get<double>();
  if (j.contains("clip_c")) cfg.clip_c = j.at("clip_c").get<double>();
  if (j.contains("eta")) cfg.eta = j.at("eta").get<double>();
  if (j.contains("workers")) cfg.workers = j.at("workers").get<int>();
  if (j.contains("output_dir")) {
    cfg.output_dir = j.at("output_dir").get<std::string>();
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("config: cannot open " + path);
  }
  return load_config_json(in);
}

}  // namespace bayescap::harness
