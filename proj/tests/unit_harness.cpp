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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "bayescap/calibrate.hpp"
#include "bayescap/dataset.hpp"
#include "bayescap/report.hpp"
#include "bayescap/sweep.hpp"

using namespace bayescap;
using namespace bayescap::harness;

namespace {

// Minimal well-formedness scan: every opened tag is closed in order.
bool xml_well_formed(const std::string& text) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  while ((i = text.find('<', i)) != std::string::npos) {
    const std::size_t end = text.find('>', i);
    if (end == std::string::npos) return false;
    std::string tag = text.substr(i + 1, end - i - 1);
    i = end + 1;
    if (tag.empty()) return false;
    if (tag[0] == '?' || tag[0] == '!') continue;
    const bool self_closing = tag.back() == '/';
    if (self_closing) tag.pop_back();
    const bool closing = tag[0] == '/';
    if (closing) tag.erase(0, 1);
    const std::string name = tag.substr(0, tag.find_first_of(" \t\n"));
    if (closing) {
      if (stack.empty() || stack.back() != name) return false;
      stack.pop_back();
    } else if (!self_closing) {
      stack.push_back(name);
    }
  }
  return stack.empty();
}

std::string tmp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

void write_idx_pair(const std::string& img_path, const std::string& lbl_path,
                    std::uint32_t img_magic, std::uint32_t lbl_magic,
                    std::uint32_t img_count, std::uint32_t lbl_count,
                    std::uint32_t side,
                    const std::vector<unsigned char>& pixels,
                    const std::vector<unsigned char>& labels) {
  auto put32 = [](std::ofstream& out, std::uint32_t v) {
    const unsigned char b[4] = {static_cast<unsigned char>(v >> 24),
                                static_cast<unsigned char>(v >> 16),
                                static_cast<unsigned char>(v >> 8),
                                static_cast<unsigned char>(v)};
    out.write(reinterpret_cast<const char*>(b), 4);
  };
  std::ofstream img(img_path, std::ios::binary);
  put32(img, img_magic);
  put32(img, img_count);
  put32(img, side);
  put32(img, side);
  img.write(reinterpret_cast<const char*>(pixels.data()),
            static_cast<std::streamsize>(pixels.size()));
  img.close();
  std::ofstream lbl(lbl_path, std::ios::binary);
  put32(lbl, lbl_magic);
  put32(lbl, lbl_count);
  lbl.write(reinterpret_cast<const char*>(labels.data()),
            static_cast<std::streamsize>(labels.size()));
}

ExperimentConfig tiny_sweep_config() {
  ExperimentConfig cfg = ExperimentConfig::desk_default();
  cfg.mechanisms = {learner::Mechanism::gaussian};
  cfg.sigma_grid = {0.01, 0.03};
  cfg.kappa_grid.clear();
  cfg.seeds = {1, 2};
  cfg.arch_layers = {16, 6, 4};
  cfg.dataset.n = 12;
  cfg.dataset.resolution = 4;
  cfg.attack.iterations = 60;
  cfg.attack.restarts = 1;
  cfg.workers = 2;
  return cfg;
}

}  // namespace

TEST_CASE("epsilon_to_sigma calibration") {
  CHECK(epsilon_to_sigma(1.0, 1e-5, 1.0) ==
        doctest::Approx(4.844805262605389).epsilon(1e-12));
  CHECK(epsilon_to_sigma(2.0, 1e-5, 1.0) ==
        doctest::Approx(4.844805262605389 / 2.0).epsilon(1e-12));
  // sensitivity 2c/L with c=1, L=4 halves the one-unit sigma.
  CHECK(epsilon_to_sigma(1.0, 1e-5, 2.0 / 4.0) ==
        doctest::Approx(0.5 * 4.844805262605389).epsilon(1e-12));
  CHECK(sigma_to_epsilon(epsilon_to_sigma(3.7, 1e-5, 2.0), 1e-5, 2.0) ==
        doctest::Approx(3.7).epsilon(1e-12));
  CHECK_THROWS_AS(epsilon_to_sigma(0.0, 1e-5, 1.0), std::domain_error);
  CHECK_THROWS_AS(epsilon_to_sigma(1.0, 1.0, 1.0), std::domain_error);
}

TEST_CASE("epsilon_to_kappa identity") {
  CHECK(epsilon_to_kappa(173.0) == 173.0);
  CHECK(epsilon_to_kappa(1.0) == 1.0);
  CHECK(epsilon_to_kappa(0.5) == 0.5);
  CHECK_THROWS_AS(epsilon_to_kappa(0.0), std::domain_error);
}

TEST_CASE("load_idx parses the container bit-exactly") {
  const std::string img = tmp_path("bayescap_test_images.idx");
  const std::string lbl = tmp_path("bayescap_test_labels.idx");
  write_idx_pair(img, lbl, 0x00000803, 0x00000801, 1, 1, 2,
                 {0, 255, 128, 64}, {7});
  const auto examples = load_idx(img, lbl);
  REQUIRE(examples.size() == 1);
  CHECK(examples[0].label == 7);
  CHECK(examples[0].features[0] == doctest::Approx(0.0));
  CHECK(examples[0].features[1] == doctest::Approx(1.0));
  CHECK(examples[0].features[2] == doctest::Approx(128.0 / 255.0));  // 0.50196
  CHECK(examples[0].features[3] == doctest::Approx(64.0 / 255.0));   // 0.25098
}

TEST_CASE("load_idx error paths name the offending value") {
  const std::string img = tmp_path("bayescap_bad_images.idx");
  const std::string lbl = tmp_path("bayescap_bad_labels.idx");
  write_idx_pair(img, lbl, 0x00000802, 0x00000801, 1, 1, 2,
                 {0, 0, 0, 0}, {1});
  CHECK_THROWS_WITH_AS(load_idx(img, lbl), doctest::Contains("0x00000802"),
                       std::runtime_error);
  write_idx_pair(img, lbl, 0x00000803, 0x00000801, 10, 9, 1,
                 std::vector<unsigned char>(10, 0),
                 std::vector<unsigned char>(9, 0));
  CHECK_THROWS_WITH_AS(load_idx(img, lbl), doctest::Contains("does not match"),
                       std::runtime_error);
}

TEST_CASE("load_idx downsampling and crop") {
  // One 4x4 image with a known box average.
  std::vector<unsigned char> px(16);
  for (int i = 0; i < 16; ++i) px[static_cast<std::size_t>(i)] = i * 16;
  const std::string img = tmp_path("bayescap_ds_images.idx");
  const std::string lbl = tmp_path("bayescap_ds_labels.idx");
  write_idx_pair(img, lbl, 0x00000803, 0x00000801, 1, 1, 4, px, {2});
  IdxLoadOptions options;
  options.downsample = 2;
  const auto examples = load_idx(img, lbl, options);
  REQUIRE(examples[0].features.size() == 4);
  // Top-left box: pixels 0,16,64,80 -> mean 40 -> /255.
  CHECK(examples[0].features[0] == doctest::Approx(40.0 / 255.0));
  options.center_crop = 1;
  const auto cropped = load_idx(img, lbl, options);
  REQUIRE(cropped[0].features.size() == 1);
  options.center_crop = 5;
  CHECK_THROWS_AS(load_idx(img, lbl, options), std::invalid_argument);
}

TEST_CASE("synth_dataset determinism and ranges") {
  SeededRng a(5);
  SeededRng b(5);
  SeededRng c(6);
  const auto da = synth_dataset(25, 8, a);
  const auto db = synth_dataset(25, 8, b);
  const auto dc = synth_dataset(25, 8, c);
  REQUIRE(da.size() == 25);
  bool same = true;
  bool differs = false;
  for (std::size_t i = 0; i < da.size(); ++i) {
    same = same && da[i].features == db[i].features;
    differs = differs || da[i].features != dc[i].features;
    CHECK(da[i].label == static_cast<int>(i % 10));
    for (double v : da[i].features) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
  CHECK(same);
  CHECK(differs);
}

TEST_CASE("emit_csv format and round trip") {
  std::vector<ExperimentRecord> records;
  std::ostringstream empty;
  emit_csv(records, empty);
  CHECK(empty.str() ==
        "mechanism,epsilon,sigma_or_kappa,log_bayes_capacity,mse_mean,"
        "mse_std,n_seeds\n");

  records.push_back({"gaussian", 193.79221050421556, 0.05,
                     695.5573413594727, 0.136301234567, 0.01234567891, 10});
  records.push_back({"vmf", 3000.0, 3000.0, 2718.456789012, 0.0579, 0.0123, 10});
  std::ostringstream out;
  emit_csv(records, out);
  std::istringstream in(out.str());
  const auto back = parse_csv(in);
  REQUIRE(back.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back[i].mechanism == records[i].mechanism);
    CHECK(back[i].epsilon ==
          doctest::Approx(records[i].epsilon).epsilon(1e-11));
    CHECK(back[i].sigma_or_kappa == records[i].sigma_or_kappa);
    CHECK(back[i].log_bayes_capacity ==
          doctest::Approx(records[i].log_bayes_capacity).epsilon(1e-11));
    CHECK(back[i].mse_mean == doctest::Approx(records[i].mse_mean).epsilon(1e-11));
    CHECK(back[i].n_seeds == records[i].n_seeds);
  }
  // Column count is 7 on every row.
  std::istringstream lines(out.str());
  std::string line;
  while (std::getline(lines, line)) {
    CHECK(std::count(line.begin(), line.end(), ',') == 6);
  }
}

TEST_CASE("emit_scatter_svg glyphs, legend and well-formedness") {
  std::vector<ExperimentRecord> one = {
      {"gaussian", 10.0, 0.5, 3.2, 0.1, 0.01, 5}};
  std::ostringstream single;
  emit_scatter_svg(one, ScatterAxis::epsilon, single);
  const std::string s1 = single.str();
  CHECK(xml_well_formed(s1));
  CHECK(std::count(s1.begin(), s1.end(), '\n') > 5);
  // one data marker plus one legend glyph
  std::size_t circles = 0;
  for (std::size_t p = s1.find("<circle"); p != std::string::npos;
       p = s1.find("<circle", p + 1)) {
    ++circles;
  }
  CHECK(circles == 2);
  CHECK(s1.find("polygon") == std::string::npos);  // no vmf glyphs

  std::vector<ExperimentRecord> both = {
      {"gaussian", 10.0, 0.5, 3.2, 0.1, 0.01, 5},
      {"gaussian", 100.0, 0.05, 33.0, 0.01, 0.001, 5},
      {"vmf", 300.0, 300.0, 270.0, 0.12, 0.01, 5}};
  std::ostringstream two;
  emit_scatter_svg(both, ScatterAxis::log_capacity, two);
  const std::string s2 = two.str();
  CHECK(xml_well_formed(s2));
  CHECK(s2.find("<circle") != std::string::npos);
  CHECK(s2.find("<polygon") != std::string::npos);
  CHECK(s2.find(">gaussian</text>") != std::string::npos);
  CHECK(s2.find(">vmf</text>") != std::string::npos);
  CHECK(s2.find("log Bayes") != std::string::npos);

  CHECK_THROWS_AS(emit_scatter_svg({}, ScatterAxis::epsilon, single),
                  std::invalid_argument);
}

TEST_CASE("write_pgm emits valid P2") {
  std::ostringstream out;
  write_pgm(std::vector<double>{0.0, 0.5, 1.0, 2.0}, 2, 2, out);
  CHECK(out.str() == "P2\n2 2\n255\n0 128\n255 255\n");
  CHECK_THROWS_AS(write_pgm(std::vector<double>{0.0}, 2, 2, out),
                  std::invalid_argument);
}

TEST_CASE("config json mirrors ExperimentConfig") {
  std::istringstream in(R"({
    "mechanisms": ["vmf"],
    "epsilon_grid": [1, 5, 173],
    "delta": 1e-6,
    "seeds": [11, 12, 13],
    "arch": [16, 8, 4],
    "activation": "relu",
    "dataset": {"source": "synthetic", "n": 20, "resolution": 4, "seed": 99},
    "attack": {"iterations": 50, "step_size": 0.02, "tv_weight": 0.0,
               "restarts": 2, "match_loss": "squared-error"},
    "radius_R": 2.0,
    "clip_c": 1.0,
    "eta": 0.25,
    "workers": 3,
    "output_dir": "elsewhere"
  })");
  const ExperimentConfig cfg = load_config_json(in);
  CHECK(cfg.mechanisms == std::vector<learner::Mechanism>{
                              learner::Mechanism::vmf});
  CHECK(cfg.epsilon_grid == std::vector<double>{1.0, 5.0, 173.0});
  CHECK(cfg.delta == 1e-6);
  CHECK(cfg.seeds == std::vector<std::uint64_t>{11, 12, 13});
  CHECK(cfg.arch_layers == std::vector<int>{16, 8, 4});
  CHECK(cfg.activation == learner::Activation::relu);
  CHECK(cfg.dataset.n == 20);
  CHECK(cfg.dataset.seed == 99);
  CHECK(cfg.attack.iterations == 50);
  CHECK(cfg.attack.match_loss == attack::MatchLoss::squared_error);
  CHECK(cfg.radius_R == 2.0);
  CHECK(cfg.eta == 0.25);
  CHECK(cfg.workers == 3);
  CHECK(cfg.output_dir == "elsewhere");

  std::istringstream bad("{\"mechanisms\": [\"laplace\"]}");
  CHECK_THROWS_AS(load_config_json(bad), std::runtime_error);
  std::istringstream invalid("not json");
  CHECK_THROWS_WITH_AS(load_config_json(invalid),
                       doctest::Contains("invalid JSON"), std::runtime_error);
}

TEST_CASE("run_sweep: records, determinism across worker counts") {
  ExperimentConfig cfg = tiny_sweep_config();
  const SweepResult r1 = run_sweep(cfg);
  REQUIRE(r1.records.size() == 2);
  CHECK(r1.failures.empty());
  for (const ExperimentRecord& rec : r1.records) {
    CHECK(rec.mechanism == "gaussian");
    CHECK(rec.n_seeds == 2);
    CHECK(rec.mse_mean >= 0.0);
    CHECK(rec.log_bayes_capacity >= 0.0);
    CHECK(rec.epsilon ==
          doctest::Approx(sigma_to_epsilon(rec.sigma_or_kappa, cfg.delta, 2.0)));
  }
  // Capacity strictly descends as sigma ascends.
  CHECK(r1.records[0].sigma_or_kappa < r1.records[1].sigma_or_kappa);
  CHECK(r1.records[0].log_bayes_capacity > r1.records[1].log_bayes_capacity);

  // Bit-identical CSV regardless of worker count.
  cfg.workers = 1;
  const SweepResult r2 = run_sweep(cfg);
  std::ostringstream csv1;
  std::ostringstream csv2;
  emit_csv(r1.records, csv1);
  emit_csv(r2.records, csv2);
  CHECK(csv1.str() == csv2.str());
}

TEST_CASE("run_sweep: single point, single seed") {
  ExperimentConfig cfg = tiny_sweep_config();
  cfg.sigma_grid = {0.02};
  cfg.seeds = {4};
  const SweepResult r = run_sweep(cfg);
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].n_seeds == 1);
  CHECK(r.records[0].mse_std == 0.0);
}

TEST_CASE("run_sweep: a failing grid point is recorded, sweep continues") {
  ExperimentConfig cfg = tiny_sweep_config();
  // sigma = 0 trains fine but the Gaussian capacity spec rejects it, so the
  // grid point fails while the other one survives.
  cfg.sigma_grid = {0.0, 0.02};
  const SweepResult r = run_sweep(cfg);
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].sigma_or_kappa == 0.02);
  REQUIRE(r.failures.size() == 1);
  CHECK(r.failures[0].sigma_or_kappa == 0.0);
  CHECK(!r.failures[0].message.empty());
}

TEST_CASE("run_sweep: epsilon grid mode calibrates both mechanisms") {
  ExperimentConfig cfg = tiny_sweep_config();
  cfg.mechanisms = {learner::Mechanism::gaussian, learner::Mechanism::vmf};
  cfg.sigma_grid.clear();
  cfg.epsilon_grid = {500.0, 2000.0};
  cfg.seeds = {3};
  const SweepResult r = run_sweep(cfg);
  REQUIRE(r.records.size() == 4);
  for (const ExperimentRecord& rec : r.records) {
    if (rec.mechanism == "gaussian") {
      CHECK(rec.sigma_or_kappa ==
            doctest::Approx(epsilon_to_sigma(rec.epsilon, cfg.delta, 2.0)));
    } else {
      CHECK(rec.sigma_or_kappa == rec.epsilon);
    }
  }
}
