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
// Command line front end: discrete QIF calculations, continuous capacities
// and their oracles, DP-SGD training rounds, the gradient-inversion attack
// and the experiment sweep.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bayescap/attack.hpp"
#include "bayescap/calibrate.hpp"
#include "bayescap/capacity.hpp"
#include "bayescap/dataset.hpp"
#include "bayescap/learner.hpp"
#include "bayescap/qif.hpp"
#include "bayescap/report.hpp"
#include "bayescap/sweep.hpp"

namespace {

using namespace bayescap;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

std::vector<int> parse_arch(const std::string& text) {
  std::vector<int> layers;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) layers.push_back(std::stoi(part));
  return layers;
}

learner::Mechanism parse_mech(const std::string& name) {
  if (name == "gaussian") return learner::Mechanism::gaussian;
  if (name == "vmf") return learner::Mechanism::vmf;
  throw std::runtime_error("unknown mechanism " + name);
}

void print_log_capacity(const capacity::LogCapacity& cap) {
  std::cout << "nat_log " << fmt(cap.nat_log) << "\n"
            << "bits " << fmt(cap.bits) << "\n";
  if (cap.nat_log < 700.0) {
    std::cout << "capacity " << fmt(std::exp(cap.nat_log)) << "\n";
  }
}

// ---------------------------------------------------------------- qif ----

struct QifArgs {
  std::string channel_path;
  std::string prior_path;
  std::string gain_path;
  std::string left_path;
  std::string right_path;
  std::string out_path;
};

void add_qif_commands(CLI::App& app, QifArgs& args) {
  CLI::App* qif = app.add_subcommand("qif", "discrete channel calculations");
  qif->require_subcommand(1);

  CLI::App* cap = qif->add_subcommand("capacity", "Bayes' capacity of a channel");
  cap->add_option("--channel", args.channel_path, "channel file")->required();
  cap->callback([&args] {
    auto in = open_input(args.channel_path);
    const qif::CapacityReport report =
        qif::bayes_capacity_discrete(qif::read_channel(in));
    std::cout << "capacity " << fmt(report.value) << "\n"
              << "nat_log " << fmt(report.nat_log) << "\n"
              << "bits " << fmt(report.bits) << "\n";
  });

  CLI::App* vprior = qif->add_subcommand("vprior", "prior vulnerability");
  vprior->add_option("--prior", args.prior_path, "prior file")->required();
  vprior->add_option("--gain", args.gain_path, "gain file")->required();
  vprior->callback([&args] {
    auto pin = open_input(args.prior_path);
    auto gin = open_input(args.gain_path);
    std::cout << "v_prior "
              << fmt(qif::v_prior(qif::read_prior(pin), qif::read_gain(gin)))
              << "\n";
  });

  CLI::App* vpost = qif->add_subcommand("vpost", "posterior vulnerability");
  vpost->add_option("--prior", args.prior_path, "prior file")->required();
  vpost->add_option("--gain", args.gain_path, "gain file")->required();
  vpost->add_option("--channel", args.channel_path, "channel file")->required();
  vpost->callback([&args] {
    auto pin = open_input(args.prior_path);
    auto gin = open_input(args.gain_path);
    auto cin = open_input(args.channel_path);
    std::cout << "v_post "
              << fmt(qif::v_post(qif::read_prior(pin), qif::read_gain(gin),
                                 qif::read_channel(cin)))
              << "\n";
  });

  CLI::App* leak = qif->add_subcommand("leakage", "multiplicative leakage");
  leak->add_option("--prior", args.prior_path, "prior file")->required();
  leak->add_option("--gain", args.gain_path, "gain file")->required();
  leak->add_option("--channel", args.channel_path, "channel file")->required();
  leak->callback([&args] {
    auto pin = open_input(args.prior_path);
    auto gin = open_input(args.gain_path);
    auto cin = open_input(args.channel_path);
    std::cout << "leakage "
              << fmt(qif::mult_leakage(qif::read_prior(pin),
                                       qif::read_gain(gin),
                                       qif::read_channel(cin)))
              << "\n";
  });

  CLI::App* comp = qif->add_subcommand("compose", "matrix product C.D");
  comp->add_option("--left", args.left_path, "left channel file")->required();
  comp->add_option("--right", args.right_path, "right channel file")->required();
  comp->add_option("--out", args.out_path, "output file (stdout if omitted)");
  comp->callback([&args] {
    auto lin = open_input(args.left_path);
    auto rin = open_input(args.right_path);
    const qif::Channel composed =
        qif::compose(qif::read_channel(lin), qif::read_channel(rin));
    if (args.out_path.empty()) {
      qif::write_matrix(std::cout, composed.rows(), composed.cols(),
                        composed.entries());
    } else {
      std::ofstream out(args.out_path);
      if (!out) throw std::runtime_error("cannot open " + args.out_path);
      qif::write_matrix(out, composed.rows(), composed.cols(),
                        composed.entries());
    }
  });
}

// ----------------------------------------------------- capacity/oracle ----

struct CapacityArgs {
  int p = 1;
  double sigma = 1.0;
  double kappa = 1.0;
  double radius = 1.0;
  int batch = 1;
  int resolution = 256;
};

void add_capacity_commands(CLI::App& app, CapacityArgs& args) {
  CLI::App* cap = app.add_subcommand(
      "capacity", "closed-form continuous Bayes' capacity (log scale)");
  cap->require_subcommand(1);

  CLI::App* gauss = cap->add_subcommand("gaussian", "Gaussian mechanism");
  gauss->add_option("--p", args.p, "dimension")->required();
  gauss->add_option("--sigma", args.sigma, "noise scale")->required();
  gauss->add_option("--radius", args.radius, "domain ball radius R")
      ->default_val(1.0);
  gauss->add_option("--batch", args.batch, "group size L (no effect on the capacity)")
      ->default_val(1);
  gauss->callback([&args] {
    const capacity::GaussianMechSpec spec{args.p, args.sigma, 1.0, args.batch,
                                          args.radius};
    print_log_capacity(capacity::log_bayes_capacity_gaussian(spec));
    std::cout << "coefficient_variant proof-derived (oracle-selected)\n";
  });

  CLI::App* vmf = cap->add_subcommand("vmf", "von Mises-Fisher mechanism");
  vmf->add_option("--p", args.p, "dimension")->required();
  vmf->add_option("--kappa", args.kappa, "concentration")->required();
  vmf->callback([&args] {
    print_log_capacity(
        capacity::log_bayes_capacity_vmf({args.p, args.kappa}));
  });

  CLI::App* oracle = app.add_subcommand(
      "oracle", "numerical capacity oracle (p <= 3) vs the closed form");
  oracle->require_subcommand(1);

  CLI::App* og = oracle->add_subcommand("gaussian", "Gaussian sup-density integral");
  og->add_option("--p", args.p, "dimension (<= 3)")->required();
  og->add_option("--sigma", args.sigma, "noise scale")->required();
  og->add_option("--radius", args.radius, "domain ball radius R")->default_val(1.0);
  og->add_option("--resolution", args.resolution, "quadrature nodes")
      ->default_val(256);
  og->callback([&args] {
    const capacity::GaussianMechSpec spec{args.p, args.sigma, 1.0, 1,
                                          args.radius};
    const auto method = args.p == 1
                            ? numerics::QuadratureMethod::adaptive_1d
                            : (args.p == 2 ? numerics::QuadratureMethod::polar_2d
                                           : numerics::QuadratureMethod::spherical_3d);
    const numerics::QuadratureSpec quad{method, args.resolution,
                                        args.radius + 12.0 * args.sigma};
    const auto est = capacity::capacity_oracle_gaussian(spec, quad);
    const auto closed = capacity::log_bayes_capacity_gaussian(spec);
    print_log_capacity(closed);
    std::cout << "oracle " << fmt(est.value) << "\n"
              << "oracle_error " << fmt(est.error) << "\n"
              << "discrepancy "
              << fmt(std::abs(std::exp(closed.nat_log) / est.value - 1.0))
              << "\n";
  });

  CLI::App* ov = oracle->add_subcommand("vmf", "VMF sup-density integral");
  ov->add_option("--p", args.p, "dimension (2 or 3)")->required();
  ov->add_option("--kappa", args.kappa, "concentration")->required();
  ov->add_option("--resolution", args.resolution, "quadrature nodes")
      ->default_val(256);
  ov->callback([&args] {
    const capacity::VmfMechSpec spec{args.p, args.kappa};
    const auto method = args.p == 2 ? numerics::QuadratureMethod::circle_1d
                                    : numerics::QuadratureMethod::sphere_2d;
    const numerics::QuadratureSpec quad{method, args.resolution, 1.0};
    const auto est = capacity::capacity_oracle_vmf(spec, quad);
    const auto closed = capacity::log_bayes_capacity_vmf(spec);
    print_log_capacity(closed);
    std::cout << "oracle " << fmt(est.value) << "\n"
              << "oracle_error " << fmt(est.error) << "\n"
              << "discrepancy "
              << fmt(std::abs(std::exp(closed.nat_log) / est.value - 1.0))
              << "\n";
  });
}

// -------------------------------------------------------------- train ----

struct TrainArgs {
  std::string mech = "gaussian";
  double sigma = -1.0;
  double kappa = -1.0;
  double eta = 0.1;
  int batch = 1;
  int rounds = 1;
  std::uint64_t seed = 1;
  std::string arch = "64,16,10";
  double clip = 1.0;
  std::string out_path = "observations.txt";
  std::string data = "synthetic";
  int data_n = 64;
  int data_resolution = 8;
  std::uint64_t data_seed = 2026;
  std::string images_path;
  std::string labels_path;
  int downsample = 2;
  int center_crop = 8;
};

std::vector<learner::Example> load_cli_dataset(const TrainArgs& args) {
  if (args.data == "synthetic") {
    SeededRng rng(args.data_seed);
    return harness::synth_dataset(args.data_n, args.data_resolution, rng);
  }
  if (args.data == "idx") {
    harness::IdxLoadOptions options;
    options.downsample = args.downsample;
    options.center_crop = args.center_crop;
    return harness::load_idx(args.images_path, args.labels_path, options);
  }
  throw std::runtime_error("unknown --data source " + args.data);
}

void add_train_command(CLI::App& app, TrainArgs& args) {
  CLI::App* train = app.add_subcommand(
      "train", "run DP-SGD rounds and emit the leaked observations");
  train->add_option("--mech", args.mech, "gaussian or vmf")->required();
  train->add_option("--sigma", args.sigma, "Gaussian noise scale");
  train->add_option("--kappa", args.kappa, "VMF concentration");
  train->add_option("--eta", args.eta, "learning rate")->default_val(0.1);
  train->add_option("--batch", args.batch, "group size L")->default_val(1);
  train->add_option("--rounds", args.rounds, "round count T")->default_val(1);
  train->add_option("--seed", args.seed, "rng seed")->required();
  train->add_option("--arch", args.arch, "layer sizes, e.g. 64,16,10")
      ->default_val("64,16,10");
  train->add_option("--clip", args.clip, "gradient norm bound c")
      ->default_val(1.0);
  train->add_option("--out", args.out_path, "observation file")->required();
  train->add_option("--data", args.data, "synthetic or idx")
      ->default_val("synthetic");
  train->add_option("--data-n", args.data_n, "synthetic dataset size");
  train->add_option("--data-resolution", args.data_resolution,
                    "synthetic image side");
  train->add_option("--data-seed", args.data_seed, "synthetic dataset seed");
  train->add_option("--images", args.images_path, "IDX image file");
  train->add_option("--labels", args.labels_path, "IDX label file");
  train->add_option("--downsample", args.downsample, "IDX box downsample");
  train->add_option("--center-crop", args.center_crop, "IDX center crop");
  train->callback([&args] {
    const learner::Mechanism mech = parse_mech(args.mech);
    learner::DpSgdParams params;
    params.eta = args.eta;
    params.batch_L = args.batch;
    params.clip_c = args.clip;
    params.rounds_T = args.rounds;
    params.sigma_or_kappa =
        mech == learner::Mechanism::gaussian ? args.sigma : args.kappa;
    if (params.sigma_or_kappa < 0.0) {
      throw std::runtime_error(
          "provide --sigma for gaussian or --kappa for vmf");
    }
    const learner::MlpArch arch{parse_arch(args.arch),
                                learner::Activation::sigmoid};
    const auto dataset = load_cli_dataset(args);
    SeededRng rng(args.seed);
    const learner::TrainResult result =
        learner::train(arch, dataset, params, mech, rng);

    std::ofstream out(args.out_path);
    if (!out) throw std::runtime_error("cannot open " + args.out_path);
    char buf[40];
    for (const learner::LeakObservation& obs : result.observations) {
      for (std::size_t i = 0; i < obs.g_tilde.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", obs.g_tilde[i]);
        out << buf << (i + 1 == obs.g_tilde.size() ? '\n' : ' ');
      }
    }
    std::cout << "rounds " << result.observations.size() << "\n"
              << "observations_file " << args.out_path << "\n";
  });
}

// ------------------------------------------------------------- attack ----

struct AttackArgs {
  std::string obs_path;
  std::string arch = "64,16,10";
  int label = 0;
  int iters = 600;
  std::uint64_t seed = 1;
  int round = 0;
  std::uint64_t init_seed = 1;
  double eta = 0.1;
  std::string mech = "gaussian";
  int restarts = 3;
  double step = 0.05;
  double tv = 1e-5;
  std::string match = "cosine";
  std::string truth_path;
  std::string pgm_path;
};

void add_attack_command(CLI::App& app, AttackArgs& args) {
  CLI::App* atk = app.add_subcommand(
      "attack", "gradient-inversion attack against one leaked observation");
  atk->add_option("--obs", args.obs_path, "observation file from train")
      ->required();
  atk->add_option("--arch", args.arch, "layer sizes")->default_val("64,16,10");
  atk->add_option("--label", args.label, "true class label")->required();
  atk->add_option("--iters", args.iters, "optimizer iterations")
      ->default_val(600);
  atk->add_option("--seed", args.seed, "attack rng seed")->required();
  atk->add_option("--round", args.round, "attacked round index")
      ->default_val(0);
  atk->add_option("--init-seed", args.init_seed,
                  "seed the server used for theta_0 (train --seed)")
      ->required();
  atk->add_option("--eta", args.eta, "learning rate used in training")
      ->default_val(0.1);
  atk->add_option("--mech", args.mech, "mechanism that produced the leak")
      ->default_val("gaussian");
  atk->add_option("--restarts", args.restarts, "restart count")->default_val(3);
  atk->add_option("--step", args.step, "sign-descent step size")
      ->default_val(0.05);
  atk->add_option("--tv", args.tv, "total-variation weight")->default_val(1e-5);
  atk->add_option("--match", args.match, "cosine or squared-error")
      ->default_val("cosine");
  atk->add_option("--truth", args.truth_path,
                  "true image (1 x d matrix text) for the mse report")
      ->required();
  atk->add_option("--out-pgm", args.pgm_path, "reconstruction output (P2)")
      ->required();
  atk->callback([&args] {
    const learner::MlpArch arch{parse_arch(args.arch),
                                learner::Activation::sigmoid};
    // Parse the leak file: one whitespace-separated vector per line.
    std::vector<Vector> leaks;
    {
      auto in = open_input(args.obs_path);
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        Vector v;
        double x = 0.0;
        while (ls >> x) v.push_back(x);
        leaks.push_back(std::move(v));
      }
    }
    if (args.round < 0 || static_cast<std::size_t>(args.round) >= leaks.size()) {
      throw std::runtime_error("attacked round is not in the observation file");
    }

    // The server's view: replay theta_0, then descend through the leaks.
    SeededRng init_rng(args.init_seed);
    learner::ModelParams theta = learner::init_params(arch, init_rng);
    for (int t = 0; t < args.round; ++t) {
      for (std::size_t i = 0; i < theta.theta.size(); ++i) {
        theta.theta[i] -= args.eta * leaks[static_cast<std::size_t>(t)][i];
      }
    }
    learner::LeakObservation obs{args.round,
                                 leaks[static_cast<std::size_t>(args.round)],
                                 std::move(theta)};

    auto tin = open_input(args.truth_path);
    std::size_t rows = 0;
    std::size_t cols = 0;
    {
      long long r = 0;
      long long c = 0;
      if (!(tin >> r >> c) || r != 1 || c <= 0) {
        throw std::runtime_error("truth file must be a 1 x d matrix");
      }
      rows = static_cast<std::size_t>(r);
      cols = static_cast<std::size_t>(c);
    }
    Vector truth(rows * cols);
    for (double& v : truth) {
      if (!(tin >> v)) throw std::runtime_error("truth file truncated");
    }

    attack::AttackConfig cfg;
    cfg.iterations = args.iters;
    cfg.restarts = args.restarts;
    cfg.step_size = args.step;
    cfg.tv_weight = args.tv;
    cfg.match_loss = args.match == "squared-error"
                         ? attack::MatchLoss::squared_error
                         : attack::MatchLoss::cosine;
    SeededRng rng(args.seed);
    const attack::AttackResult result = attack::invert_gradients(
        obs, arch, args.label, truth, parse_mech(args.mech), cfg, rng);

    const int side =
        static_cast<int>(std::lround(std::sqrt(double(truth.size()))));
    harness::write_pgm(result.reconstruction, side, side, args.pgm_path);
    std::cout << "mse " << fmt(result.mse) << "\n"
              << "match_loss " << fmt(result.final_match_loss) << "\n"
              << "iterations_used " << result.iterations_used << "\n"
              << "reconstruction_pgm " << args.pgm_path << "\n";
  });
}

// ------------------------------------------------------------ dataset ----

struct DatasetArgs {
  int n = 64;
  int resolution = 8;
  std::uint64_t seed = 2026;
  int index = 0;
  std::string out_path;
};

void add_dataset_command(CLI::App& app, DatasetArgs& args) {
  CLI::App* ds = app.add_subcommand("dataset", "synthetic dataset utilities");
  ds->require_subcommand(1);
  CLI::App* synth = ds->add_subcommand(
      "synth", "dump one synthetic image as 1 x d matrix text");
  synth->add_option("--n", args.n, "dataset size")->default_val(64);
  synth->add_option("--resolution", args.resolution, "image side")
      ->default_val(8);
  synth->add_option("--seed", args.seed, "dataset seed")->default_val(2026);
  synth->add_option("--index", args.index, "image index")->required();
  synth->add_option("--out", args.out_path, "output file")->required();
  synth->callback([&args] {
    SeededRng rng(args.seed);
    const auto data = harness::synth_dataset(args.n, args.resolution, rng);
    if (args.index < 0 || static_cast<std::size_t>(args.index) >= data.size()) {
      throw std::runtime_error("index out of range");
    }
    const learner::Example& e = data[static_cast<std::size_t>(args.index)];
    std::ofstream out(args.out_path);
    if (!out) throw std::runtime_error("cannot open " + args.out_path);
    qif::write_matrix(out, 1, e.features.size(), e.features);
    std::cout << "label " << e.label << "\n"
              << "image_file " << args.out_path << "\n";
  });
}

// -------------------------------------------------------------- sweep ----

struct SweepArgs {
  std::string config_path;
  std::string out_dir;
};

void add_sweep_command(CLI::App& app, SweepArgs& args) {
  CLI::App* sweep = app.add_subcommand(
      "sweep", "mechanism/noise sweep: records.csv and Fig-1-style plots");
  sweep->add_option("--config", args.config_path,
                    "JSON config (desk-scale defaults if omitted)");
  sweep->add_option("--out-dir", args.out_dir, "output directory override");
  sweep->callback([&args] {
    harness::ExperimentConfig cfg =
        args.config_path.empty()
            ? harness::ExperimentConfig::desk_default()
            : harness::load_config_file(args.config_path);
    if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;

    const harness::SweepResult result = harness::run_sweep(cfg);
    std::filesystem::create_directories(cfg.output_dir);
    const std::string csv = cfg.output_dir + "/records.csv";
    const std::string fig_eps = cfg.output_dir + "/fig-epsilon.svg";
    const std::string fig_cap = cfg.output_dir + "/fig-capacity.svg";
    harness::emit_csv(result.records, csv);
    if (!result.records.empty()) {
      harness::emit_scatter_svg(result.records, harness::ScatterAxis::epsilon,
                                fig_eps);
      harness::emit_scatter_svg(result.records,
                                harness::ScatterAxis::log_capacity, fig_cap);
    }
    if (!result.failures.empty()) {
      std::ofstream log(cfg.output_dir + "/failures.log");
      for (const harness::SweepFailure& f : result.failures) {
        log << f.mechanism << ' ' << fmt(f.sigma_or_kappa) << ' ' << f.message
            << '\n';
      }
    }
    std::cout << "records " << result.records.size() << "\n"
              << "failures " << result.failures.size() << "\n"
              << "csv " << csv << "\n";
    if (!result.records.empty()) {
      std::cout << "fig_epsilon " << fig_eps << "\n"
                << "fig_capacity " << fig_cap << "\n";
    }
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayes' capacity leakage analysis for DP-SGD mechanisms"};
  app.require_subcommand(1);

  QifArgs qif_args;
  CapacityArgs capacity_args;
  TrainArgs train_args;
  AttackArgs attack_args;
  DatasetArgs dataset_args;
  SweepArgs sweep_args;

  add_qif_commands(app, qif_args);
  add_capacity_commands(app, capacity_args);
  add_train_command(app, train_args);
  add_attack_command(app, attack_args);
  add_dataset_command(app, dataset_args);
  add_sweep_command(app, sweep_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
