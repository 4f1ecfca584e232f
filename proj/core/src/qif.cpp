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
#include "bayescap/qif.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

namespace bayescap::qif {

namespace {

void check_probability_entries(const std::vector<double>& entries,
                               const char* what) {
  for (double e : entries) {
    if (!std::isfinite(e) || e < 0.0 || e > 1.0 + kRowSumTolerance) {
      throw std::invalid_argument(std::string(what) +
                                  ": entries must lie in [0, 1], got " +
                                  std::to_string(e));
    }
  }
}

std::vector<double> read_values(std::istream& in, std::size_t count,
                                const char* what) {
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (!(in >> values[i])) {
      throw std::runtime_error(std::string(what) +
                               ": truncated input, expected " +
                               std::to_string(count) + " values");
    }
  }
  return values;
}

std::pair<std::size_t, std::size_t> read_header(std::istream& in,
                                                const char* what) {
  long long rows = 0;
  long long cols = 0;
  if (!(in >> rows >> cols) || rows <= 0 || cols <= 0) {
    throw std::runtime_error(std::string(what) +
                             ": header must be two positive counts");
  }
  return {static_cast<std::size_t>(rows), static_cast<std::size_t>(cols)};
}

}  // namespace

Channel::Channel(std::size_t rows, std::size_t cols,
                 std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows_ == 0 || cols_ == 0) {
    throw std::invalid_argument("Channel: dimensions must be positive");
  }
  if (entries_.size() != rows_ * cols_) {
    throw std::invalid_argument("Channel: entry count does not match shape");
  }
  check_probability_entries(entries_, "Channel");
  for (std::size_t x = 0; x < rows_; ++x) {
    double sum = 0.0;
    for (std::size_t y = 0; y < cols_; ++y) sum += entries_[x * cols_ + y];
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      throw std::invalid_argument("Channel: row " + std::to_string(x) +
                                  " sums to " + std::to_string(sum));
    }
    if (sum != 1.0) {
      for (std::size_t y = 0; y < cols_; ++y) entries_[x * cols_ + y] /= sum;
    }
  }
  for (std::size_t y = 0; y < cols_; ++y) {
    bool nonzero = false;
    for (std::size_t x = 0; x < rows_ && !nonzero; ++x) {
      nonzero = entries_[x * cols_ + y] > 0.0;
    }
    if (!nonzero) {
      throw std::invalid_argument("Channel: column " + std::to_string(y) +
                                  " is all zeros");
    }
  }
}

Channel Channel::identity(std::size_t n) {
  if (n == 0) throw std::invalid_argument("Channel::identity: n must be >= 1");
  std::vector<double> e(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1.0;
  return Channel(n, n, std::move(e));
}

Prior::Prior(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) {
    throw std::invalid_argument("Prior: must have at least one entry");
  }
  double sum = 0.0;
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0) {
      throw std::invalid_argument("Prior: entries must be non-negative");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > kRowSumTolerance) {
    throw std::invalid_argument("Prior: weights sum to " +
                                std::to_string(sum));
  }
  if (sum != 1.0) {
    for (double& w : weights_) w /= sum;
  }
}

GainFunction::GainFunction(std::size_t actions, std::size_t secrets,
                           std::vector<double> gains)
    : actions_(actions), secrets_(secrets), gains_(std::move(gains)) {
  if (actions_ == 0 || secrets_ == 0) {
    throw std::invalid_argument("GainFunction: dimensions must be positive");
  }
  if (gains_.size() != actions_ * secrets_) {
    throw std::invalid_argument(
        "GainFunction: entry count does not match shape");
  }
  for (double g : gains_) {
    if (!std::isfinite(g) || g < 0.0) {
      throw std::invalid_argument("GainFunction: gains must be >= 0");
    }
  }
  for (std::size_t x = 0; x < secrets_; ++x) {
    bool positive = false;
    for (std::size_t w = 0; w < actions_ && !positive; ++w) {
      positive = gains_[w * secrets_ + x] > 0.0;
    }
    if (!positive) {
      throw std::invalid_argument(
          "GainFunction: secret " + std::to_string(x) +
          " has no action with positive gain");
    }
  }
}

DeterministicChannel::DeterministicChannel(std::vector<std::size_t> mapping,
                                           std::size_t observations)
    : mapping_(std::move(mapping)), observations_(observations) {
  if (mapping_.empty() || observations_ == 0) {
    throw std::invalid_argument(
        "DeterministicChannel: dimensions must be positive");
  }
  std::vector<bool> hit(observations_, false);
  for (std::size_t y : mapping_) {
    if (y >= observations_) {
      throw std::invalid_argument(
          "DeterministicChannel: mapping target out of range");
    }
    hit[y] = true;
  }
  if (!std::all_of(hit.begin(), hit.end(), [](bool b) { return b; })) {
    throw std::invalid_argument(
        "DeterministicChannel: mapping must be surjective onto the "
        "observation set");
  }
}

Channel DeterministicChannel::to_channel() const {
  std::vector<double> e(secrets() * observations_, 0.0);
  for (std::size_t x = 0; x < secrets(); ++x) {
    e[x * observations_ + mapping_[x]] = 1.0;
  }
  return Channel(secrets(), observations_, std::move(e));
}

Prior uniform_prior(std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform_prior: n must be >= 1");
  return Prior(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

GainFunction identity_gain(std::size_t n) {
  if (n == 0) throw std::invalid_argument("identity_gain: n must be >= 1");
  std::vector<double> g(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) g[i * n + i] = 1.0;
  return GainFunction(n, n, std::move(g));
}

double v_prior(const Prior& pi, const GainFunction& g) {
  if (pi.size() != g.secrets()) {
    throw std::invalid_argument("v_prior: prior/gain dimension mismatch");
  }
  double best = 0.0;
  for (std::size_t w = 0; w < g.actions(); ++w) {
    double expected = 0.0;
    for (std::size_t x = 0; x < g.secrets(); ++x) {
      expected += pi[x] * g(w, x);
    }
    best = std::max(best, expected);
  }
  return best;
}

double v_post(const Prior& pi, const GainFunction& g, const Channel& m) {
  if (pi.size() != g.secrets() || pi.size() != m.rows()) {
    throw std::invalid_argument("v_post: dimension mismatch");
  }
  double total = 0.0;
  for (std::size_t y = 0; y < m.cols(); ++y) {
    double best = 0.0;
    for (std::size_t w = 0; w < g.actions(); ++w) {
      double expected = 0.0;
      for (std::size_t x = 0; x < m.rows(); ++x) {
        expected += pi[x] * m(x, y) * g(w, x);
      }
      best = std::max(best, expected);
    }
    total += best;
  }
  return total;
}

double mult_leakage(const Prior& pi, const GainFunction& g, const Channel& m) {
  const double prior = v_prior(pi, g);
  if (prior <= 0.0) {
    throw std::domain_error("mult_leakage: v_prior is zero");
  }
  return v_post(pi, g, m) / prior;
}

CapacityReport bayes_capacity_discrete(const Channel& m) {
  double total = 0.0;
  for (std::size_t y = 0; y < m.cols(); ++y) {
    double best = 0.0;
    for (std::size_t x = 0; x < m.rows(); ++x) {
      best = std::max(best, m(x, y));
    }
    total += best;
  }
  const double nat = std::log(total);
  return {total, nat, nat / std::numbers::ln2};
}

Channel compose(const Channel& c, const Channel& d) {
  if (c.cols() != d.rows()) {
    throw std::invalid_argument("compose: cols(C) must equal rows(D)");
  }
  std::vector<double> e(c.rows() * d.cols(), 0.0);
  for (std::size_t x = 0; x < c.rows(); ++x) {
    for (std::size_t k = 0; k < c.cols(); ++k) {
      const double cxk = c(x, k);
      if (cxk == 0.0) continue;
      for (std::size_t y = 0; y < d.cols(); ++y) {
        e[x * d.cols() + y] += cxk * d(k, y);
      }
    }
  }
  return Channel(c.rows(), d.cols(), std::move(e));
}

Channel compose(const DeterministicChannel& c, const Channel& d) {
  if (c.observations() != d.rows()) {
    throw std::invalid_argument("compose: cols(C) must equal rows(D)");
  }
  // Row x of C.D is exactly row C(x) of D; no arithmetic involved.
  std::vector<double> e(c.secrets() * d.cols());
  for (std::size_t x = 0; x < c.secrets(); ++x) {
    const std::size_t k = c(x);
    for (std::size_t y = 0; y < d.cols(); ++y) {
      e[x * d.cols() + y] = d(k, y);
    }
  }
  return Channel(c.secrets(), d.cols(), std::move(e));
}

Channel read_channel(std::istream& in) {
  const auto [rows, cols] = read_header(in, "read_channel");
  return Channel(rows, cols, read_values(in, rows * cols, "read_channel"));
}

Prior read_prior(std::istream& in) {
  const auto [rows, cols] = read_header(in, "read_prior");
  if (rows != 1) {
    throw std::runtime_error("read_prior: a prior is a 1 x n matrix");
  }
  return Prior(read_values(in, cols, "read_prior"));
}

GainFunction read_gain(std::istream& in) {
  const auto [rows, cols] = read_header(in, "read_gain");
  return GainFunction(rows, cols, read_values(in, rows * cols, "read_gain"));
}

void write_matrix(std::ostream& out, std::size_t rows, std::size_t cols,
                  const std::vector<double>& entries) {
  if (entries.size() != rows * cols) {
    throw std::invalid_argument("write_matrix: entry count mismatch");
  }
  out << rows << ' ' << cols << '\n';
  char buf[40];
  for (std::size_t x = 0; x < rows; ++x) {
    for (std::size_t y = 0; y < cols; ++y) {
      std::snprintf(buf, sizeof(buf), "%.17g", entries[x * cols + y]);
      out << buf << (y + 1 == cols ? '\n' : ' ');
    }
  }
}

}  // namespace bayescap::qif
