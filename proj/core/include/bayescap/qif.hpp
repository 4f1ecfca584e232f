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
// Discrete quantitative-information-flow engine: channels, priors, gain
// functions, vulnerability, multiplicative leakage, Bayes' capacity and
// channel composition. All values are immutable after construction and all
// operations are pure, so everything here is safe to share across threads.
#ifndef BAYESCAP_QIF_HPP_
#define BAYESCAP_QIF_HPP_

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace bayescap::qif {

// Row sums may deviate from 1 by at most this much; smaller deviations are
// renormalized at construction, larger ones are rejected.
inline constexpr double kRowSumTolerance = 1e-9;

// Row-stochastic matrix from secrets (rows) to observations (columns).
// Invariants: entries in [0, 1], rows sum to 1, no all-zero column.
class Channel {
 public:
  Channel(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static Channel identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t x, std::size_t y) const {
    return entries_[x * cols_ + y];
  }
  const std::vector<double>& entries() const { return entries_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> entries_;
};

// Probability distribution over secrets.
class Prior {
 public:
  explicit Prior(std::vector<double> weights);

  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t x) const { return weights_[x]; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<double> weights_;
};

// Non-negative gain matrix g(w, x) over actions w and secrets x. Every
// secret must admit at least one action with strictly positive gain.
class GainFunction {
 public:
  GainFunction(std::size_t actions, std::size_t secrets,
               std::vector<double> gains);

  std::size_t actions() const { return actions_; }
  std::size_t secrets() const { return secrets_; }
  double operator()(std::size_t w, std::size_t x) const {
    return gains_[w * secrets_ + x];
  }

 private:
  std::size_t actions_;
  std::size_t secrets_;
  std::vector<double> gains_;
};

// Total function from secret index to observation index, surjective onto
// the observation set (as a channel: one 1 per row, no all-zero column).
class DeterministicChannel {
 public:
  DeterministicChannel(std::vector<std::size_t> mapping,
                       std::size_t observations);

  std::size_t secrets() const { return mapping_.size(); }
  std::size_t observations() const { return observations_; }
  std::size_t operator()(std::size_t x) const { return mapping_[x]; }

  Channel to_channel() const;

 private:
  std::vector<std::size_t> mapping_;
  std::size_t observations_;
};

Prior uniform_prior(std::size_t n);
GainFunction identity_gain(std::size_t n);

// Maximum expected gain before observing the channel:
// max_w sum_x pi_x g(w, x).
double v_prior(const Prior& pi, const GainFunction& g);

// Posterior vulnerability: sum_y max_w sum_x pi_x M_{x,y} g(w, x).
double v_post(const Prior& pi, const GainFunction& g, const Channel& m);

// Multiplicative leakage v_post / v_prior; requires v_prior > 0.
double mult_leakage(const Prior& pi, const GainFunction& g, const Channel& m);

// Bayes' capacity of a discrete channel, reported in three scales.
struct CapacityReport {
  double value;    // sum over columns of the column maximum
  double nat_log;  // ln(value)
  double bits;     // log2(value); Sibson mutual information of order infinity
};
CapacityReport bayes_capacity_discrete(const Channel& m);

// Matrix product C.D viewed as sequential composition.
Channel compose(const Channel& c, const Channel& d);
Channel compose(const DeterministicChannel& c, const Channel& d);

// Text format shared by channels, priors and gain matrices: a header line
// "rows cols" followed by row-major whitespace-separated decimals. A prior
// is a 1 x n matrix.
Channel read_channel(std::istream& in);
Prior read_prior(std::istream& in);
GainFunction read_gain(std::istream& in);
void write_matrix(std::ostream& out, std::size_t rows, std::size_t cols,
                  const std::vector<double>& entries);

}  // namespace bayescap::qif

#endif  // BAYESCAP_QIF_HPP_
