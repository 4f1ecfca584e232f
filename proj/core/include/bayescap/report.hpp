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
#ifndef BAYESCAP_REPORT_HPP_
#define BAYESCAP_REPORT_HPP_

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bayescap/sweep.hpp"

namespace bayescap::harness {

// CSV with header
// mechanism,epsilon,sigma_or_kappa,log_bayes_capacity,mse_mean,mse_std,n_seeds
// and >= 9 significant digits per value; round-trips losslessly at the
// printed precision.
void emit_csv(std::span<const ExperimentRecord> records, std::ostream& out);
void emit_csv(std::span<const ExperimentRecord> records,
              const std::string& path);
std::vector<ExperimentRecord> parse_csv(std::istream& in);

enum class ScatterAxis { epsilon, log_capacity };

// Self-contained SVG scatter plot, one glyph style per mechanism, labeled
// axes and a legend.
void emit_scatter_svg(std::span<const ExperimentRecord> records,
                      ScatterAxis x_axis, std::ostream& out);
void emit_scatter_svg(std::span<const ExperimentRecord> records,
                      ScatterAxis x_axis, const std::string& path);

// P2 (text) PGM image, pixel values clamped from [0, 1] to 0..255.
void write_pgm(std::span<const double> pixels, int width, int height,
               std::ostream& out);
void write_pgm(std::span<const double> pixels, int width, int height,
               const std::string& path);

}  // namespace bayescap::harness

#endif  // BAYESCAP_REPORT_HPP_
