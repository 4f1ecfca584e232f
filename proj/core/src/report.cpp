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
#include "bayescap/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace bayescap::harness {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::ofstream open_out(const std::string& path, const char* what) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error(std::string(what) + ": cannot open " + path);
  }
  return out;
}

struct AxisScale {
  double lo;
  double hi;
  bool log10;

  double to_unit(double v) const {
    const double x = log10 ? std::log10(v) : v;
    const double a = log10 ? std::log10(lo) : lo;
    const double b = log10 ? std::log10(hi) : hi;
    return b > a ? (x - a) / (b - a) : 0.5;
  }
};

AxisScale make_scale(std::vector<double> values, bool prefer_log) {
  double lo = *std::min_element(values.begin(), values.end());
  double hi = *std::max_element(values.begin(), values.end());
  const bool log10 = prefer_log && lo > 0.0 && hi / lo > 20.0;
  if (lo == hi) {
    // A single point: pad the range so the marker sits mid-axis.
    lo = log10 ? lo / 2.0 : lo - 1.0;
    hi = log10 ? hi * 2.0 : hi + 1.0;
  }
  return {lo, hi, log10};
}

}  // namespace

void emit_csv(std::span<const ExperimentRecord> records, std::ostream& out) {
  out << "mechanism,epsilon,sigma_or_kappa,log_bayes_capacity,mse_mean,"
         "mse_std,n_seeds\n";
  for (const ExperimentRecord& r : records) {
    out << r.mechanism << ',' << fmt(r.epsilon) << ',' << fmt(r.sigma_or_kappa)
        << ',' << fmt(r.log_bayes_capacity) << ',' << fmt(r.mse_mean) << ','
        << fmt(r.mse_std) << ',' << r.n_seeds << '\n';
  }
}

void emit_csv(std::span<const ExperimentRecord> records,
              const std::string& path) {
  auto out = open_out(path, "emit_csv");
  emit_csv(records, out);
}

std::vector<ExperimentRecord> parse_csv(std::istream& in) {
  std::vector<ExperimentRecord> records;
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("parse_csv: missing header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() != 7) {
      throw std::runtime_error("parse_csv: expected 7 columns, got " +
                               std::to_string(fields.size()));
    }
    ExperimentRecord r;
    r.mechanism = fields[0];
    r.epsilon = std::stod(fields[1]);
    r.sigma_or_kappa = std::stod(fields[2]);
    r.log_bayes_capacity = std::stod(fields[3]);
    r.mse_mean = std::stod(fields[4]);
    r.mse_std = std::stod(fields[5]);
    r.n_seeds = std::stoi(fields[6]);
    records.push_back(std::move(r));
  }
  return records;
}

void emit_scatter_svg(std::span<const ExperimentRecord> records,
                      ScatterAxis x_axis, std::ostream& out) {
  if (records.empty()) {
    throw std::invalid_argument("emit_scatter_svg: need at least one record");
  }
  constexpr int kWidth = 720;
  constexpr int kHeight = 480;
  constexpr double kLeft = 80.0;
  constexpr double kRight = 40.0;
  constexpr double kTop = 40.0;
  constexpr double kBottom = 64.0;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  std::vector<double> xs;
  std::vector<double> ys;
  for (const ExperimentRecord& r : records) {
    xs.push_back(x_axis == ScatterAxis::epsilon ? r.epsilon
                                                : r.log_bayes_capacity);
    ys.push_back(r.mse_mean);
  }
  const AxisScale sx = make_scale(xs, x_axis == ScatterAxis::epsilon);
  const AxisScale sy = make_scale(ys, false);

  auto px = [&](double v) { return kLeft + sx.to_unit(v) * plot_w; };
  auto py = [&](double v) { return kTop + (1.0 - sy.to_unit(v)) * plot_h; };

  const std::string x_label =
      x_axis == ScatterAxis::epsilon
          ? (sx.log10 ? "epsilon (log scale)" : "epsilon")
          : "log Bayes' capacity (nats)";

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n"
      << "  <rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" fill=\"white\"/>\n";

  // Axes.
  out << "  <line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\""
      << kLeft + plot_w << "\" y2=\"" << kTop + plot_h
      << "\" stroke=\"black\"/>\n"
      << "  <line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
      << "\" y2=\"" << kTop + plot_h << "\" stroke=\"black\"/>\n";

  // Ticks: five per axis, value labels in the data scale.
  for (int i = 0; i <= 4; ++i) {
    const double f = i / 4.0;
    const double xv =
        sx.log10 ? std::pow(10.0, std::log10(sx.lo) +
                                      f * (std::log10(sx.hi) - std::log10(sx.lo)))
                 : sx.lo + f * (sx.hi - sx.lo);
    const double yv = sy.lo + f * (sy.hi - sy.lo);
    const double xpx = kLeft + f * plot_w;
    const double ypx = kTop + (1.0 - f) * plot_h;
    out << "  <line x1=\"" << xpx << "\" y1=\"" << kTop + plot_h << "\" x2=\""
        << xpx << "\" y2=\"" << kTop + plot_h + 5 << "\" stroke=\"black\"/>\n"
        << "  <text x=\"" << xpx << "\" y=\"" << kTop + plot_h + 20
        << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt(xv)
        << "</text>\n"
        << "  <line x1=\"" << kLeft - 5 << "\" y1=\"" << ypx << "\" x2=\""
        << kLeft << "\" y2=\"" << ypx << "\" stroke=\"black\"/>\n"
        << "  <text x=\"" << kLeft - 8 << "\" y=\"" << ypx + 4
        << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(yv)
        << "</text>\n";
  }
  out << "  <text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 16
      << "\" font-size=\"14\" text-anchor=\"middle\">" << x_label
      << "</text>\n"
      << "  <text x=\"18\" y=\"" << kTop + plot_h / 2
      << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 "
         "18 "
      << kTop + plot_h / 2 << ")\">attack MSE</text>\n";

  // Markers: circles for the Gaussian mechanism, triangles for VMF.
  for (std::size_t i = 0; i < records.size(); ++i) {
    const ExperimentRecord& r = records[i];
    const double cx = px(xs[i]);
    const double cy = py(ys[i]);
    if (r.mechanism == "vmf") {
      out << "  <polygon points=\"" << cx << "," << cy - 6 << " " << cx - 5.5
          << "," << cy + 4.5 << " " << cx + 5.5 << "," << cy + 4.5
          << "\" fill=\"#d62728\" fill-opacity=\"0.85\"/>\n";
    } else {
      out << "  <circle cx=\"" << cx << "\" cy=\"" << cy
          << "\" r=\"5\" fill=\"#1f77b4\" fill-opacity=\"0.85\"/>\n";
    }
  }

  // Legend, one entry per mechanism present.
  bool has_gaussian = false;
  bool has_vmf = false;
  for (const ExperimentRecord& r : records) {
    has_gaussian |= r.mechanism == "gaussian";
    has_vmf |= r.mechanism == "vmf";
  }
  double legend_y = kTop + 8;
  const double legend_x = kLeft + plot_w - 120;
  if (has_gaussian) {
    out << "  <circle cx=\"" << legend_x << "\" cy=\"" << legend_y
        << "\" r=\"5\" fill=\"#1f77b4\"/>\n"
        << "  <text x=\"" << legend_x + 12 << "\" y=\"" << legend_y + 4
        << "\" font-size=\"12\">gaussian</text>\n";
    legend_y += 18;
  }
  if (has_vmf) {
    out << "  <polygon points=\"" << legend_x << "," << legend_y - 6 << " "
        << legend_x - 5.5 << "," << legend_y + 4.5 << " " << legend_x + 5.5
        << "," << legend_y + 4.5 << "\" fill=\"#d62728\"/>\n"
        << "  <text x=\"" << legend_x + 12 << "\" y=\"" << legend_y + 4
        << "\" font-size=\"12\">vmf</text>\n";
  }
  out << "</svg>\n";
}

void emit_scatter_svg(std::span<const ExperimentRecord> records,
                      ScatterAxis x_axis, const std::string& path) {
  auto out = open_out(path, "emit_scatter_svg");
  emit_scatter_svg(records, x_axis, out);
}

void write_pgm(std::span<const double> pixels, int width, int height,
               std::ostream& out) {
  if (static_cast<std::size_t>(width) * height != pixels.size()) {
    throw std::invalid_argument("write_pgm: size mismatch");
  }
  out << "P2\n" << width << ' ' << height << "\n255\n";
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const double v = std::clamp(pixels[static_cast<std::size_t>(r) * width + c],
                                  0.0, 1.0);
      out << static_cast<int>(std::lround(v * 255.0))
          << (c + 1 == width ? '\n' : ' ');
    }
  }
}

void write_pgm(std::span<const double> pixels, int width, int height,
               const std::string& path) {
  auto out = open_out(path, "write_pgm");
  write_pgm(pixels, width, height, out);
}

}  // namespace bayescap::harness
