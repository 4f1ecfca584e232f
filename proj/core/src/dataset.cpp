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
#include "bayescap/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>

namespace bayescap::harness {

namespace {

using learner::Example;

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::uint32_t read_u32_be(std::istream& in, const char* what) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) {
    throw std::runtime_error(std::string(what) + ": truncated IDX header");
  }
  return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
         (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
}

std::string hex(std::uint32_t v) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "0x%08x", v);
  return buf;
}

std::ifstream open_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("load_idx: cannot open " + path);
  }
  return in;
}

// Box-average by `factor` in each direction; trailing rows/cols that do not
// fill a full box are dropped.
Vector downsample_box(const Vector& img, int side, int factor, int* out_side) {
  const int new_side = side / factor;
  *out_side = new_side;
  Vector out(static_cast<std::size_t>(new_side) * new_side, 0.0);
  const double inv = 1.0 / (factor * factor);
  for (int r = 0; r < new_side; ++r) {
    for (int c = 0; c < new_side; ++c) {
      double acc = 0.0;
      for (int dr = 0; dr < factor; ++dr) {
        for (int dc = 0; dc < factor; ++dc) {
          acc += img[static_cast<std::size_t>(r * factor + dr) * side +
                     (c * factor + dc)];
        }
      }
      out[static_cast<std::size_t>(r) * new_side + c] = acc * inv;
    }
  }
  return out;
}

Vector center_crop(const Vector& img, int side, int crop) {
  const int off = (side - crop) / 2;
  Vector out(static_cast<std::size_t>(crop) * crop);
  for (int r = 0; r < crop; ++r) {
    for (int c = 0; c < crop; ++c) {
      out[static_cast<std::size_t>(r) * crop + c] =
          img[static_cast<std::size_t>(r + off) * side + (c + off)];
    }
  }
  return out;
}

}  // namespace

std::vector<Example> load_idx(const std::string& images_path,
                              const std::string& labels_path,
                              const IdxLoadOptions& options) {
  if (options.downsample != 1 && options.downsample != 2 &&
      options.downsample != 4) {
    throw std::invalid_argument("load_idx: downsample must be 1, 2 or 4");
  }

  std::ifstream imgs = open_binary(images_path);
  const std::uint32_t img_magic = read_u32_be(imgs, "load_idx(images)");
  if (img_magic != kImageMagic) {
    throw std::runtime_error("load_idx: image magic is " + hex(img_magic) +
                             ", expected " + hex(kImageMagic));
  }
  const std::uint32_t img_count = read_u32_be(imgs, "load_idx(images)");
  const std::uint32_t rows = read_u32_be(imgs, "load_idx(images)");
  const std::uint32_t cols = read_u32_be(imgs, "load_idx(images)");

  std::ifstream labels = open_binary(labels_path);
  const std::uint32_t lbl_magic = read_u32_be(labels, "load_idx(labels)");
  if (lbl_magic != kLabelMagic) {
    throw std::runtime_error("load_idx: label magic is " + hex(lbl_magic) +
                             ", expected " + hex(kLabelMagic));
  }
  const std::uint32_t lbl_count = read_u32_be(labels, "load_idx(labels)");
  if (img_count != lbl_count) {
    throw std::runtime_error(
        "load_idx: image count " + std::to_string(img_count) +
        " does not match label count " + std::to_string(lbl_count));
  }
  if (rows != cols) {
    throw std::runtime_error("load_idx: only square images are supported");
  }

  const int side = static_cast<int>(rows);
  const int down_side = side / options.downsample;
  if (options.center_crop < 0 || options.center_crop > down_side) {
    throw std::invalid_argument(
        "load_idx: center_crop must lie in [0, downsampled side]");
  }

  std::vector<Example> out;
  out.reserve(img_count);
  std::vector<unsigned char> raw(static_cast<std::size_t>(side) * side);
  for (std::uint32_t i = 0; i < img_count; ++i) {
    if (!imgs.read(reinterpret_cast<char*>(raw.data()),
                   static_cast<std::streamsize>(raw.size()))) {
      throw std::runtime_error("load_idx: truncated image data at image " +
                               std::to_string(i));
    }
    Vector img(raw.size());
    for (std::size_t j = 0; j < raw.size(); ++j) img[j] = raw[j] / 255.0;

    int cur_side = side;
    if (options.downsample > 1) {
      img = downsample_box(img, side, options.downsample, &cur_side);
    }
    if (options.center_crop > 0 && options.center_crop < cur_side) {
      img = center_crop(img, cur_side, options.center_crop);
    }

    char lbl = 0;
    if (!labels.read(&lbl, 1)) {
      throw std::runtime_error("load_idx: truncated label data at image " +
                               std::to_string(i));
    }
    out.push_back(Example{std::move(img), static_cast<unsigned char>(lbl)});
  }
  return out;
}

std::vector<Example> synth_dataset(int n, int resolution, SeededRng& rng) {
  if (n < 1) throw std::invalid_argument("synth_dataset: n must be >= 1");
  if (resolution < 4) {
    throw std::invalid_argument("synth_dataset: resolution must be >= 4");
  }
  const int s = resolution;
  std::vector<Example> out;
  out.reserve(static_cast<std::size_t>(n));

  for (int idx = 0; idx < n; ++idx) {
    const int cls = idx % 10;
    const double fg = 0.75 + 0.2 * rng.uniform();
    const double bg = 0.05 + 0.1 * rng.uniform();
    const int jitter = static_cast<int>(rng.below(3)) - 1;
    const int mid = std::clamp(s / 2 + jitter, 1, s - 2);
    const int band = std::max(1, s / 4);

    Vector img(static_cast<std::size_t>(s) * s, bg);
    auto at = [&](int r, int c) -> double& {
      return img[static_cast<std::size_t>(r) * s + c];
    };
    for (int r = 0; r < s; ++r) {
      for (int c = 0; c < s; ++c) {
        bool on = false;
        switch (cls) {
          case 0: on = std::abs(r - mid) < band / 2 + 1; break;   // horizontal bar
          case 1: on = std::abs(c - mid) < band / 2 + 1; break;   // vertical bar
          case 2: on = std::abs(r - c) <= 1; break;               // diagonal
          case 3: on = std::abs(r + c - (s - 1)) <= 1; break;     // anti-diagonal
          case 4:
            on = std::abs(r - mid) <= band && std::abs(c - mid) <= band;
            break;                                                // filled block
          case 5:
            on = (r == 1 || r == s - 2 || c == 1 || c == s - 2) && r >= 1 &&
                 r <= s - 2 && c >= 1 && c <= s - 2;
            break;                                                // frame
          case 6: {
            const double dr = r - (s - 1) / 2.0;
            const double dc = c - (s - 1) / 2.0;
            on = dr * dr + dc * dc <= band * band + 1;
            break;                                                // disk
          }
          case 7: on = ((r / 2 + c / 2 + (jitter & 1)) % 2) == 0; break;  // checker
          case 8: on = r == mid || c == mid; break;               // plus
          case 9: on = std::abs(r - c) <= 0 || std::abs(r + c - (s - 1)) <= 0;
            break;                                                // X
        }
        if (on) at(r, c) = fg;
      }
    }
    // Light pixel noise keeps gradients distinct across examples.
    for (double& v : img) {
      v = std::clamp(v + 0.02 * (2.0 * rng.uniform() - 1.0), 0.0, 1.0);
    }
    out.push_back(Example{std::move(img), cls});
  }
  return out;
}

}  // namespace bayescap::harness
