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
#ifndef BAYESCAP_DATASET_HPP_
#define BAYESCAP_DATASET_HPP_

#include <string>
#include <vector>

#include "bayescap/mlp.hpp"
#include "bayescap/rng.hpp"

namespace bayescap::harness {

struct IdxLoadOptions {
  int downsample = 1;   // box-average factor: 1, 2 (28->14) or 4 (28->7)
  int center_crop = 0;  // crop the downsampled image to k x k; 0 = keep
};

// Big-endian IDX container: image file magic 0x00000803 then u32 count,
// rows, cols, then unsigned bytes row-major; label file magic 0x00000801
// then u32 count then bytes. Pixels are scaled to [0, 1].
std::vector<learner::Example> load_idx(const std::string& images_path,
                                       const std::string& labels_path,
                                       const IdxLoadOptions& options = {});

// Seeded images of simple geometric patterns, one pattern family per class,
// 10 classes, pixels in [0, 1]. Offline-friendly stand-in for image files.
std::vector<learner::Example> synth_dataset(int n, int resolution,
                                            SeededRng& rng);

}  // namespace bayescap::harness

#endif  // BAYESCAP_DATASET_HPP_
