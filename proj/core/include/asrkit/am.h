// asrkit/am.h

// Copyright 2026  ASRKit Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef ASRKIT_AM_H_
#define ASRKIT_AM_H_

#include <string>
#include <utility>
#include <vector>

#include "asrkit/ops.h"
#include "asrkit/tensor.h"

namespace asrkit {
namespace am {

enum class Mode { kTrain, kInference };

// 2D front-end over log-mel features: 3x3 kernels, ReLU after every layer,
// frequency subsampled by 2 on every other layer starting from the second.
struct FrontendConfig {
  std::vector<int> filters = {128, 256, 256, 256, 256};
  std::vector<int> freq_strides() const;  // {1,2,1,2,...} over filters
  bool enabled() const { return !filters.empty(); }
};

// One factorized TDNN layer: a context conv over {-r, 0} into the bottleneck,
// a second conv over {0, +r} back to full width, then skip + batchnorm +
// dropout.  The skip addition applies when the widths line up (every layer
// except a stream's dimension-changing first one).
class TdnnfLayer {
 public:
  TdnnfLayer(int dilation, int in_dim, int width, int bottleneck, double dropout);

  int dilation() const { return dilation_; }
  int in_dim() const { return in_dim_; }
  int width() const { return width_; }
  bool has_skip() const { return in_dim_ == width_; }

  void init(Rng &rng);
  Tensor forward(const Tensor &x, Mode mode, Rng *dropout_rng) const;

  // Parameter access for checkpoints.
  std::vector<std::pair<std::string, Tensor *>> tensors(const std::string &prefix);

 private:
  int dilation_, in_dim_, width_, bottleneck_;
  double dropout_;
  Tensor fa_w_, fa_b_;  // [2*in_dim, bottleneck], [bottleneck]
  Tensor fb_w_, fb_b_;  // [2*bottleneck, width], [width]
  Tensor bn_gamma_, bn_beta_, bn_mean_, bn_var_;  // [width]
};

struct SpecAugmentConfig {
  int n_time_masks = 2;
  int max_time_width = 20;
  int n_freq_masks = 2;
  int max_freq_width = 8;
};

// Zero-fill masking: each mask's width is uniform in [0, max_width] and its
// start uniform over the valid range; deterministic for a given generator
// state.  Time masks draw before frequency masks.
Tensor spec_augment(const Tensor &feat, const SpecAugmentConfig &config, Rng &rng);

struct ModelConfig {
  int input_freq_bins = 40;
  FrontendConfig frontend;
  std::vector<int> dilations = {6, 9, 12};
  int layers_per_stream = 17;
  int stream_width = 512;
  int bottleneck = 128;
  int head_hidden = 512;
  int output_dim = 512;
  double dropout = 0.0;
  uint64_t seed = 0;
};

// Multistream CNN acoustic model (forward path only): shared 2D front-end,
// parallel TDNN-F stacks with per-stream dilation, concat fusion through
// ReLU + batchnorm + dropout, and a two-layer fully connected head.
class MultistreamModel {
 public:
  explicit MultistreamModel(const ModelConfig &config);

  const ModelConfig &config() const { return config_; }
  int frontend_out_dim() const { return frontend_out_dim_; }

  // Demo initializer: positive uniform weights scaled by fan-in, zero
  // biases, identity batchnorm.  Keeps impulse responses visible end to end.
  void init_params(uint64_t seed);

  // feat is [T, F]; returns the per-frame embedding [T, frontend_out_dim].
  Tensor frontend_forward(const Tensor &feat) const;

  // x is [T, d]; runs stream m's 17 TDNN-F layers.
  Tensor stream_forward(const Tensor &x, int stream, Mode mode, Rng *dropout_rng) const;

  // Full path: front-end, streams, fusion, head -> [T, output_dim].
  Tensor forward(const Tensor &feat, Mode mode = Mode::kInference,
                 Rng *dropout_rng = nullptr) const;

  void save(const std::string &prefix) const;
  static MultistreamModel load(const std::string &prefix);

  std::vector<std::pair<std::string, Tensor *>> tensors();

 private:
  ModelConfig config_;
  int frontend_out_dim_ = 0;
  struct ConvLayer {
    Tensor kernels, bias;  // [3,3,ci,co], [co]
    int freq_stride = 1;
  };
  std::vector<ConvLayer> frontend_;
  std::vector<std::vector<TdnnfLayer>> streams_;
  Tensor fusion_gamma_, fusion_beta_, fusion_mean_, fusion_var_;
  Tensor fc1_w_, fc1_b_, fc2_w_, fc2_b_;
};

// Analytic symmetric receptive field in frames: one frame per front-end
// layer plus the widest stream's layers * dilation.
std::pair<int, int> receptive_field(const ModelConfig &config);

// JSON-lines feature and logit files: {"utt": id, "frames": [[...], ...]}.
struct UttFeatures {
  std::string utt;
  Tensor frames;  // [T, F]
};

std::vector<UttFeatures> read_features(const std::string &path);
void write_features(const std::string &path, const std::vector<UttFeatures> &utts,
                    const char *field_name = "frames");

}  // namespace am
}  // namespace asrkit

#endif  // ASRKIT_AM_H_
