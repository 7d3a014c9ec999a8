// asrkit/am.cc

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

#include "asrkit/am.h"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "asrkit/checkpoint.h"
#include "json.hpp"

namespace asrkit {
namespace am {

std::vector<int> FrontendConfig::freq_strides() const {
  // Subsample every other layer at rate 2, starting from the second.
  std::vector<int> strides(filters.size(), 1);
  for (size_t i = 1; i < strides.size(); i += 2) strides[i] = 2;
  return strides;
}

// ---------------------------------------------------------------------------
// TDNN-F layer

TdnnfLayer::TdnnfLayer(int dilation, int in_dim, int width, int bottleneck, double dropout)
    : dilation_(dilation),
      in_dim_(in_dim),
      width_(width),
      bottleneck_(bottleneck),
      dropout_(dropout) {
  if (dilation < 1 || dilation % 3 != 0) {
    throw ConfigError("tdnnf: dilation " + std::to_string(dilation) +
                      " must be a positive multiple of the subsampling rate (3 frames)");
  }
  if (in_dim < 1 || width < 1 || bottleneck < 1) {
    throw ConfigError("tdnnf: widths must be >= 1");
  }
  if (dropout < 0.0 || dropout >= 1.0) {
    throw ConfigError("tdnnf: dropout must lie in [0, 1)");
  }
  fa_w_ = Tensor({2 * in_dim, bottleneck});
  fa_b_ = Tensor({bottleneck});
  fb_w_ = Tensor({2 * bottleneck, width});
  fb_b_ = Tensor({width});
  bn_gamma_ = Tensor::full({width}, 1.0);
  bn_beta_ = Tensor({width});
  bn_mean_ = Tensor({width});
  bn_var_ = Tensor::full({width}, 1.0);
}

void TdnnfLayer::init(Rng &rng) {
  fa_w_ = Tensor::uniform({2 * in_dim_, bottleneck_}, rng, 0.0, 2.0 / (2.0 * in_dim_));
  fb_w_ = Tensor::uniform({2 * bottleneck_, width_}, rng, 0.0, 2.0 / (2.0 * bottleneck_));
  fa_b_.set_zero();
  fb_b_.set_zero();
  bn_gamma_.fill(1.0);
  bn_beta_.set_zero();
  bn_mean_.set_zero();
  bn_var_.fill(1.0);
}

namespace {

Tensor dropout_apply(const Tensor &x, double rate, Mode mode, Rng *rng) {
  if (mode == Mode::kInference || rate == 0.0) return x;
  if (rng == nullptr) throw ConfigError("dropout: train mode needs an rng");
  Tensor y = x;
  const double keep = 1.0 - rate;
  double *p = y.data();
  for (int64_t i = 0; i < y.size(); ++i) {
    p[i] = rng->next_double() < rate ? 0.0 : p[i] / keep;
  }
  return y;
}

}  // namespace

Tensor TdnnfLayer::forward(const Tensor &x, Mode mode, Rng *dropout_rng) const {
  if (x.rank() != 2 || x.dim(1) != in_dim_) {
    throw DimensionError("tdnnf: input " + x.shape_str() + " vs in_dim " +
                         std::to_string(in_dim_));
  }
  Tensor mid = conv1d_ctx(x, {-dilation_, 0}, fa_w_, fa_b_);
  Tensor out = conv1d_ctx(mid, {0, dilation_}, fb_w_, fb_b_);
  if (has_skip()) add_inplace(out, x);
  out = batchnorm_inference(out, bn_gamma_, bn_beta_, bn_mean_, bn_var_, 1e-5);
  return dropout_apply(out, dropout_, mode, dropout_rng);
}

std::vector<std::pair<std::string, Tensor *>> TdnnfLayer::tensors(const std::string &prefix) {
  return {
      {prefix + ".fa_w", &fa_w_},       {prefix + ".fa_b", &fa_b_},
      {prefix + ".fb_w", &fb_w_},       {prefix + ".fb_b", &fb_b_},
      {prefix + ".bn_gamma", &bn_gamma_}, {prefix + ".bn_beta", &bn_beta_},
      {prefix + ".bn_mean", &bn_mean_},   {prefix + ".bn_var", &bn_var_},
  };
}

// ---------------------------------------------------------------------------
// SpecAugment

Tensor spec_augment(const Tensor &feat, const SpecAugmentConfig &config, Rng &rng) {
  if (feat.rank() != 2) throw DimensionError("spec_augment: expected [T,F] features");
  const int T = feat.dim(0), F = feat.dim(1);
  if (config.n_time_masks < 0 || config.n_freq_masks < 0 ||
      config.max_time_width < 0 || config.max_freq_width < 0) {
    throw ConfigError("spec_augment: counts and widths must be >= 0");
  }
  if (config.n_time_masks > 0 && config.max_time_width > T) {
    throw ConfigError("spec_augment: max_time_width " + std::to_string(config.max_time_width) +
                      " exceeds T = " + std::to_string(T));
  }
  if (config.n_freq_masks > 0 && config.max_freq_width > F) {
    throw ConfigError("spec_augment: max_freq_width " + std::to_string(config.max_freq_width) +
                      " exceeds F = " + std::to_string(F));
  }
  Tensor out = feat;
  for (int m = 0; m < config.n_time_masks; ++m) {
    const int width = static_cast<int>(rng.next_below(config.max_time_width + 1));
    const int start = static_cast<int>(rng.next_below(T - width + 1));
    for (int t = start; t < start + width; ++t) {
      double *row = out.row(t);
      for (int f = 0; f < F; ++f) row[f] = 0.0;
    }
  }
  for (int m = 0; m < config.n_freq_masks; ++m) {
    const int width = static_cast<int>(rng.next_below(config.max_freq_width + 1));
    const int start = static_cast<int>(rng.next_below(F - width + 1));
    for (int t = 0; t < T; ++t) {
      double *row = out.row(t);
      for (int f = start; f < start + width; ++f) row[f] = 0.0;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Multistream model

MultistreamModel::MultistreamModel(const ModelConfig &config) : config_(config) {
  if (config_.dilations.empty()) throw ConfigError("multistream: needs at least one stream");
  if (config_.layers_per_stream < 1) throw ConfigError("multistream: layers_per_stream >= 1");

  int stream_in;
  if (config_.frontend.enabled()) {
    if (config_.input_freq_bins < 4) {
      throw ConfigError("frontend: needs F >= 4 for two rate-2 subsamplings, got " +
                        std::to_string(config_.input_freq_bins));
    }
    const auto strides = config_.frontend.freq_strides();
    int c_in = 1;
    int freq = config_.input_freq_bins;
    for (size_t i = 0; i < config_.frontend.filters.size(); ++i) {
      ConvLayer layer;
      layer.kernels = Tensor({3, 3, c_in, config_.frontend.filters[i]});
      layer.bias = Tensor({config_.frontend.filters[i]});
      layer.freq_stride = strides[i];
      frontend_.push_back(std::move(layer));
      c_in = config_.frontend.filters[i];
      freq = (freq + strides[i] - 1) / strides[i];
    }
    frontend_out_dim_ = freq * c_in;
    stream_in = frontend_out_dim_;
  } else {
    frontend_out_dim_ = config_.input_freq_bins;
    stream_in = config_.input_freq_bins;
  }

  for (int r : config_.dilations) {
    std::vector<TdnnfLayer> stack;
    int in_dim = stream_in;
    for (int l = 0; l < config_.layers_per_stream; ++l) {
      stack.emplace_back(r, in_dim, config_.stream_width, config_.bottleneck, config_.dropout);
      in_dim = config_.stream_width;
    }
    streams_.push_back(std::move(stack));
  }

  const int fused = static_cast<int>(config_.dilations.size()) * config_.stream_width;
  fusion_gamma_ = Tensor::full({fused}, 1.0);
  fusion_beta_ = Tensor({fused});
  fusion_mean_ = Tensor({fused});
  fusion_var_ = Tensor::full({fused}, 1.0);
  fc1_w_ = Tensor({fused, config_.head_hidden});
  fc1_b_ = Tensor({config_.head_hidden});
  fc2_w_ = Tensor({config_.head_hidden, config_.output_dim});
  fc2_b_ = Tensor({config_.output_dim});
}

void MultistreamModel::init_params(uint64_t seed) {
  config_.seed = seed;
  Rng rng(seed);
  for (auto &layer : frontend_) {
    const int c_in = layer.kernels.dim(2);
    layer.kernels = Tensor::uniform(layer.kernels.shape(), rng, 0.0, 2.0 / (9.0 * c_in));
    layer.bias.set_zero();
  }
  for (auto &stream : streams_) {
    for (auto &layer : stream) layer.init(rng);
  }
  fusion_gamma_.fill(1.0);
  fusion_beta_.set_zero();
  fusion_mean_.set_zero();
  fusion_var_.fill(1.0);
  fc1_w_ = Tensor::uniform(fc1_w_.shape(), rng, 0.0, 2.0 / fc1_w_.dim(0));
  fc1_b_.set_zero();
  fc2_w_ = Tensor::uniform(fc2_w_.shape(), rng, 0.0, 2.0 / fc2_w_.dim(0));
  fc2_b_.set_zero();
}

Tensor MultistreamModel::frontend_forward(const Tensor &feat) const {
  if (!config_.frontend.enabled()) {
    throw ConfigError("frontend_forward: model has no front-end");
  }
  if (feat.rank() != 2 || feat.dim(1) != config_.input_freq_bins) {
    throw DimensionError("frontend_forward: features " + feat.shape_str() + " vs F = " +
                         std::to_string(config_.input_freq_bins));
  }
  const int T = feat.dim(0);
  Tensor x = Tensor::from({T, feat.dim(1), 1},
                          std::vector<double>(feat.data(), feat.data() + feat.size()));
  for (const auto &layer : frontend_) {
    x = relu(conv2d_3x3(x, layer.kernels, layer.bias, layer.freq_stride));
  }
  // Flatten freq x channels per frame.
  return Tensor::from({T, x.dim(1) * x.dim(2)},
                      std::vector<double>(x.data(), x.data() + x.size()));
}

Tensor MultistreamModel::stream_forward(const Tensor &x, int stream, Mode mode,
                                        Rng *dropout_rng) const {
  if (stream < 0 || stream >= static_cast<int>(streams_.size())) {
    throw UsageError("stream_forward: no stream " + std::to_string(stream));
  }
  Tensor y = x;
  for (const auto &layer : streams_[static_cast<size_t>(stream)]) {
    y = layer.forward(y, mode, dropout_rng);
  }
  return y;
}

Tensor MultistreamModel::forward(const Tensor &feat, Mode mode, Rng *dropout_rng) const {
  Tensor x = config_.frontend.enabled() ? frontend_forward(feat) : feat;
  const int T = x.dim(0);
  const int M = static_cast<int>(streams_.size());
  const int w = config_.stream_width;

  Tensor fused({T, M * w});
  for (int m = 0; m < M; ++m) {
    Tensor y = stream_forward(x, m, mode, dropout_rng);
    for (int t = 0; t < T; ++t) {
      const double *src = y.row(t);
      double *dst = fused.row(t) + m * w;
      for (int i = 0; i < w; ++i) dst[i] = src[i];
    }
  }
  Tensor z = relu(fused);
  z = batchnorm_inference(z, fusion_gamma_, fusion_beta_, fusion_mean_, fusion_var_, 1e-5);
  z = dropout_apply(z, config_.dropout, mode, dropout_rng);

  Tensor h = matmul(z, fc1_w_);
  for (int t = 0; t < T; ++t) {
    double *row = h.row(t);
    for (int i = 0; i < config_.head_hidden; ++i) row[i] += fc1_b_.at(i);
  }
  h = relu(h);
  Tensor logits = matmul(h, fc2_w_);
  for (int t = 0; t < T; ++t) {
    double *row = logits.row(t);
    for (int i = 0; i < config_.output_dim; ++i) row[i] += fc2_b_.at(i);
  }
  return logits;
}

std::vector<std::pair<std::string, Tensor *>> MultistreamModel::tensors() {
  std::vector<std::pair<std::string, Tensor *>> out;
  for (size_t i = 0; i < frontend_.size(); ++i) {
    out.emplace_back("frontend" + std::to_string(i) + ".kernels", &frontend_[i].kernels);
    out.emplace_back("frontend" + std::to_string(i) + ".bias", &frontend_[i].bias);
  }
  for (size_t m = 0; m < streams_.size(); ++m) {
    for (size_t l = 0; l < streams_[m].size(); ++l) {
      const std::string prefix = "stream" + std::to_string(m) + ".layer" + std::to_string(l);
      for (auto &[name, tensor] : streams_[m][l].tensors(prefix)) {
        out.emplace_back(name, tensor);
      }
    }
  }
  out.emplace_back("fusion.bn_gamma", &fusion_gamma_);
  out.emplace_back("fusion.bn_beta", &fusion_beta_);
  out.emplace_back("fusion.bn_mean", &fusion_mean_);
  out.emplace_back("fusion.bn_var", &fusion_var_);
  out.emplace_back("head.fc1_w", &fc1_w_);
  out.emplace_back("head.fc1_b", &fc1_b_);
  out.emplace_back("head.fc2_w", &fc2_w_);
  out.emplace_back("head.fc2_b", &fc2_b_);
  return out;
}

void MultistreamModel::save(const std::string &prefix) const {
  nlohmann::json manifest;
  manifest["format"] = "asrkit-checkpoint-v1";
  manifest["kind"] = "am";
  manifest["input_freq_bins"] = config_.input_freq_bins;
  manifest["frontend_filters"] = config_.frontend.filters;
  manifest["dilations"] = config_.dilations;
  manifest["layers_per_stream"] = config_.layers_per_stream;
  manifest["stream_width"] = config_.stream_width;
  manifest["bottleneck"] = config_.bottleneck;
  manifest["head_hidden"] = config_.head_hidden;
  manifest["output_dim"] = config_.output_dim;
  manifest["dropout"] = config_.dropout;
  manifest["seed"] = config_.seed;

  std::vector<std::pair<std::string, const Tensor *>> tensors;
  auto &self = *const_cast<MultistreamModel *>(this);
  for (auto &[name, tensor] : self.tensors()) tensors.emplace_back(name, tensor);
  checkpoint::write(prefix, std::move(manifest), tensors);
}

MultistreamModel MultistreamModel::load(const std::string &prefix) {
  checkpoint::Loaded loaded = checkpoint::read(prefix);
  const auto &m = loaded.manifest;
  if (!m.contains("kind") || m["kind"] != "am") {
    throw DataError("am checkpoint: wrong kind in " + prefix + ".json");
  }
  ModelConfig config;
  config.input_freq_bins = m.at("input_freq_bins").get<int>();
  config.frontend.filters = m.at("frontend_filters").get<std::vector<int>>();
  config.dilations = m.at("dilations").get<std::vector<int>>();
  config.layers_per_stream = m.at("layers_per_stream").get<int>();
  config.stream_width = m.at("stream_width").get<int>();
  config.bottleneck = m.at("bottleneck").get<int>();
  config.head_hidden = m.at("head_hidden").get<int>();
  config.output_dim = m.at("output_dim").get<int>();
  config.dropout = m.at("dropout").get<double>();
  config.seed = m.at("seed").get<uint64_t>();

  MultistreamModel model(config);
  for (auto &[name, tensor] : model.tensors()) {
    auto it = loaded.tensors.find(name);
    if (it == loaded.tensors.end()) throw DataError("am checkpoint: missing tensor " + name);
    if (!it->second.same_shape(*tensor)) {
      throw DataError("am checkpoint: shape mismatch for " + name);
    }
    *tensor = it->second;
  }
  return model;
}

std::pair<int, int> receptive_field(const ModelConfig &config) {
  if (config.dilations.empty()) throw ConfigError("receptive_field: zero streams");
  int widest = 0;
  for (int r : config.dilations) {
    if (r < 1 || r % 3 != 0) {
      throw ConfigError("receptive_field: dilation " + std::to_string(r) +
                        " must be a positive multiple of the subsampling rate (3 frames)");
    }
    widest = std::max(widest, config.layers_per_stream * r);
  }
  const int frontend = static_cast<int>(config.frontend.filters.size());
  const int span = frontend + widest;
  return {span, span};
}

// ---------------------------------------------------------------------------
// Feature file IO

std::vector<UttFeatures> read_features(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("features: cannot read " + path);
  std::vector<UttFeatures> utts;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("utt") || !j.contains("frames")) {
      throw DataError("features: malformed line " + std::to_string(line_no) + " in " + path);
    }
    UttFeatures u;
    u.utt = j["utt"].get<std::string>();
    const auto &frames = j["frames"];
    const int T = static_cast<int>(frames.size());
    const int F = T > 0 ? static_cast<int>(frames[0].size()) : 0;
    u.frames = Tensor({T, F});
    for (int t = 0; t < T; ++t) {
      if (static_cast<int>(frames[t].size()) != F) {
        throw DataError("features: ragged frame widths for utt " + u.utt);
      }
      for (int f = 0; f < F; ++f) u.frames.at(t, f) = frames[t][f].get<double>();
    }
    utts.push_back(std::move(u));
  }
  return utts;
}

void write_features(const std::string &path, const std::vector<UttFeatures> &utts,
                    const char *field_name) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("features: cannot write " + path);
  for (const auto &u : utts) {
    nlohmann::json frames = nlohmann::json::array();
    for (int t = 0; t < u.frames.dim(0); ++t) {
      nlohmann::json row = nlohmann::json::array();
      for (int f = 0; f < u.frames.dim(1); ++f) row.push_back(u.frames.at(t, f));
      frames.push_back(std::move(row));
    }
    nlohmann::json j;
    j["utt"] = u.utt;
    j[field_name] = std::move(frames);
    out << j.dump() << "\n";
  }
}

}  // namespace am
}  // namespace asrkit
