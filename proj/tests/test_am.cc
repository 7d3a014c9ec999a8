// tests/test_am.cc

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

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <cstring>

#include "asrkit/am.h"

namespace asrkit {
namespace am {
namespace {

// Geometry-preserving small model: default depths and dilations, slim widths.
ModelConfig slim_default_config() {
  ModelConfig config;
  config.input_freq_bins = 40;
  config.frontend.filters = {4, 4, 4, 4, 4};
  config.dilations = {6, 9, 12};
  config.layers_per_stream = 17;
  config.stream_width = 16;
  config.bottleneck = 8;
  config.head_hidden = 8;
  config.output_dim = 4;
  return config;
}

ModelConfig stream_only_config(int dilation, int width = 16) {
  ModelConfig config;
  config.input_freq_bins = width;  // features feed the stream directly
  config.frontend.filters.clear();
  config.dilations = {dilation};
  config.layers_per_stream = 17;
  config.stream_width = width;
  config.bottleneck = 8;
  config.head_hidden = 8;
  config.output_dim = 4;
  return config;
}

// Measured support interval of the impulse response: the model runs on an
// all-zero input and on the same input with one nonzero frame; the interval
// hull of frames whose outputs differ (bitwise) is returned as offsets
// relative to the impulse.
std::pair<int, int> measure_impulse_support(const MultistreamModel &model, int T, int t0) {
  const int F = model.config().input_freq_bins;
  Tensor zeros({T, F});
  Tensor impulse({T, F});
  for (int f = 0; f < F; ++f) impulse.at(t0, f) = 1.0;
  Tensor base = model.forward(zeros);
  Tensor probe = model.forward(impulse);
  int lo = -1, hi = -1;
  for (int t = 0; t < T; ++t) {
    const bool differs = std::memcmp(base.row(t), probe.row(t),
                                     sizeof(double) * static_cast<size_t>(base.dim(1))) != 0;
    if (differs) {
      if (lo < 0) lo = t;
      hi = t;
    }
  }
  EXPECT_GE(lo, 0) << "impulse left no trace";
  return {t0 - lo, hi - t0};
}

TEST(Frontend, DefaultShapeChain) {
  // 40 -> 40 -> 20 -> 20 -> 10 frequency bins; width 10 * 256 = 2560.
  ModelConfig config;  // stock widths
  MultistreamModel model(config);
  EXPECT_EQ(model.frontend_out_dim(), 2560);
}

TEST(Frontend, ZeroWeightsAnnihilate) {
  ModelConfig config = slim_default_config();
  MultistreamModel model(config);  // weights default to zero
  Tensor feat({9, 40});
  for (int i = 0; i < feat.size(); ++i) feat.at(i) = 1.0;
  Tensor x = model.frontend_forward(feat);
  EXPECT_EQ(x.dim(0), 9);  // time extent preserved
  EXPECT_EQ(x.dim(1), model.frontend_out_dim());
  for (int i = 0; i < x.size(); ++i) EXPECT_EQ(x.at(i), 0.0);
}

TEST(Frontend, RejectsNarrowFeatures) {
  ModelConfig config = slim_default_config();
  config.input_freq_bins = 3;
  EXPECT_THROW(MultistreamModel{config}, ConfigError);
}

TEST(Tdnnf, DilationValidation) {
  for (int r : {1, 2, 4, 5, 7}) {
    EXPECT_THROW(TdnnfLayer(r, 16, 16, 8, 0.0), ConfigError) << "r = " << r;
  }
  for (int r : {3, 6, 9, 12}) {
    EXPECT_NO_THROW(TdnnfLayer(r, 16, 16, 8, 0.0)) << "r = " << r;
  }
}

TEST(Tdnnf, SkipIdentityWhenFactorsAreZero) {
  TdnnfLayer layer(6, 8, 8, 4, 0.0);  // zero factors, identity-ish BN
  Rng rng(3);
  Tensor x = Tensor::uniform({10, 8}, rng, -1.0, 1.0);
  Tensor y = layer.forward(x, Mode::kInference, nullptr);
  for (int i = 0; i < y.size(); ++i) {
    EXPECT_NEAR(y.at(i), x.at(i), 1e-4);  // BN eps shrinks by 1/sqrt(1+eps)
  }
}

TEST(Tdnnf, ImpulseSupportIsPlusMinusDilation) {
  TdnnfLayer layer(6, 8, 8, 4, 0.0);
  Rng rng(7);
  layer.init(rng);
  const int T = 20, t0 = 9;
  Tensor zeros({T, 8});
  Tensor x({T, 8});
  for (int j = 0; j < 8; ++j) x.at(t0, j) = 1.0;
  Tensor base = layer.forward(zeros, Mode::kInference, nullptr);
  Tensor y = layer.forward(x, Mode::kInference, nullptr);
  for (int t = 0; t < T; ++t) {
    const bool differs =
        std::memcmp(base.row(t), y.row(t), sizeof(double) * 8) != 0;
    const bool expected = (t == t0 - 6 || t == t0 || t == t0 + 6);
    EXPECT_EQ(differs, expected) << "frame " << t;
  }
}

TEST(Stream, ImpulseSupportMatchesSeventeenLayers) {
  // 17 layers at r = 6: support hull +-102 around the impulse.
  ModelConfig config = stream_only_config(6);
  MultistreamModel model(config);
  model.init_params(11);
  const int T = 2 * 102 + 21, t0 = T / 2;
  Tensor x({T, config.input_freq_bins});
  for (int f = 0; f < config.input_freq_bins; ++f) x.at(t0, f) = 1.0;
  Tensor zeros({T, config.input_freq_bins});
  Tensor ys = model.stream_forward(model.config().frontend.enabled()
                                       ? model.frontend_forward(x)
                                       : x,
                                   0, Mode::kInference, nullptr);
  Tensor yb = model.stream_forward(zeros, 0, Mode::kInference, nullptr);
  int lo = -1, hi = -1;
  for (int t = 0; t < T; ++t) {
    if (std::memcmp(ys.row(t), yb.row(t), sizeof(double) * 16) != 0) {
      if (lo < 0) lo = t;
      hi = t;
    }
  }
  EXPECT_EQ(t0 - lo, 102);
  EXPECT_EQ(hi - t0, 102);
}

TEST(Multistream, FusionWidthAndDegenerateSingleStream) {
  ModelConfig config = slim_default_config();
  MultistreamModel model(config);
  // Fusion consumes M * width; at stock widths that is 3 * 512 = 1536.
  ModelConfig stock;
  EXPECT_EQ(static_cast<int>(stock.dilations.size()) * stock.stream_width, 1536);

  ModelConfig single = stream_only_config(6);
  MultistreamModel m1(single);
  m1.init_params(5);
  Tensor feat({30, single.input_freq_bins});
  feat.at(15, 3) = 1.0;
  Tensor logits = m1.forward(feat);
  EXPECT_EQ(logits.dim(0), 30);
  EXPECT_EQ(logits.dim(1), single.output_dim);
}

TEST(Multistream, ZeroStreamsRejected) {
  ModelConfig config = slim_default_config();
  config.dilations.clear();
  EXPECT_THROW(MultistreamModel{config}, ConfigError);
  EXPECT_THROW(receptive_field(config), ConfigError);
}

TEST(ReceptiveField, AnalyticDefaults) {
  ModelConfig config;  // 5-layer front-end, dilations 6-9-12, 17 layers
  const auto rf = receptive_field(config);
  EXPECT_EQ(rf.first, 209);
  EXPECT_EQ(rf.second, 209);

  ModelConfig r3 = stream_only_config(3);
  EXPECT_EQ(receptive_field(r3).first, 51);

  ModelConfig r12 = stream_only_config(12);
  EXPECT_EQ(receptive_field(r12).first, 204);
}

TEST(ReceptiveField, MeasuredImpulseAgreesWithAnalytic) {
  ModelConfig config = slim_default_config();
  MultistreamModel model(config);
  model.init_params(13);
  const auto rf = receptive_field(config);
  const int T = 2 * rf.first + 11;
  const auto measured = measure_impulse_support(model, T, T / 2);
  EXPECT_EQ(measured.first, rf.first);
  EXPECT_EQ(measured.second, rf.second);
}

TEST(Multistream, TimeShiftEquivariantAwayFromEdges) {
  ModelConfig config = stream_only_config(3);
  config.layers_per_stream = 2;  // receptive field +-6
  MultistreamModel model(config);
  model.init_params(17);
  const int T = 40, shift = 5;
  Rng rng(19);
  Tensor feat({T, config.input_freq_bins});
  for (int f = 0; f < config.input_freq_bins; ++f) feat.at(12, f) = rng.next_double();
  Tensor shifted({T, config.input_freq_bins});
  for (int f = 0; f < config.input_freq_bins; ++f) shifted.at(12 + shift, f) = feat.at(12, f);
  Tensor a = model.forward(feat);
  Tensor b = model.forward(shifted);
  // Compare frames whose receptive fields avoid the padded edges.
  for (int t = 8; t < 20; ++t) {
    for (int j = 0; j < config.output_dim; ++j) {
      EXPECT_EQ(a.at(t, j), b.at(t + shift, j)) << "frame " << t;
    }
  }
}

TEST(Multistream, StreamPermutationSymmetry) {
  // Swapping two equal-dilation streams together with their fusion block
  // weights leaves logits unchanged up to reassociation error.
  ModelConfig config;
  config.input_freq_bins = 8;
  config.frontend.filters.clear();
  config.dilations = {6, 6};
  config.layers_per_stream = 2;
  config.stream_width = 8;
  config.bottleneck = 4;
  config.head_hidden = 6;
  config.output_dim = 3;
  MultistreamModel model(config);
  model.init_params(23);

  MultistreamModel swapped(config);
  swapped.init_params(23);
  // Swap the two streams' tensors and the fusion/fc1 block rows.
  auto src = model.tensors();
  auto dst = swapped.tensors();
  for (size_t i = 0; i < src.size(); ++i) {
    std::string name = src[i].first;
    if (name.rfind("stream0.", 0) == 0) {
      const std::string other = "stream1." + name.substr(8);
      for (auto &[dname, dt] : dst) {
        if (dname == other) *dt = *src[i].second;
      }
    } else if (name.rfind("stream1.", 0) == 0) {
      const std::string other = "stream0." + name.substr(8);
      for (auto &[dname, dt] : dst) {
        if (dname == other) *dt = *src[i].second;
      }
    }
  }
  const int w = config.stream_width;
  for (auto &[dname, dt] : dst) {
    if (dname.rfind("fusion.", 0) == 0) {
      for (auto &[sname, st] : src) {
        if (sname == dname) {
          for (int i = 0; i < w; ++i) {
            dt->at(i) = st->at(w + i);
            dt->at(w + i) = st->at(i);
          }
        }
      }
    } else if (dname == "head.fc1_w") {
      for (auto &[sname, st] : src) {
        if (sname == dname) {
          for (int i = 0; i < w; ++i) {
            for (int j = 0; j < config.head_hidden; ++j) {
              dt->at(i, j) = st->at(w + i, j);
              dt->at(w + i, j) = st->at(i, j);
            }
          }
        }
      }
    }
  }

  Rng rng(29);
  Tensor feat = Tensor::uniform({25, 8}, rng, -1.0, 1.0);
  Tensor a = model.forward(feat);
  Tensor b = swapped.forward(feat);
  for (int i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(a.at(i), b.at(i), 1e-12 * std::max(1.0, std::fabs(a.at(i))));
  }
}

TEST(SpecAugment, NoOpConfigIsIdentity) {
  SpecAugmentConfig config;
  config.n_time_masks = 0;
  config.n_freq_masks = 0;
  Rng rng(31);
  Tensor feat = Tensor::uniform({12, 6}, rng, -1.0, 1.0);
  Rng mask_rng(1);
  Tensor out = spec_augment(feat, config, mask_rng);
  EXPECT_EQ(std::memcmp(feat.data(), out.data(), sizeof(double) * feat.size()), 0);
}

TEST(SpecAugment, FullTimeMaskZeroesEverything) {
  const int T = 6, F = 4;
  Tensor feat = Tensor::full({T, F}, 1.0);
  SpecAugmentConfig config;
  config.n_time_masks = 1;
  config.max_time_width = T;
  config.n_freq_masks = 0;
  // Find a seed whose first width draw is exactly T and start is 0.
  uint64_t seed = 0;
  for (;; ++seed) {
    Rng probe(seed);
    if (probe.next_below(T + 1) == static_cast<uint64_t>(T)) break;
  }
  Rng rng(seed);
  Tensor out = spec_augment(feat, config, rng);
  for (int i = 0; i < out.size(); ++i) EXPECT_EQ(out.at(i), 0.0);
}

TEST(SpecAugment, DeterministicUnderSeed) {
  Rng data_rng(37);
  Tensor feat = Tensor::uniform({30, 12}, data_rng, -1.0, 1.0);
  SpecAugmentConfig config;
  config.max_time_width = 8;
  config.max_freq_width = 4;
  Rng r1(123), r2(123);
  Tensor a = spec_augment(feat, config, r1);
  Tensor b = spec_augment(feat, config, r2);
  EXPECT_EQ(std::memcmp(a.data(), b.data(), sizeof(double) * a.size()), 0);
}

TEST(SpecAugment, RejectsOversizedMasks) {
  Tensor feat({10, 5});
  SpecAugmentConfig config;
  config.max_time_width = 11;
  Rng rng(1);
  EXPECT_THROW(spec_augment(feat, config, rng), ConfigError);
  config.max_time_width = 5;
  config.max_freq_width = 6;
  EXPECT_THROW(spec_augment(feat, config, rng), ConfigError);
}

TEST(Multistream, DropoutZeroTrainEqualsInference) {
  ModelConfig config = stream_only_config(3);
  config.layers_per_stream = 2;
  MultistreamModel model(config);
  model.init_params(41);
  Rng rng(43);
  Tensor feat = Tensor::uniform({15, config.input_freq_bins}, rng, -1.0, 1.0);
  Rng dropout_rng(7);
  Tensor train_out = model.forward(feat, Mode::kTrain, &dropout_rng);
  Tensor infer_out = model.forward(feat, Mode::kInference, nullptr);
  EXPECT_EQ(std::memcmp(train_out.data(), infer_out.data(),
                        sizeof(double) * train_out.size()),
            0);
}

TEST(AmCheckpoint, RoundTrip) {
  ModelConfig config = stream_only_config(6);
  config.layers_per_stream = 2;
  MultistreamModel model(config);
  model.init_params(47);
  const std::string prefix = testing::TempDir() + "am_ckpt_test";
  model.save(prefix);
  MultistreamModel loaded = MultistreamModel::load(prefix);
  Rng rng(49);
  Tensor feat = Tensor::uniform({20, config.input_freq_bins}, rng, -1.0, 1.0);
  Tensor a = model.forward(feat);
  Tensor b = loaded.forward(feat);
  EXPECT_EQ(std::memcmp(a.data(), b.data(), sizeof(double) * a.size()), 0);
  std::remove((prefix + ".json").c_str());
  std::remove((prefix + ".bin").c_str());
}

TEST(FeatureIo, RoundTrip) {
  std::vector<UttFeatures> utts(2);
  utts[0].utt = "u1";
  utts[0].frames = Tensor::from({2, 3}, {1, 2, 3, 4, 5, 6});
  utts[1].utt = "u2";
  utts[1].frames = Tensor::from({1, 3}, {0.5, -1.25, 9});
  const std::string path = testing::TempDir() + "features_test.jsonl";
  write_features(path, utts);
  auto loaded = read_features(path);
  ASSERT_EQ(loaded.size(), 2u);
  EXPECT_EQ(loaded[0].utt, "u1");
  EXPECT_EQ(loaded[1].frames.at(0, 1), -1.25);
  std::remove(path.c_str());
}

}  // namespace
}  // namespace am
}  // namespace asrkit
