// tests/test_lm.cc

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
#include <fstream>

#include "asrkit/lm.h"

namespace asrkit {
namespace lm {
namespace {

text::Vocabulary toy_vocab(int extra_tokens) {
  std::vector<std::string> rest;
  for (int i = 0; i < extra_tokens; ++i) rest.push_back("T" + std::to_string(i));
  return text::Vocabulary::with_specials(rest);
}

LmModel make_model(int layers, int dim, int heads, bool tie, int vocab_extra, uint64_t seed) {
  LmModel::Config config;
  config.layers = layers;
  config.dim = dim;
  config.proj_dim = dim;
  config.heads = heads;
  config.tie_weights = tie;
  LmModel model(config, toy_vocab(vocab_extra));
  model.init_params(seed);
  return model;
}

TEST(LmModel, UniformClosedForm) {
  // All-zero output projection and bias: every conditional is 1/V.
  LmModel model = make_model(2, 6, 2, /*tie=*/false, 5, 11);
  for (auto &p : model.parameters()) {
    if (p.name == "out_proj" || p.name == "out_bias") p.value->set_zero();
  }
  const int V = model.vocab_size();
  const std::vector<int> tokens = {3, 4, 5};
  const double expected = (3 + 1) * std::log(1.0 / V);
  EXPECT_NEAR(model.sequence_logprob(tokens), expected, 1e-12);
}

TEST(LmModel, EmptyUtteranceScoresEosOnly) {
  LmModel model = make_model(1, 4, 1, true, 4, 13);
  const auto lps = model.conditional_logprobs({});
  EXPECT_EQ(lps.size(), 1u);
  EXPECT_NEAR(model.sequence_logprob({}), lps[0], 1e-15);
}

TEST(LmModel, LogprobDecreasesWithLength) {
  LmModel model = make_model(2, 6, 2, true, 6, 17);
  std::vector<int> tokens;
  double prev = model.sequence_logprob(tokens);
  for (int id : {3, 5, 4, 6}) {
    tokens.push_back(id);
    const double lp = model.sequence_logprob(tokens);
    EXPECT_LT(lp, prev);  // each conditional is < 1
    prev = lp;
  }
}

TEST(LmModel, CausalityBitwise) {
  LmModel model = make_model(2, 8, 2, true, 8, 19);
  Rng rng(23);
  for (int probe = 0; probe < 10; ++probe) {
    const int len = 4 + static_cast<int>(rng.next_below(6));
    std::vector<int> tokens(static_cast<size_t>(len));
    for (auto &t : tokens) t = 3 + static_cast<int>(rng.next_below(8));
    const int cut = 1 + static_cast<int>(rng.next_below(static_cast<uint64_t>(len - 1)));
    std::vector<int> mutated = tokens;
    for (size_t i = static_cast<size_t>(cut); i < mutated.size(); ++i) {
      mutated[i] = 3 + static_cast<int>(rng.next_below(8));
    }
    const auto base = model.conditional_logprobs(tokens);
    const auto mod = model.conditional_logprobs(mutated);
    for (int t = 0; t < cut; ++t) {
      // Conditionals up to the first change are bitwise identical.
      EXPECT_EQ(base[static_cast<size_t>(t)], mod[static_cast<size_t>(t)]);
    }
  }
}

TEST(LmModel, PerplexityOfUniformModelIsVocabSize) {
  LmModel model = make_model(1, 4, 1, false, 7, 29);
  for (auto &p : model.parameters()) {
    if (p.name == "out_proj" || p.name == "out_bias") p.value->set_zero();
  }
  const double ppl = model.perplexity({{3, 4}, {5}});
  EXPECT_NEAR(ppl, static_cast<double>(model.vocab_size()), 1e-9);
}

TEST(LmModel, PerplexityPoolsTokensAcrossUtterances) {
  LmModel model = make_model(2, 6, 2, true, 6, 31);
  const std::vector<std::vector<int>> corpus = {{3, 4}, {5, 6, 7, 8, 3, 4, 5, 6}};
  const double lp1 = model.sequence_logprob(corpus[0]);
  const double lp2 = model.sequence_logprob(corpus[1]);
  const double pooled = std::exp(-(lp1 + lp2) / (3.0 + 9.0));
  EXPECT_NEAR(model.perplexity(corpus), pooled, 1e-12);
  const double mean_of_ppls =
      0.5 * (std::exp(-lp1 / 3.0) + std::exp(-lp2 / 9.0));
  EXPECT_NE(pooled, mean_of_ppls);
  EXPECT_THROW(model.perplexity({}), DataError);
}

TEST(LmModel, UnknownIdIsDataError) {
  LmModel model = make_model(1, 4, 1, true, 4, 37);
  EXPECT_THROW(model.sequence_logprob({3, 99}), DataError);
  EXPECT_THROW(model.sequence_logprob({-1}), DataError);
}

TEST(LmModel, TiedWeightsShareStorage) {
  LmModel model = make_model(1, 4, 1, true, 4, 41);
  auto params = model.parameters();
  // No separate output projection exists under tying.
  for (const auto &p : params) EXPECT_NE(p.name, "out_proj");
  // Changing the embedding changes the output distribution law immediately.
  const double before = model.sequence_logprob({3});
  for (auto &p : params) {
    if (p.name == "embedding") p.value->at(3, 0) += 0.5;
  }
  EXPECT_NE(model.sequence_logprob({3}), before);
}

TEST(LmModel, CheckpointRoundTrip) {
  LmModel model = make_model(2, 6, 2, false, 9, 43);
  const std::string prefix = testing::TempDir() + "lm_ckpt_test";
  model.save(prefix);
  LmModel loaded = LmModel::load(prefix);
  EXPECT_EQ(loaded.config().layers, 2);
  EXPECT_EQ(loaded.config().tie_weights, false);
  EXPECT_EQ(loaded.vocab().tokens(), model.vocab().tokens());
  const std::vector<int> tokens = {3, 7, 5, 4};
  EXPECT_EQ(loaded.sequence_logprob(tokens), model.sequence_logprob(tokens));
  std::remove((prefix + ".json").c_str());
  std::remove((prefix + ".bin").c_str());
}

TEST(LmModel, SaveIsByteDeterministic) {
  const std::string p1 = testing::TempDir() + "lm_det_a";
  const std::string p2 = testing::TempDir() + "lm_det_b";
  make_model(1, 4, 2, true, 5, 47).save(p1);
  make_model(1, 4, 2, true, 5, 47).save(p2);
  for (const char *ext : {".json", ".bin"}) {
    std::ifstream a(p1 + ext, std::ios::binary), b(p2 + ext, std::ios::binary);
    std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
    std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
    EXPECT_EQ(sa, sb);
  }
  for (const char *ext : {".json", ".bin"}) {
    std::remove((p1 + ext).c_str());
    std::remove((p2 + ext).c_str());
  }
}

}  // namespace
}  // namespace lm
}  // namespace asrkit
