// tests/test_ngram.cc

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

#include "asrkit/ngram.h"

namespace asrkit {
namespace text {
namespace {

std::vector<int> ids_of(const Vocabulary &vocab, const std::string &sentence) {
  WordTokenizer tok(vocab);
  return tok.encode(sentence);
}

TEST(Ngram, UnigramClosedForm) {
  // Uniform corpus: tokens A B C once each, k = 1.
  Vocabulary vocab = Vocabulary::with_specials({"A", "B", "C"});
  std::vector<std::vector<int>> corpus = {ids_of(vocab, "A B C")};
  NgramModel model(/*order=*/1, /*add_k=*/1.0, vocab, corpus);
  // V excludes <s>: {</s>, <unk>, A, B, C} -> 5.  Total events = 4 (A B C </s>).
  EXPECT_EQ(model.continuation_vocab(), 5);
  const double expected = std::log((1.0 + 1.0) / (4.0 + 5.0));
  EXPECT_NEAR(model.cond_logprob({}, vocab.id_of("A")), expected, 1e-12);
}

TEST(Ngram, EmptySentenceIsEosGivenBos) {
  Vocabulary vocab = Vocabulary::with_specials({"A"});
  std::vector<std::vector<int>> corpus = {ids_of(vocab, "A"), ids_of(vocab, "")};
  NgramModel model(2, 0.5, vocab, corpus);
  const double lp = model.logprob({});
  EXPECT_NEAR(lp, model.cond_logprob({vocab.bos_id()}, vocab.eos_id()), 1e-15);
}

TEST(Ngram, HandCountedBigramOracle) {
  // Corpus: "A B", "A B", "A C"; order 2, k = 0.5.
  // V = 5 ({</s>, <unk>, A, B, C}); kV = 2.5.
  // P(A|<s>) = 3.5/5.5, P(B|A) = 2.5/5.5, P(</s>|B) = 2.5/4.5.
  Vocabulary vocab = Vocabulary::with_specials({"A", "B", "C"});
  std::vector<std::vector<int>> corpus = {ids_of(vocab, "A B"), ids_of(vocab, "A B"),
                                          ids_of(vocab, "A C")};
  NgramModel model(2, 0.5, vocab, corpus);
  const double expected = std::log(3.5 / 5.5) + std::log(2.5 / 5.5) + std::log(2.5 / 4.5);
  EXPECT_NEAR(model.logprob(ids_of(vocab, "A B")), expected, 1e-12);
}

TEST(Ngram, BacksOffOnUnseenContext) {
  Vocabulary vocab = Vocabulary::with_specials({"A", "B", "C"});
  std::vector<std::vector<int>> corpus = {ids_of(vocab, "A B"), ids_of(vocab, "B C")};
  NgramModel model(2, 1.0, vocab, corpus);
  // Context "C" was never continued (C only precedes </s>)... it was: C -> </s>.
  // Use <unk> as a genuinely unseen context instead.
  const double backed = model.cond_logprob({vocab.unk_id()}, vocab.id_of("A"));
  const double unigram = model.cond_logprob({}, vocab.id_of("A"));
  EXPECT_NEAR(backed, unigram, 1e-15);
}

TEST(Ngram, ConditionalsSumToOne) {
  Vocabulary vocab = Vocabulary::with_specials({"A", "B", "C"});
  std::vector<std::vector<int>> corpus = {ids_of(vocab, "A B C"), ids_of(vocab, "B A"),
                                          ids_of(vocab, "C C A")};
  NgramModel model(2, 0.25, vocab, corpus);
  for (const std::vector<int> ctx :
       {std::vector<int>{}, {vocab.bos_id()}, {vocab.id_of("A")}, {vocab.id_of("C")}}) {
    double sum = 0.0;
    for (int w = 0; w < vocab.size(); ++w) {
      if (w == vocab.bos_id()) continue;
      sum += std::exp(model.cond_logprob(ctx, w));
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }
}

TEST(Ngram, PerplexityPoolsTokens) {
  Vocabulary vocab = Vocabulary::with_specials({"A", "B"});
  std::vector<std::vector<int>> corpus = {ids_of(vocab, "A B A"), ids_of(vocab, "B")};
  NgramModel model(2, 1.0, vocab, corpus);
  const double lp1 = model.logprob(corpus[0]);
  const double lp2 = model.logprob(corpus[1]);
  const double expected = std::exp(-(lp1 + lp2) / (4.0 + 2.0));
  EXPECT_NEAR(model.perplexity(corpus), expected, 1e-12);
  EXPECT_THROW(model.perplexity({}), DataError);
}

TEST(Ngram, RejectsBadConstruction) {
  Vocabulary vocab = Vocabulary::with_specials({"A"});
  std::vector<std::vector<int>> corpus = {ids_of(vocab, "A")};
  EXPECT_THROW(NgramModel(0, 1.0, vocab, corpus), ConfigError);
  EXPECT_THROW(NgramModel(2, 0.0, vocab, corpus), ConfigError);
  EXPECT_THROW(NgramModel(2, 1.0, vocab, {}), DataError);
}

}  // namespace
}  // namespace text
}  // namespace asrkit
