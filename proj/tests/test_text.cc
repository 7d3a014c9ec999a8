// tests/test_text.cc

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

#include <cstdio>
#include <fstream>

#include "asrkit/text.h"

namespace asrkit {
namespace text {
namespace {

TEST(NormalizeText, RuleApplication) {
  EXPECT_EQ(normalize_text("Hello,  world!"), "HELLO WORLD");
  EXPECT_EQ(normalize_text("don't"), "DON'T");
  EXPECT_EQ(normalize_text(""), "");
  EXPECT_EQ(normalize_text("  a  b\t c \n"), "A B C");
  EXPECT_EQ(normalize_text("route 66!"), "ROUTE 66");
}

TEST(NormalizeText, Idempotent) {
  for (const char *s : {"Hello,  world!", "don't", "", "MiXeD 123 ~+#", "  x  "}) {
    const std::string once = normalize_text(s);
    EXPECT_EQ(normalize_text(once), once);
  }
}

TEST(TrainBpe, NoOpBudget) {
  BpeModel model = BpeModel::train({"AB BA"}, /*target_vocab=*/3);  // base = {A, B, </w>}
  EXPECT_TRUE(model.merges().empty());
  EXPECT_EQ(model.base_symbols().size(), 3u);
}

TEST(TrainBpe, FirstMergeByPairCount) {
  // "AA" three times: the only adjacent pair is (A, A).
  BpeModel model = BpeModel::train({"AA AA AA"}, /*target_vocab=*/3);
  ASSERT_EQ(model.merges().size(), 1u);
  EXPECT_EQ(model.merges()[0].first, "A");
  EXPECT_EQ(model.merges()[0].second, "A");
}

TEST(TrainBpe, TwoMergesReplayOracle) {
  // "ABAB" twice: (A,B) dominates with count 4, then (AB,AB) merges.
  BpeModel model = BpeModel::train({"ABAB ABAB"}, /*target_vocab=*/5);  // base 3 + 2 merges
  ASSERT_EQ(model.merges().size(), 2u);
  EXPECT_EQ(model.merges()[0], (std::pair<std::string, std::string>{"A", "B"}));
  EXPECT_EQ(model.merges()[1], (std::pair<std::string, std::string>{"AB", "AB"}));
}

TEST(TrainBpe, StopsWhenNoPairRepeats) {
  // Every word distinct with distinct characters: no pair reaches count 2.
  BpeModel model = BpeModel::train({"AB CD EF"}, /*target_vocab=*/100);
  EXPECT_TRUE(model.merges().empty());
}

TEST(TrainBpe, EmptyCorpusIsDataError) {
  EXPECT_THROW(BpeModel::train({}, 10), DataError);
  EXPECT_THROW(BpeModel::train({"", "  "}, 10), DataError);
}

TEST(TrainBpe, BudgetBelowBaseIsUsageError) {
  EXPECT_THROW(BpeModel::train({"ABC"}, 2), UsageError);
}

TEST(TrainBpe, DeterministicRetrain) {
  const std::vector<std::string> corpus = {"THE CAT SAT ON THE MAT", "THE CAT ATE",
                                           "A CAT SAT"};
  BpeModel a = BpeModel::train(corpus, 30);
  BpeModel b = BpeModel::train(corpus, 30);
  EXPECT_EQ(a.merges(), b.merges());
  EXPECT_EQ(a.base_symbols(), b.base_symbols());
}

TEST(BpeEncode, SingleMergedToken) {
  BpeModel model = BpeModel::train({"AA AA AA"}, 3);
  Vocabulary vocab = model.build_vocabulary();
  const auto ids = model.encode(vocab, "AA");
  ASSERT_EQ(ids.size(), 1u);
  EXPECT_EQ(vocab.token(ids[0]), "AA</w>");
}

TEST(BpeEncode, RoundTrip) {
  const std::vector<std::string> corpus = {"THE CAT SAT ON THE MAT", "THE DOG SAT"};
  BpeModel model = BpeModel::train(corpus, 40);
  Vocabulary vocab = model.build_vocabulary();
  for (const char *s : {"THE CAT SAT", "DOG ON MAT", "THE THE THE"}) {
    const auto ids = model.encode(vocab, s);
    EXPECT_EQ(BpeModel::decode(vocab, ids), s);
  }
}

TEST(BpeEncode, UnknownCharacterMapsToUnk) {
  BpeModel model = BpeModel::train({"AB AB"}, 4);
  Vocabulary vocab = model.build_vocabulary();
  const auto ids = model.encode(vocab, "AQB");
  bool has_unk = false;
  for (int id : ids) has_unk |= (id == vocab.unk_id());
  EXPECT_TRUE(has_unk);
}

TEST(BpeModel, JsonRoundTrip) {
  BpeModel model = BpeModel::train({"ABAB ABAB AB"}, 6);
  BpeModel reloaded = BpeModel::from_json(model.to_json());
  EXPECT_EQ(model.base_symbols(), reloaded.base_symbols());
  EXPECT_EQ(model.merges(), reloaded.merges());
}

TEST(Vocabulary, FileRoundTrip) {
  BpeModel model = BpeModel::train({"THE CAT"}, 12);
  Vocabulary vocab = model.build_vocabulary();
  const std::string path = testing::TempDir() + "vocab_roundtrip.txt";
  vocab.save(path);
  Vocabulary loaded = Vocabulary::load(path);
  EXPECT_EQ(vocab.tokens(), loaded.tokens());
  std::remove(path.c_str());
}

TEST(Vocabulary, SpecialsAndDenseIds) {
  Vocabulary vocab = Vocabulary::with_specials({"A", "B"});
  EXPECT_EQ(vocab.size(), 5);
  EXPECT_EQ(vocab.bos_id(), 0);
  EXPECT_EQ(vocab.eos_id(), 1);
  EXPECT_EQ(vocab.unk_id(), 2);
  EXPECT_EQ(vocab.id_of("A"), 3);
  EXPECT_EQ(vocab.id_or_unk("MISSING"), vocab.unk_id());
  EXPECT_THROW(Vocabulary({"<s>", "</s>", "<unk>", "X", "X"}), DataError);
}

TEST(Tokenizers, WordAndChar) {
  Vocabulary words = build_word_vocab({"THE CAT SAT", "THE DOG"}, 100);
  WordTokenizer wt(words);
  const auto ids = wt.encode("THE ZEBRA");
  ASSERT_EQ(ids.size(), 2u);
  EXPECT_EQ(words.token(ids[0]), "THE");
  EXPECT_EQ(ids[1], words.unk_id());

  Vocabulary chars = build_char_vocab({"AB C"});
  CharTokenizer ct(chars);
  const auto cids = ct.encode("CAB");
  ASSERT_EQ(cids.size(), 3u);
  EXPECT_EQ(chars.token(cids[0]), "C");
  EXPECT_TRUE(chars.contains(" "));
}

TEST(Tokenizers, WordVocabRankedByFrequency) {
  // B appears twice, others once; cap leaves room for one word.
  Vocabulary vocab = build_word_vocab({"B A", "B C"}, 4);
  EXPECT_EQ(vocab.size(), 4);
  EXPECT_TRUE(vocab.contains("B"));
  EXPECT_FALSE(vocab.contains("A"));
}

}  // namespace
}  // namespace text
}  // namespace asrkit
