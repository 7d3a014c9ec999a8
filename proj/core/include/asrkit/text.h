// asrkit/text.h

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

#ifndef ASRKIT_TEXT_H_
#define ASRKIT_TEXT_H_

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "asrkit/error.h"

namespace asrkit {
namespace text {

inline constexpr const char *kBosToken = "<s>";
inline constexpr const char *kEosToken = "</s>";
inline constexpr const char *kUnkToken = "<unk>";
inline constexpr const char *kWordEndMarker = "</w>";

// Uppercases ASCII letters, replaces every character outside
// [A-Z, 0-9, apostrophe, space] with a space, collapses whitespace runs and
// strips leading/trailing spaces.  Total and idempotent.
std::string normalize_text(const std::string &raw);

std::vector<std::string> split_words(const std::string &normalized);

// Ordered bijection between token strings and dense ids.  The specials
// <s>, </s>, <unk> occupy ids 0, 1, 2 in every vocabulary this library
// constructs.
class Vocabulary {
 public:
  Vocabulary() = default;
  // tokens must be distinct and include the three specials exactly once.
  explicit Vocabulary(std::vector<std::string> tokens);

  static Vocabulary with_specials(const std::vector<std::string> &rest);

  int size() const { return static_cast<int>(tokens_.size()); }
  const std::string &token(int id) const { return tokens_[static_cast<size_t>(id)]; }
  const std::vector<std::string> &tokens() const { return tokens_; }
  // Returns -1 when the token is absent.
  int id_of(const std::string &token) const;
  int id_or_unk(const std::string &token) const;
  bool contains(const std::string &token) const { return id_of(token) >= 0; }

  int bos_id() const { return bos_id_; }
  int eos_id() const { return eos_id_; }
  int unk_id() const { return unk_id_; }

  void save(const std::string &path) const;  // one token per line, id = line number
  static Vocabulary load(const std::string &path);

 private:
  std::vector<std::string> tokens_;
  std::vector<std::pair<std::string, int>> index_;  // sorted by token
  int bos_id_ = -1, eos_id_ = -1, unk_id_ = -1;
  void build_index();
};

// Byte-pair encoding model: base symbols (single characters plus the
// end-of-word marker) and an ordered merge list.  Words are segmented into
// symbol pieces whose last piece carries an end-of-word flag; merges match
// on the plain symbol strings, so a pair can merge across the flag and a
// word can collapse to a single marked token.
class BpeModel {
 public:
  const std::vector<std::string> &base_symbols() const { return base_symbols_; }
  const std::vector<std::pair<std::string, std::string>> &merges() const { return merges_; }

  // Learns merges from normalized sentences until the symbol inventory
  // (base symbols + merge outputs) reaches target_vocab or no adjacent pair
  // occurs at least twice.  Ties break on lexicographic pair order.
  static BpeModel train(const std::vector<std::string> &corpus, int target_vocab);

  // Derived token inventory: specials, then both plain and word-final forms
  // of every base character and merge output, in training order.
  Vocabulary build_vocabulary() const;

  // Segment one word into vocabulary token strings ("AB", "AB</w>", ...).
  std::vector<std::string> segment_word(const std::string &word) const;

  std::vector<int> encode(const Vocabulary &vocab, const std::string &sentence) const;
  static std::string decode(const Vocabulary &vocab, const std::vector<int> &ids);

  void save(const std::string &path) const;
  static BpeModel load(const std::string &path);
  std::string to_json() const;
  static BpeModel from_json(const std::string &json_text);

 private:
  std::vector<std::string> base_symbols_;  // sorted chars, then the marker
  std::vector<std::pair<std::string, std::string>> merges_;
};

// Sentence-to-ids interface shared by the LM trainer and the N-best scorer.
class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual std::vector<int> encode(const std::string &normalized) const = 0;
  virtual const Vocabulary &vocab() const = 0;
};

class BpeTokenizer : public Tokenizer {
 public:
  explicit BpeTokenizer(BpeModel model)
      : model_(std::move(model)), vocab_(model_.build_vocabulary()) {}
  std::vector<int> encode(const std::string &normalized) const override {
    return model_.encode(vocab_, normalized);
  }
  const Vocabulary &vocab() const override { return vocab_; }
  const BpeModel &model() const { return model_; }

 private:
  BpeModel model_;
  Vocabulary vocab_;
};

class WordTokenizer : public Tokenizer {
 public:
  explicit WordTokenizer(Vocabulary vocab) : vocab_(std::move(vocab)) {}
  std::vector<int> encode(const std::string &normalized) const override;
  const Vocabulary &vocab() const override { return vocab_; }

 private:
  Vocabulary vocab_;
};

// One token per character, spaces included.
class CharTokenizer : public Tokenizer {
 public:
  explicit CharTokenizer(Vocabulary vocab) : vocab_(std::move(vocab)) {}
  std::vector<int> encode(const std::string &normalized) const override;
  const Vocabulary &vocab() const override { return vocab_; }

 private:
  Vocabulary vocab_;
};

// Deterministic vocabulary builders over normalized corpora.
// Words are ranked by descending count, ties by token string; max_tokens
// counts the specials.
Vocabulary build_word_vocab(const std::vector<std::string> &corpus, int max_tokens);
Vocabulary build_char_vocab(const std::vector<std::string> &corpus);

}  // namespace text
}  // namespace asrkit

#endif  // ASRKIT_TEXT_H_
