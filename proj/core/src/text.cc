// asrkit/text.cc

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

#include "asrkit/text.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace asrkit {
namespace text {

std::string normalize_text(const std::string &raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (unsigned char uc : raw) {
    char c = static_cast<char>(uc);
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    const bool keep = (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '\'';
    if (keep) {
      if (pending_space && !out.empty()) out.push_back(' ');
      pending_space = false;
      out.push_back(c);
    } else {
      pending_space = true;  // spaces and every other character collapse here
    }
  }
  return out;
}

std::vector<std::string> split_words(const std::string &normalized) {
  std::vector<std::string> words;
  std::string cur;
  for (char c : normalized) {
    if (c == ' ') {
      if (!cur.empty()) words.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) words.push_back(cur);
  return words;
}

// ---------------------------------------------------------------------------
// Vocabulary

Vocabulary::Vocabulary(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  build_index();
  bos_id_ = id_of(kBosToken);
  eos_id_ = id_of(kEosToken);
  unk_id_ = id_of(kUnkToken);
  if (bos_id_ < 0 || eos_id_ < 0 || unk_id_ < 0) {
    throw DataError("vocabulary: missing special token");
  }
}

Vocabulary Vocabulary::with_specials(const std::vector<std::string> &rest) {
  std::vector<std::string> tokens = {kBosToken, kEosToken, kUnkToken};
  for (const auto &t : rest) {
    if (t == kBosToken || t == kEosToken || t == kUnkToken) continue;
    tokens.push_back(t);
  }
  return Vocabulary(std::move(tokens));
}

void Vocabulary::build_index() {
  index_.clear();
  index_.reserve(tokens_.size());
  for (size_t i = 0; i < tokens_.size(); ++i) {
    index_.emplace_back(tokens_[i], static_cast<int>(i));
  }
  std::sort(index_.begin(), index_.end());
  for (size_t i = 1; i < index_.size(); ++i) {
    if (index_[i].first == index_[i - 1].first) {
      throw DataError("vocabulary: duplicate token '" + index_[i].first + "'");
    }
  }
}

int Vocabulary::id_of(const std::string &token) const {
  auto it = std::lower_bound(index_.begin(), index_.end(),
                             std::make_pair(token, -1));
  if (it != index_.end() && it->first == token) return it->second;
  return -1;
}

int Vocabulary::id_or_unk(const std::string &token) const {
  int id = id_of(token);
  return id >= 0 ? id : unk_id_;
}

void Vocabulary::save(const std::string &path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("vocabulary: cannot write " + path);
  for (const auto &t : tokens_) out << t << "\n";
}

Vocabulary Vocabulary::load(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("vocabulary: cannot read " + path);
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    tokens.push_back(line);
  }
  while (!tokens.empty() && tokens.back().empty()) tokens.pop_back();
  return Vocabulary(std::move(tokens));
}

// ---------------------------------------------------------------------------
// BPE

namespace {

struct Piece {
  std::string sym;
  bool word_final = false;
};

std::vector<Piece> split_into_pieces(const std::string &word) {
  std::vector<Piece> pieces;
  pieces.reserve(word.size());
  for (char c : word) pieces.push_back({std::string(1, c), false});
  if (!pieces.empty()) pieces.back().word_final = true;
  return pieces;
}

// Merge every adjacent (a, b) occurrence left to right; the merged piece
// keeps the right piece's word-final flag.
void apply_merge(std::vector<Piece> &pieces, const std::string &a, const std::string &b) {
  size_t w = 0;
  for (size_t r = 0; r < pieces.size();) {
    if (r + 1 < pieces.size() && pieces[r].sym == a && pieces[r + 1].sym == b) {
      pieces[w] = {a + b, pieces[r + 1].word_final};
      r += 2;
    } else {
      pieces[w] = pieces[r];
      r += 1;
    }
    ++w;
  }
  pieces.resize(w);
}

std::string piece_token(const Piece &p) {
  return p.word_final ? p.sym + kWordEndMarker : p.sym;
}

}  // namespace

BpeModel BpeModel::train(const std::vector<std::string> &corpus, int target_vocab) {
  // Distinct words with frequencies, in sorted order for determinism.
  std::map<std::string, int64_t> word_freq;
  for (const auto &sentence : corpus) {
    for (auto &w : split_words(sentence)) word_freq[w] += 1;
  }
  if (word_freq.empty()) throw DataError("train_bpe: empty corpus");

  BpeModel model;
  std::set<std::string> chars;
  for (const auto &[word, freq] : word_freq) {
    (void)freq;
    for (char c : word) chars.insert(std::string(1, c));
  }
  model.base_symbols_.assign(chars.begin(), chars.end());
  model.base_symbols_.push_back(kWordEndMarker);

  const int base = static_cast<int>(model.base_symbols_.size());
  if (target_vocab < base) {
    throw UsageError("train_bpe: target vocab " + std::to_string(target_vocab) +
                     " is below the base symbol count " + std::to_string(base));
  }
  int budget = target_vocab - base;

  std::vector<std::pair<std::vector<Piece>, int64_t>> words;
  words.reserve(word_freq.size());
  for (const auto &[word, freq] : word_freq) {
    words.emplace_back(split_into_pieces(word), freq);
  }

  while (budget > 0) {
    std::map<std::pair<std::string, std::string>, int64_t> pair_count;
    for (const auto &[pieces, freq] : words) {
      for (size_t i = 0; i + 1 < pieces.size(); ++i) {
        pair_count[{pieces[i].sym, pieces[i + 1].sym}] += freq;
      }
    }
    // Highest count wins; the map's lexicographic order settles ties.
    std::pair<std::string, std::string> best;
    int64_t best_count = 0;
    for (const auto &[pair, count] : pair_count) {
      if (count > best_count) {
        best = pair;
        best_count = count;
      }
    }
    if (best_count < 2) break;
    model.merges_.push_back(best);
    for (auto &[pieces, freq] : words) {
      (void)freq;
      apply_merge(pieces, best.first, best.second);
    }
    --budget;
  }
  return model;
}

Vocabulary BpeModel::build_vocabulary() const {
  std::vector<std::string> tokens = {kBosToken, kEosToken, kUnkToken};
  std::set<std::string> seen;
  auto push_both_forms = [&](const std::string &sym) {
    for (const std::string &form : {sym, sym + kWordEndMarker}) {
      if (seen.insert(form).second) tokens.push_back(form);
    }
  };
  for (const auto &sym : base_symbols_) {
    if (sym == kWordEndMarker) continue;  // the marker is a suffix, not a token
    push_both_forms(sym);
  }
  for (const auto &[a, b] : merges_) push_both_forms(a + b);
  return Vocabulary(std::move(tokens));
}

std::vector<std::string> BpeModel::segment_word(const std::string &word) const {
  std::vector<Piece> pieces = split_into_pieces(word);
  for (const auto &[a, b] : merges_) apply_merge(pieces, a, b);
  std::vector<std::string> out;
  out.reserve(pieces.size());
  for (const auto &p : pieces) out.push_back(piece_token(p));
  return out;
}

std::vector<int> BpeModel::encode(const Vocabulary &vocab, const std::string &sentence) const {
  std::vector<int> ids;
  for (const auto &word : split_words(sentence)) {
    for (const auto &tok : segment_word(word)) ids.push_back(vocab.id_or_unk(tok));
  }
  return ids;
}

std::string BpeModel::decode(const Vocabulary &vocab, const std::vector<int> &ids) {
  const std::string marker = kWordEndMarker;
  std::string out;
  std::string word;
  auto flush = [&]() {
    if (word.empty()) return;
    if (!out.empty()) out.push_back(' ');
    out += word;
    word.clear();
  };
  for (int id : ids) {
    if (id < 0 || id >= vocab.size()) {
      throw DataError("bpe_decode: id " + std::to_string(id) + " out of range");
    }
    if (id == vocab.bos_id() || id == vocab.eos_id()) continue;
    const std::string &tok = vocab.token(id);
    if (tok.size() >= marker.size() &&
        tok.compare(tok.size() - marker.size(), marker.size(), marker) == 0) {
      word += tok.substr(0, tok.size() - marker.size());
      flush();
    } else {
      word += tok;
    }
  }
  flush();
  return out;
}

std::string BpeModel::to_json() const {
  nlohmann::json j;
  j["base_symbols"] = base_symbols_;
  nlohmann::json merges = nlohmann::json::array();
  for (const auto &[a, b] : merges_) merges.push_back({a, b});
  j["merges"] = merges;
  return j.dump(2);
}

BpeModel BpeModel::from_json(const std::string &json_text) {
  BpeModel model;
  nlohmann::json j = nlohmann::json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.contains("base_symbols") || !j.contains("merges")) {
    throw DataError("bpe model: malformed JSON");
  }
  model.base_symbols_ = j["base_symbols"].get<std::vector<std::string>>();
  for (const auto &pair : j["merges"]) {
    if (!pair.is_array() || pair.size() != 2) throw DataError("bpe model: malformed merge entry");
    model.merges_.emplace_back(pair[0].get<std::string>(), pair[1].get<std::string>());
  }
  return model;
}

void BpeModel::save(const std::string &path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("bpe model: cannot write " + path);
  out << to_json() << "\n";
}

BpeModel BpeModel::load(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("bpe model: cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

// ---------------------------------------------------------------------------
// Tokenizers and vocabulary builders

std::vector<int> WordTokenizer::encode(const std::string &normalized) const {
  std::vector<int> ids;
  for (const auto &w : split_words(normalized)) ids.push_back(vocab_.id_or_unk(w));
  return ids;
}

std::vector<int> CharTokenizer::encode(const std::string &normalized) const {
  std::vector<int> ids;
  ids.reserve(normalized.size());
  for (char c : normalized) ids.push_back(vocab_.id_or_unk(std::string(1, c)));
  return ids;
}

Vocabulary build_word_vocab(const std::vector<std::string> &corpus, int max_tokens) {
  std::map<std::string, int64_t> freq;
  for (const auto &sentence : corpus) {
    for (auto &w : split_words(sentence)) freq[w] += 1;
  }
  std::vector<std::pair<std::string, int64_t>> ranked(freq.begin(), freq.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto &a, const auto &b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> rest;
  const int room = max_tokens - 3;
  for (const auto &[word, count] : ranked) {
    (void)count;
    if (static_cast<int>(rest.size()) >= room) break;
    rest.push_back(word);
  }
  return Vocabulary::with_specials(rest);
}

Vocabulary build_char_vocab(const std::vector<std::string> &corpus) {
  std::set<std::string> chars;
  for (const auto &sentence : corpus) {
    for (char c : sentence) chars.insert(std::string(1, c));
  }
  return Vocabulary::with_specials({chars.begin(), chars.end()});
}

}  // namespace text
}  // namespace asrkit
