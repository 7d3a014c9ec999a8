// asrkit/ngram.cc

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

#include "asrkit/ngram.h"

#include <cmath>

namespace asrkit {
namespace text {

NgramModel::NgramModel(int order, double add_k, const Vocabulary &vocab,
                       const std::vector<std::vector<int>> &corpus)
    : order_(order),
      add_k_(add_k),
      vocab_size_(vocab.size()),
      bos_id_(vocab.bos_id()),
      eos_id_(vocab.eos_id()) {
  if (order < 1) throw ConfigError("ngram: order must be >= 1");
  if (add_k <= 0.0) throw ConfigError("ngram: add_k must be > 0");
  if (corpus.empty()) throw DataError("ngram: empty corpus");
  counts_.resize(static_cast<size_t>(order));
  for (const auto &sentence : corpus) {
    std::vector<int> ids;
    ids.reserve(sentence.size() + 2);
    ids.push_back(bos_id_);
    ids.insert(ids.end(), sentence.begin(), sentence.end());
    ids.push_back(eos_id_);
    for (size_t i = 1; i < ids.size(); ++i) {
      const int target = ids[i];
      for (int len = 0; len < order_; ++len) {
        if (static_cast<size_t>(len) > i) break;
        std::vector<int> ctx(ids.begin() + (i - static_cast<size_t>(len)), ids.begin() + i);
        auto &stats = counts_[static_cast<size_t>(len)][ctx];
        stats.next[target] += 1;
        stats.total += 1;
      }
    }
  }
}

double NgramModel::cond_logprob(const std::vector<int> &context, int word) const {
  const double v = static_cast<double>(continuation_vocab());
  int len = std::min<int>(order_ - 1, static_cast<int>(context.size()));
  for (; len >= 0; --len) {
    std::vector<int> ctx(context.end() - len, context.end());
    auto it = counts_[static_cast<size_t>(len)].find(ctx);
    if (it == counts_[static_cast<size_t>(len)].end() || it->second.total == 0) {
      continue;  // unseen context: back off
    }
    const auto &stats = it->second;
    auto cit = stats.next.find(word);
    const double c = cit == stats.next.end() ? 0.0 : static_cast<double>(cit->second);
    return std::log((c + add_k_) / (static_cast<double>(stats.total) + add_k_ * v));
  }
  // Unreachable once trained: the empty context always has counts.
  return std::log(add_k_ / (add_k_ * v));
}

double NgramModel::logprob(const std::vector<int> &tokens) const {
  std::vector<int> ids;
  ids.reserve(tokens.size() + 2);
  ids.push_back(bos_id_);
  ids.insert(ids.end(), tokens.begin(), tokens.end());
  ids.push_back(eos_id_);
  double lp = 0.0;
  for (size_t i = 1; i < ids.size(); ++i) {
    const size_t start = i > static_cast<size_t>(order_ - 1) ? i - (order_ - 1) : 0;
    std::vector<int> ctx(ids.begin() + start, ids.begin() + i);
    lp += cond_logprob(ctx, ids[i]);
  }
  return lp;
}

double NgramModel::perplexity(const std::vector<std::vector<int>> &corpus) const {
  if (corpus.empty()) throw DataError("ngram perplexity: empty corpus");
  double total_lp = 0.0;
  int64_t total_tokens = 0;
  for (const auto &sentence : corpus) {
    total_lp += logprob(sentence);
    total_tokens += static_cast<int64_t>(sentence.size()) + 1;  // + </s>
  }
  return std::exp(-total_lp / static_cast<double>(total_tokens));
}

}  // namespace text
}  // namespace asrkit
