// asrkit/ngram.h

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

#ifndef ASRKIT_NGRAM_H_
#define ASRKIT_NGRAM_H_

#include <map>
#include <vector>

#include "asrkit/text.h"

namespace asrkit {
namespace text {

// Add-k smoothed n-gram scorer.  Demo plumbing: it stands in for an external
// n-gram LM stream and provides the bigram baseline for toy training runs.
//
//   P(w | ctx) = (count(ctx, w) + k) / (count(ctx) + k * V)
//
// where V excludes <s> (nothing ever predicts <s>).  As add_k approaches 0
// the estimates tend to the unsmoothed ratios count(ctx, w) / count(ctx),
// with unseen continuations of a seen context diverging to -inf; add_k must
// therefore stay positive.  Contexts never seen in training back off to the
// next shorter context; the empty context is always available.
class NgramModel {
 public:
  // Sentences are token-id sequences without <s>/</s>; wrapping happens here.
  NgramModel(int order, double add_k, const Vocabulary &vocab,
             const std::vector<std::vector<int>> &corpus);

  int order() const { return order_; }
  double add_k() const { return add_k_; }
  int continuation_vocab() const { return vocab_size_ - 1; }

  // Natural-log probability of one sentence, including the </s> term.
  double logprob(const std::vector<int> &tokens) const;

  // log P(w | context) with backoff; context is most-recent-last.
  double cond_logprob(const std::vector<int> &context, int word) const;

  // Pooled perplexity: one predicted token per real token plus </s>.
  double perplexity(const std::vector<std::vector<int>> &corpus) const;

 private:
  int order_;
  double add_k_;
  int vocab_size_;
  int bos_id_, eos_id_;
  // counts_[len] maps a length-len context to (continuation counts, total).
  struct ContextStats {
    std::map<int, int64_t> next;
    int64_t total = 0;
  };
  std::vector<std::map<std::vector<int>, ContextStats>> counts_;
};

}  // namespace text
}  // namespace asrkit

#endif  // ASRKIT_NGRAM_H_
