// asrkit/lm.h

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

#ifndef ASRKIT_LM_H_
#define ASRKIT_LM_H_

#include <cstdint>
#include <string>
#include <vector>

#include "asrkit/attention.h"
#include "asrkit/sru.h"
#include "asrkit/text.h"

namespace asrkit {
namespace lm {

// Named view of one trainable tensor and its gradient buffer.
struct ParamRef {
  std::string name;
  Tensor *value;
  Tensor *grad;
};

// One self-attentive SRU layer: causal multi-head attention produces the
// u1/u2/u3 projections and the SRU recurrence consumes them.  The h output
// already carries the highway term (1 - r) . x; no extra residual or layer
// norm is added around the attention.
struct SelfAttentiveSruBlock {
  MhaParams attn;
  SruCell cell;  // elementwise parameters only (w_u stays empty)

  static SelfAttentiveSruBlock create(int dim, int proj_dim, int heads);
  // h for the next layer; tapes are kept for the backward pass.
  Tensor forward(const Tensor &x, MhaTape *attn_tape, SruTape *sru_tape) const;
};

// Stacked self-attentive SRU language model over a fixed vocabulary.
// Sequences are scored utterance-wise: every utterance is wrapped with <s>
// and </s> and no state crosses sentence boundaries.  Token order enters
// only through the recurrence; there are no positional encodings.
class LmModel {
 public:
  struct Config {
    int layers = 2;
    int dim = 64;       // embedding width and recurrence width
    int proj_dim = 64;  // attention width across heads
    int heads = 2;
    bool tie_weights = true;  // output projection = embedding transpose
    double dropout = 0.0;     // training-time only, applied to block outputs
    uint64_t seed = 0;
  };

  LmModel(const Config &config, text::Vocabulary vocab);

  const Config &config() const { return config_; }
  const text::Vocabulary &vocab() const { return vocab_; }
  int vocab_size() const { return vocab_.size(); }

  // Deterministic parameter draw; records the seed in the config.
  void init_params(uint64_t seed);

  // Natural-log probability of the utterance: sum over every real token and
  // the closing </s>, each predicted from the left context.
  double sequence_logprob(const std::vector<int> &tokens) const;

  // Per-step conditionals log P(w_t | w_{<t}) including the </s> step.
  std::vector<double> conditional_logprobs(const std::vector<int> &tokens) const;

  // exp(-total logprob / total predicted tokens) pooled over the corpus.
  double perplexity(const std::vector<std::vector<int>> &corpus) const;

  // Cross-entropy forward/backward for one utterance.  Adds loss_scale *
  // d(-logprob)/dtheta into the gradient buffers and returns the summed
  // negative log-likelihood plus the number of predicted tokens.  When the
  // config sets a dropout rate, dropout_rng must be supplied and inverted
  // dropout masks the block outputs (scoring paths never apply dropout).
  std::pair<double, int> forward_backward(const std::vector<int> &tokens, double loss_scale,
                                          Rng *dropout_rng = nullptr);

  std::vector<ParamRef> parameters();
  void zero_grads();

  // Manifest + blob checkpoint with the vocabulary embedded.
  void save(const std::string &prefix) const;
  static LmModel load(const std::string &prefix);

 private:
  struct BlockGrads {
    Tensor w_q, w_k, w_v, w_o;
    Tensor v, v_prime, b, b_prime;
  };

  Tensor embed(const std::vector<int> &inputs) const;
  Tensor output_logits(const Tensor &h) const;
  void check_ids(const std::vector<int> &tokens) const;

  Config config_;
  text::Vocabulary vocab_;
  Tensor embedding_;  // [V, dim]
  std::vector<SelfAttentiveSruBlock> blocks_;
  Tensor out_proj_;  // [dim, V]; empty when tied
  Tensor out_bias_;  // [V]

  Tensor g_embedding_;
  std::vector<BlockGrads> block_grads_;
  Tensor g_out_proj_;
  Tensor g_out_bias_;
};

}  // namespace lm
}  // namespace asrkit

#endif  // ASRKIT_LM_H_
