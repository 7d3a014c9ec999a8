// asrkit/attention.h

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

#ifndef ASRKIT_ATTENTION_H_
#define ASRKIT_ATTENTION_H_

#include "asrkit/ops.h"
#include "asrkit/tensor.h"

namespace asrkit {
namespace lm {

// Causal multi-head attention that replaces the SRU's linear u projection:
// the head outputs are concatenated and projected to 3*d_out, producing
// u1, u2, u3 jointly.  Causality is structural: position i only ever reads
// scores for j <= i, so outputs are bitwise invariant to future positions.
// Projections carry no biases (the SRU gates own the bias terms).
struct MhaParams {
  int heads = 1;
  int d_in = 0;
  int d_proj = 0;  // total attention width across heads
  int d_out = 0;   // recurrence width; the output projection is [d_proj, 3*d_out]
  Tensor w_q, w_k, w_v;  // [d_in, d_proj]
  Tensor w_o;            // [d_proj, 3*d_out]

  static MhaParams create(int heads, int d_in, int d_proj, int d_out);
  void init(Rng &rng);
  int head_dim() const { return d_proj / heads; }
};

struct MhaTape {
  Tensor x;        // [T, d_in]
  Tensor q, k, v;  // [T, d_proj]
  // attn[h] is a packed lower triangle: row i holds weights for j = 0..i.
  std::vector<std::vector<double>> attn;  // per head, size T*(T+1)/2
  Tensor ctx;      // [T, d_proj]
  Tensor u;        // [T, 3*d_out]
};

struct MhaGrads {
  Tensor x;
  Tensor w_q, w_k, w_v, w_o;
};

// Forward pass; x is [T, d_in], result tape holds u = [T, 3*d_out].
MhaTape causal_mha(const Tensor &x, const MhaParams &params);

// Reverse-mode gradients given dL/du.
MhaGrads causal_mha_backward(const MhaParams &params, const MhaTape &tape,
                             const Tensor &grad_u);

}  // namespace lm
}  // namespace asrkit

#endif  // ASRKIT_ATTENTION_H_
