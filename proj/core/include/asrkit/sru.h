// asrkit/sru.h

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

#ifndef ASRKIT_SRU_H_
#define ASRKIT_SRU_H_

#include "asrkit/ops.h"
#include "asrkit/tensor.h"

namespace asrkit {
namespace lm {

// Simple recurrent unit.  The recurrence per step, all products elementwise:
//
//   f_t = sigmoid(u1_t + v  . c_{t-1} + b)
//   r_t = sigmoid(u2_t + v' . c_{t-1} + b')
//   c_t = f_t . c_{t-1} + (1 - f_t) . u3_t
//   h_t = r_t . c_t     + (1 - r_t) . x_t
//
// The u vectors come either from the cell's own linear projection
// (compute_u, u = x [W1 W2 W3]) or from an attention module; the recurrence
// itself only touches the elementwise parameters, so every hidden dimension
// evolves independently.
struct SruCell {
  int dim = 0;
  // [dim, 3*dim]; columns grouped as [W1 | W2 | W3].  Empty when the u
  // projection is produced elsewhere (the self-attentive block).
  Tensor w_u;
  Tensor v, v_prime;  // [dim]
  Tensor b, b_prime;  // [dim]

  static SruCell create(int dim, bool with_linear_u);
  void init(Rng &rng);
  void check_finite() const;

  // u1_t, u2_t, u3_t stacked as one [T, 3*dim] row per step.
  Tensor compute_u(const Tensor &x) const;
};

// Everything the backward pass needs from a forward run.
struct SruTape {
  Tensor x, u, c0;
  Tensor f, r, c;  // [T, dim] each
  Tensor h;
};

struct SruGrads {
  Tensor x, u, c0;
  Tensor v, v_prime, b, b_prime;
};

// Runs the recurrence; x is [T, dim], u is [T, 3*dim], c0 is [dim].
SruTape sru_cell_forward(const Tensor &x, const SruCell &cell, const Tensor &u,
                         const Tensor &c0);

// Reverse-mode gradients given dL/dh ([T, dim]) and dL/dc_T ([dim]).
SruGrads sru_cell_backward(const SruCell &cell, const SruTape &tape,
                           const Tensor &grad_h, const Tensor &grad_c_last);

}  // namespace lm
}  // namespace asrkit

#endif  // ASRKIT_SRU_H_
