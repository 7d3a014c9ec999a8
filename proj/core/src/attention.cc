// asrkit/attention.cc

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

#include "asrkit/attention.h"

#include <cmath>
#include <string>
#include <vector>

namespace asrkit {
namespace lm {

MhaParams MhaParams::create(int heads, int d_in, int d_proj, int d_out) {
  if (heads < 1) throw ConfigError("mha: heads must be >= 1");
  if (d_in < 1 || d_proj < 1 || d_out < 1) throw ConfigError("mha: widths must be >= 1");
  if (d_proj % heads != 0) {
    throw ConfigError("mha: heads " + std::to_string(heads) + " must divide d_proj " +
                      std::to_string(d_proj));
  }
  MhaParams p;
  p.heads = heads;
  p.d_in = d_in;
  p.d_proj = d_proj;
  p.d_out = d_out;
  p.w_q = Tensor({d_in, d_proj});
  p.w_k = Tensor({d_in, d_proj});
  p.w_v = Tensor({d_in, d_proj});
  p.w_o = Tensor({d_proj, 3 * d_out});
  return p;
}

void MhaParams::init(Rng &rng) {
  const double a_qkv = std::sqrt(6.0 / (d_in + d_proj));
  const double a_o = std::sqrt(6.0 / (d_proj + 3.0 * d_out));
  w_q = Tensor::uniform({d_in, d_proj}, rng, -a_qkv, a_qkv);
  w_k = Tensor::uniform({d_in, d_proj}, rng, -a_qkv, a_qkv);
  w_v = Tensor::uniform({d_in, d_proj}, rng, -a_qkv, a_qkv);
  w_o = Tensor::uniform({d_proj, 3 * d_out}, rng, -a_o, a_o);
}

MhaTape causal_mha(const Tensor &x, const MhaParams &params) {
  if (x.rank() != 2 || x.dim(1) != params.d_in) {
    throw DimensionError("causal_mha: x " + x.shape_str() + " vs d_in " +
                         std::to_string(params.d_in));
  }
  const int T = x.dim(0);
  if (T < 1) throw DimensionError("causal_mha: empty sequence");
  const int dh = params.head_dim();
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

  MhaTape tape;
  tape.x = x;
  tape.q = matmul(x, params.w_q);
  tape.k = matmul(x, params.w_k);
  tape.v = matmul(x, params.w_v);
  tape.ctx = Tensor({T, params.d_proj});
  tape.attn.assign(static_cast<size_t>(params.heads),
                   std::vector<double>(static_cast<size_t>(T) * (T + 1) / 2));

  std::vector<double> scores(static_cast<size_t>(T));
  for (int h = 0; h < params.heads; ++h) {
    const int off = h * dh;
    auto &attn = tape.attn[static_cast<size_t>(h)];
    for (int i = 0; i < T; ++i) {
      const double *qi = tape.q.row(i) + off;
      // Only positions j <= i ever enter the scores.
      for (int j = 0; j <= i; ++j) {
        const double *kj = tape.k.row(j) + off;
        double s = 0.0;
        for (int e = 0; e < dh; ++e) s += qi[e] * kj[e];
        scores[static_cast<size_t>(j)] = s * scale;
      }
      double *arow = attn.data() + static_cast<size_t>(i) * (i + 1) / 2;
      softmax_span(scores.data(), arow, i + 1);
      double *ctx = tape.ctx.row(i) + off;
      for (int j = 0; j <= i; ++j) {
        const double a = arow[j];
        const double *vj = tape.v.row(j) + off;
        for (int e = 0; e < dh; ++e) ctx[e] += a * vj[e];
      }
    }
  }
  tape.u = matmul(tape.ctx, params.w_o);
  return tape;
}

MhaGrads causal_mha_backward(const MhaParams &params, const MhaTape &tape,
                             const Tensor &grad_u) {
  check_same_shape(grad_u, tape.u, "causal_mha_backward");
  const int T = tape.x.dim(0);
  const int dh = params.head_dim();
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

  MhaGrads g;
  g.w_o = matmul(transpose(tape.ctx), grad_u);
  Tensor g_ctx = matmul(grad_u, transpose(params.w_o));
  Tensor g_q({T, params.d_proj});
  Tensor g_k({T, params.d_proj});
  Tensor g_v({T, params.d_proj});

  std::vector<double> ga(static_cast<size_t>(T));
  for (int h = 0; h < params.heads; ++h) {
    const int off = h * dh;
    const auto &attn = tape.attn[static_cast<size_t>(h)];
    for (int i = 0; i < T; ++i) {
      const double *arow = attn.data() + static_cast<size_t>(i) * (i + 1) / 2;
      const double *gctx = g_ctx.row(i) + off;
      // Through the value mix: ga_j = <gctx, v_j>, gv_j += a_j gctx.
      for (int j = 0; j <= i; ++j) {
        const double *vj = tape.v.row(j) + off;
        double s = 0.0;
        for (int e = 0; e < dh; ++e) s += gctx[e] * vj[e];
        ga[static_cast<size_t>(j)] = s;
        double *gvj = g_v.row(j) + off;
        const double a = arow[j];
        for (int e = 0; e < dh; ++e) gvj[e] += a * gctx[e];
      }
      // Softmax backward over the causal row.
      double dot = 0.0;
      for (int j = 0; j <= i; ++j) dot += ga[static_cast<size_t>(j)] * arow[j];
      double *gqi = g_q.row(i) + off;
      const double *qi = tape.q.row(i) + off;
      for (int j = 0; j <= i; ++j) {
        const double gs = arow[j] * (ga[static_cast<size_t>(j)] - dot) * scale;
        const double *kj = tape.k.row(j) + off;
        double *gkj = g_k.row(j) + off;
        for (int e = 0; e < dh; ++e) {
          gqi[e] += gs * kj[e];
          gkj[e] += gs * qi[e];
        }
      }
    }
  }

  Tensor xt = transpose(tape.x);
  g.w_q = matmul(xt, g_q);
  g.w_k = matmul(xt, g_k);
  g.w_v = matmul(xt, g_v);
  g.x = matmul(g_q, transpose(params.w_q));
  add_inplace(g.x, matmul(g_k, transpose(params.w_k)));
  add_inplace(g.x, matmul(g_v, transpose(params.w_v)));
  return g;
}

}  // namespace lm
}  // namespace asrkit
