// asrkit/sru.cc

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

#include "asrkit/sru.h"

#include <cmath>
#include <string>

namespace asrkit {
namespace lm {

SruCell SruCell::create(int dim, bool with_linear_u) {
  if (dim < 1) throw ConfigError("sru: dim must be >= 1");
  SruCell cell;
  cell.dim = dim;
  if (with_linear_u) cell.w_u = Tensor({dim, 3 * dim});
  cell.v = Tensor({dim});
  cell.v_prime = Tensor({dim});
  cell.b = Tensor({dim});
  cell.b_prime = Tensor({dim});
  return cell;
}

void SruCell::init(Rng &rng) {
  if (!w_u.empty()) {
    const double a = std::sqrt(6.0 / (dim + 3.0 * dim));
    w_u = Tensor::uniform({dim, 3 * dim}, rng, -a, a);
  }
  v = Tensor::uniform({dim}, rng, -0.5, 0.5);
  v_prime = Tensor::uniform({dim}, rng, -0.5, 0.5);
  // Gate biases start at zero.
  b.set_zero();
  b_prime.set_zero();
}

void SruCell::check_finite() const {
  for (const Tensor *t : {&w_u, &v, &v_prime, &b, &b_prime}) {
    if (!t->all_finite()) throw DataError("sru: non-finite parameter");
  }
}

Tensor SruCell::compute_u(const Tensor &x) const {
  if (w_u.empty()) throw ConfigError("sru: cell has no linear u projection");
  return matmul(x, w_u);
}

SruTape sru_cell_forward(const Tensor &x, const SruCell &cell, const Tensor &u,
                         const Tensor &c0) {
  const int d = cell.dim;
  if (x.rank() != 2 || x.dim(1) != d) {
    throw DimensionError("sru_cell_forward: x " + x.shape_str() + " vs dim " +
                         std::to_string(d));
  }
  const int T = x.dim(0);
  if (u.rank() != 2 || u.dim(0) != T || u.dim(1) != 3 * d) {
    throw DimensionError("sru_cell_forward: u " + u.shape_str() + " vs expected [" +
                         std::to_string(T) + "," + std::to_string(3 * d) + "]");
  }
  if (c0.rank() != 1 || c0.dim(0) != d) {
    throw DimensionError("sru_cell_forward: c0 " + c0.shape_str() + " vs dim " +
                         std::to_string(d));
  }

  SruTape tape;
  tape.x = x;
  tape.u = u;
  tape.c0 = c0;
  tape.f = Tensor({T, d});
  tape.r = Tensor({T, d});
  tape.c = Tensor({T, d});
  tape.h = Tensor({T, d});

  for (int t = 0; t < T; ++t) {
    const double *u1 = u.row(t);
    const double *u2 = u1 + d;
    const double *u3 = u1 + 2 * d;
    const double *xr = x.row(t);
    const double *cprev = t == 0 ? c0.data() : tape.c.row(t - 1);
    double *fr = tape.f.row(t);
    double *rr = tape.r.row(t);
    double *cr = tape.c.row(t);
    double *hr = tape.h.row(t);
    for (int j = 0; j < d; ++j) {
      const double f = sigmoid(u1[j] + cell.v.at(j) * cprev[j] + cell.b.at(j));
      const double r = sigmoid(u2[j] + cell.v_prime.at(j) * cprev[j] + cell.b_prime.at(j));
      const double c = f * cprev[j] + (1.0 - f) * u3[j];
      fr[j] = f;
      rr[j] = r;
      cr[j] = c;
      hr[j] = r * c + (1.0 - r) * xr[j];
    }
  }
  return tape;
}

SruGrads sru_cell_backward(const SruCell &cell, const SruTape &tape,
                           const Tensor &grad_h, const Tensor &grad_c_last) {
  const int d = cell.dim;
  const int T = tape.x.dim(0);
  check_same_shape(grad_h, tape.h, "sru_cell_backward");
  if (grad_c_last.rank() != 1 || grad_c_last.dim(0) != d) {
    throw DimensionError("sru_cell_backward: grad_c_last " + grad_c_last.shape_str());
  }

  SruGrads g;
  g.x = Tensor({T, d});
  g.u = Tensor({T, 3 * d});
  g.c0 = Tensor({d});
  g.v = Tensor({d});
  g.v_prime = Tensor({d});
  g.b = Tensor({d});
  g.b_prime = Tensor({d});

  // gc[j] carries dL/dc_t while walking t = T-1 .. 0.
  std::vector<double> gc(grad_c_last.data(), grad_c_last.data() + d);
  for (int t = T - 1; t >= 0; --t) {
    const double *u1 = tape.u.row(t);
    const double *u3 = u1 + 2 * d;
    const double *xr = tape.x.row(t);
    const double *cprev = t == 0 ? tape.c0.data() : tape.c.row(t - 1);
    const double *fr = tape.f.row(t);
    const double *rr = tape.r.row(t);
    const double *cr = tape.c.row(t);
    const double *ghr = grad_h.row(t);
    double *gu1 = g.u.row(t);
    double *gu2 = gu1 + d;
    double *gu3 = gu1 + 2 * d;
    double *gxr = g.x.row(t);
    for (int j = 0; j < d; ++j) {
      const double gh = ghr[j];
      // h_t = r c_t + (1 - r) x_t
      const double gr = gh * (cr[j] - xr[j]);
      gxr[j] = gh * (1.0 - rr[j]);
      double gcj = gc[static_cast<size_t>(j)] + gh * rr[j];
      // c_t = f c_{t-1} + (1 - f) u3_t
      const double gf = gcj * (cprev[j] - u3[j]);
      gu3[j] = gcj * (1.0 - fr[j]);
      // gate pre-activations
      const double ga = gf * fr[j] * (1.0 - fr[j]);
      const double gg = gr * rr[j] * (1.0 - rr[j]);
      gu1[j] = ga;
      gu2[j] = gg;
      g.b.at(j) += ga;
      g.b_prime.at(j) += gg;
      g.v.at(j) += ga * cprev[j];
      g.v_prime.at(j) += gg * cprev[j];
      // into c_{t-1}
      gc[static_cast<size_t>(j)] = gcj * fr[j] + ga * cell.v.at(j) + gg * cell.v_prime.at(j);
    }
  }
  for (int j = 0; j < d; ++j) g.c0.at(j) = gc[static_cast<size_t>(j)];
  return g;
}

}  // namespace lm
}  // namespace asrkit
