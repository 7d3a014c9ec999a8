// asrkit/ops.cc

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

#include "asrkit/ops.h"

#include <cmath>
#include <string>

namespace asrkit {

namespace {
void require_rank(const Tensor &t, int rank, const char *where) {
  if (t.rank() != rank) {
    throw DimensionError(std::string(where) + ": expected rank " + std::to_string(rank) +
                         ", got shape " + t.shape_str());
  }
}
}  // namespace

Tensor matmul(const Tensor &a, const Tensor &b) {
  require_rank(a, 2, "matmul");
  require_rank(b, 2, "matmul");
  const int m = a.dim(0), k = a.dim(1), n = b.dim(1);
  if (b.dim(0) != k) {
    throw DimensionError("matmul: shape mismatch " + a.shape_str() + " x " + b.shape_str());
  }
  Tensor c({m, n});
  const double *pa = a.data();
  const double *pb = b.data();
  double *pc = c.data();
  // i-k-j order: each c[i,j] accumulates over p ascending, matching the
  // documented accumulation order while staying cache friendly.
  for (int i = 0; i < m; ++i) {
    const double *arow = pa + static_cast<size_t>(i) * k;
    double *crow = pc + static_cast<size_t>(i) * n;
    for (int p = 0; p < k; ++p) {
      const double aip = arow[p];
      if (aip == 0.0) continue;
      const double *brow = pb + static_cast<size_t>(p) * n;
      for (int j = 0; j < n; ++j) crow[j] += aip * brow[j];
    }
  }
  return c;
}

Tensor transpose(const Tensor &a) {
  require_rank(a, 2, "transpose");
  const int m = a.dim(0), n = a.dim(1);
  Tensor t({n, m});
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) t.at(j, i) = a.at(i, j);
  return t;
}

void softmax_span(const double *in, double *out, int n) {
  double m = in[0];
  for (int i = 1; i < n; ++i) m = std::max(m, in[i]);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    out[i] = std::exp(in[i] - m);
    sum += out[i];
  }
  for (int i = 0; i < n; ++i) out[i] /= sum;
}

double logsumexp_span(const double *in, int n) {
  if (n == 1) return in[0];
  double m = in[0];
  for (int i = 1; i < n; ++i) m = std::max(m, in[i]);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += std::exp(in[i] - m);
  return m + std::log(sum);
}

Tensor softmax_row(const Tensor &v) {
  require_rank(v, 1, "softmax_row");
  if (v.dim(0) < 1) throw DimensionError("softmax_row: empty input");
  Tensor out({v.dim(0)});
  softmax_span(v.data(), out.data(), v.dim(0));
  return out;
}

double logsumexp(const Tensor &v) {
  require_rank(v, 1, "logsumexp");
  if (v.dim(0) < 1) throw DimensionError("logsumexp: empty input");
  return logsumexp_span(v.data(), v.dim(0));
}

Tensor conv1d_ctx(const Tensor &x, const std::vector<int> &offsets,
                  const Tensor &w, const Tensor &bias) {
  require_rank(x, 2, "conv1d_ctx");
  require_rank(w, 2, "conv1d_ctx");
  require_rank(bias, 1, "conv1d_ctx");
  if (offsets.empty()) throw ConfigError("conv1d_ctx: offsets must be non-empty");
  for (size_t i = 1; i < offsets.size(); ++i) {
    if (offsets[i] <= offsets[i - 1]) {
      throw ConfigError("conv1d_ctx: offsets must be strictly increasing");
    }
  }
  const int T = x.dim(0), d_in = x.dim(1);
  const int n_off = static_cast<int>(offsets.size());
  if (w.dim(0) != n_off * d_in) {
    throw DimensionError("conv1d_ctx: weight rows " + std::to_string(w.dim(0)) +
                         " != offsets*d_in = " + std::to_string(n_off * d_in));
  }
  const int d_out = w.dim(1);
  if (bias.dim(0) != d_out) {
    throw DimensionError("conv1d_ctx: bias " + bias.shape_str() + " vs d_out " +
                         std::to_string(d_out));
  }
  Tensor y({T, d_out});
  for (int t = 0; t < T; ++t) {
    double *yrow = y.row(t);
    for (int j = 0; j < d_out; ++j) yrow[j] = bias.at(j);
    for (int oi = 0; oi < n_off; ++oi) {
      const int src = t + offsets[oi];
      if (src < 0 || src >= T) continue;  // zero padding
      const double *xrow = x.row(src);
      for (int i = 0; i < d_in; ++i) {
        const double xv = xrow[i];
        if (xv == 0.0) continue;
        const double *wrow = w.row(oi * d_in + i);
        for (int j = 0; j < d_out; ++j) yrow[j] += xv * wrow[j];
      }
    }
  }
  return y;
}

Tensor conv2d_3x3(const Tensor &x, const Tensor &kernels, const Tensor &bias,
                  int freq_stride) {
  require_rank(x, 3, "conv2d_3x3");
  if (kernels.rank() != 4 || kernels.dim(0) != 3 || kernels.dim(1) != 3) {
    throw DimensionError("conv2d_3x3: kernels must be [3,3,c_in,c_out], got " +
                         kernels.shape_str());
  }
  if (freq_stride != 1 && freq_stride != 2) {
    throw ConfigError("conv2d_3x3: freq_stride must be 1 or 2, got " +
                      std::to_string(freq_stride));
  }
  const int T = x.dim(0), F = x.dim(1), c_in = x.dim(2);
  const int c_out = kernels.dim(3);
  if (kernels.dim(2) != c_in) {
    throw DimensionError("conv2d_3x3: kernel c_in " + std::to_string(kernels.dim(2)) +
                         " vs input " + x.shape_str());
  }
  if (bias.dim(0) != c_out) {
    throw DimensionError("conv2d_3x3: bias " + bias.shape_str() + " vs c_out " +
                         std::to_string(c_out));
  }
  const int F_out = (F + freq_stride - 1) / freq_stride;
  Tensor y({T, F_out, c_out});
  for (int t = 0; t < T; ++t) {
    for (int fo = 0; fo < F_out; ++fo) {
      double *ycell = y.data() + (static_cast<size_t>(t) * F_out + fo) * c_out;
      for (int co = 0; co < c_out; ++co) ycell[co] = bias.at(co);
      const int fc = fo * freq_stride;  // frequency center
      for (int dt = 0; dt < 3; ++dt) {
        const int ts = t + dt - 1;
        if (ts < 0 || ts >= T) continue;
        for (int df = 0; df < 3; ++df) {
          const int fs = fc + df - 1;
          if (fs < 0 || fs >= F) continue;
          const double *xcell = x.data() + (static_cast<size_t>(ts) * F + fs) * c_in;
          const double *kcell =
              kernels.data() + (static_cast<size_t>(dt) * 3 + df) * c_in * c_out;
          for (int ci = 0; ci < c_in; ++ci) {
            const double xv = xcell[ci];
            if (xv == 0.0) continue;
            const double *krow = kcell + static_cast<size_t>(ci) * c_out;
            for (int co = 0; co < c_out; ++co) ycell[co] += xv * krow[co];
          }
        }
      }
    }
  }
  return y;
}

Tensor batchnorm_inference(const Tensor &x, const Tensor &gamma, const Tensor &beta,
                           const Tensor &mean, const Tensor &var, double eps) {
  require_rank(x, 2, "batchnorm_inference");
  const int T = x.dim(0), d = x.dim(1);
  if (gamma.dim(0) != d || beta.dim(0) != d || mean.dim(0) != d || var.dim(0) != d) {
    throw DimensionError("batchnorm_inference: parameter width mismatch vs " + x.shape_str());
  }
  if (eps <= 0.0) throw ConfigError("batchnorm_inference: eps must be > 0");
  for (int i = 0; i < d; ++i) {
    if (var.at(i) < 0.0) {
      throw DataError("batchnorm_inference: negative variance at dim " + std::to_string(i));
    }
  }
  Tensor y({T, d});
  std::vector<double> inv_std(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) inv_std[static_cast<size_t>(i)] = 1.0 / std::sqrt(var.at(i) + eps);
  for (int t = 0; t < T; ++t) {
    const double *xr = x.row(t);
    double *yr = y.row(t);
    for (int i = 0; i < d; ++i) {
      yr[i] = gamma.at(i) * (xr[i] - mean.at(i)) * inv_std[static_cast<size_t>(i)] + beta.at(i);
    }
  }
  return y;
}

Tensor relu(const Tensor &x) {
  Tensor y = x;
  double *p = y.data();
  for (int64_t i = 0; i < y.size(); ++i) p[i] = p[i] > 0.0 ? p[i] : 0.0;
  return y;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Tensor add(const Tensor &a, const Tensor &b) {
  check_same_shape(a, b, "add");
  Tensor c = a;
  const double *pb = b.data();
  double *pc = c.data();
  for (int64_t i = 0; i < c.size(); ++i) pc[i] += pb[i];
  return c;
}

void add_inplace(Tensor &a, const Tensor &b) {
  check_same_shape(a, b, "add_inplace");
  double *pa = a.data();
  const double *pb = b.data();
  for (int64_t i = 0; i < a.size(); ++i) pa[i] += pb[i];
}

void scale_inplace(Tensor &a, double s) {
  double *pa = a.data();
  for (int64_t i = 0; i < a.size(); ++i) pa[i] *= s;
}

void axpy_inplace(Tensor &a, double s, const Tensor &b) {
  check_same_shape(a, b, "axpy_inplace");
  double *pa = a.data();
  const double *pb = b.data();
  for (int64_t i = 0; i < a.size(); ++i) pa[i] += s * pb[i];
}

}  // namespace asrkit
