// asrkit/ops.h

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

#ifndef ASRKIT_OPS_H_
#define ASRKIT_OPS_H_

#include <vector>

#include "asrkit/tensor.h"

namespace asrkit {

// Deterministic dense kernels.  Every reduction accumulates in ascending
// index order, so repeat invocations are bitwise identical.

// c[i,j] = sum_p a[i,p] * b[p,j], p ascending.  a is [m,k], b is [k,n].
Tensor matmul(const Tensor &a, const Tensor &b);

// 2-D transpose.
Tensor transpose(const Tensor &a);

// Row-stable softmax of a length-n vector: exp(v - max) normalized.
Tensor softmax_row(const Tensor &v);

// max(v) + log sum exp(v - max); exact for n = 1.
double logsumexp(const Tensor &v);

// Span forms shared with the attention and LM internals.
void softmax_span(const double *in, double *out, int n);
double logsumexp_span(const double *in, int n);

// Context convolution over time.  x is [T, d_in]; offsets are strictly
// increasing frame offsets; w is [len(offsets) * d_in, d_out] with rows
// grouped by offset; bias is [d_out].  Out-of-range frames read as zeros.
//   y[t] = bias + sum_o w_o^T x[t + o]
Tensor conv1d_ctx(const Tensor &x, const std::vector<int> &offsets,
                  const Tensor &w, const Tensor &bias);

// 3x3 cross-correlation with zero padding of 1 on both edges.  x is
// [T, F, c_in], kernels is [3, 3, c_in, c_out], bias is [c_out].  Stride 1
// in time; freq_stride in {1, 2} subsamples frequency to ceil(F/stride).
Tensor conv2d_3x3(const Tensor &x, const Tensor &kernels, const Tensor &bias,
                  int freq_stride);

// y[t,i] = gamma[i] * (x[t,i] - mean[i]) / sqrt(var[i] + eps) + beta[i].
Tensor batchnorm_inference(const Tensor &x, const Tensor &gamma, const Tensor &beta,
                           const Tensor &mean, const Tensor &var, double eps);

Tensor relu(const Tensor &x);
double sigmoid(double x);

// Elementwise helpers over same-shape tensors.
Tensor add(const Tensor &a, const Tensor &b);
void add_inplace(Tensor &a, const Tensor &b);
void scale_inplace(Tensor &a, double s);
void axpy_inplace(Tensor &a, double s, const Tensor &b);  // a += s * b

}  // namespace asrkit

#endif  // ASRKIT_OPS_H_
