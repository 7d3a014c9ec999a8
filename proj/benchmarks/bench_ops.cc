// benchmarks/bench_ops.cc

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

#include <benchmark/benchmark.h>

#include "asrkit/ops.h"
#include "asrkit/rng.h"

namespace {

using asrkit::Rng;
using asrkit::Tensor;

void BM_Matmul(benchmark::State &state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(1);
  Tensor a = Tensor::uniform({n, n}, rng, -1.0, 1.0);
  Tensor b = Tensor::uniform({n, n}, rng, -1.0, 1.0);
  for (auto _ : state) {
    Tensor c = asrkit::matmul(a, b);
    benchmark::DoNotOptimize(c.data());
  }
  state.SetItemsProcessed(state.iterations() * 2LL * n * n * n);
}
BENCHMARK(BM_Matmul)->Arg(64)->Arg(128)->Arg(256);

void BM_Conv1dCtx(benchmark::State &state) {
  const int T = 400, d = 512, b = 128;
  Rng rng(2);
  Tensor x = Tensor::uniform({T, d}, rng, -1.0, 1.0);
  Tensor w = Tensor::uniform({2 * d, b}, rng, -0.1, 0.1);
  Tensor bias({b});
  for (auto _ : state) {
    Tensor y = asrkit::conv1d_ctx(x, {-6, 0}, w, bias);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * 2LL * T * 2 * d * b);
}
BENCHMARK(BM_Conv1dCtx);

void BM_Conv2d3x3(benchmark::State &state) {
  const int T = 64, F = 40, ci = 32, co = 32;
  Rng rng(3);
  Tensor x = Tensor::uniform({T, F, ci}, rng, -1.0, 1.0);
  Tensor k = Tensor::uniform({3, 3, ci, co}, rng, -0.1, 0.1);
  Tensor bias({co});
  for (auto _ : state) {
    Tensor y = asrkit::conv2d_3x3(x, k, bias, 2);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_Conv2d3x3);

void BM_SoftmaxRow(benchmark::State &state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(4);
  Tensor v = Tensor::uniform({n}, rng, -5.0, 5.0);
  for (auto _ : state) {
    Tensor out = asrkit::softmax_row(v);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_SoftmaxRow)->Arg(128)->Arg(10000);

}  // namespace
