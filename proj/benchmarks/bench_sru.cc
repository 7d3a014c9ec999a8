// benchmarks/bench_sru.cc

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

#include "asrkit/attention.h"
#include "asrkit/sru.h"

namespace {

using namespace asrkit;

void BM_SruCellForward(benchmark::State &state) {
  const int T = 256, d = static_cast<int>(state.range(0));
  lm::SruCell cell = lm::SruCell::create(d, false);
  Rng rng(1);
  cell.init(rng);
  Tensor x = Tensor::uniform({T, d}, rng, -1.0, 1.0);
  Tensor u = Tensor::uniform({T, 3 * d}, rng, -1.0, 1.0);
  Tensor c0({d});
  for (auto _ : state) {
    lm::SruTape tape = lm::sru_cell_forward(x, cell, u, c0);
    benchmark::DoNotOptimize(tape.h.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(T) * d);
}
BENCHMARK(BM_SruCellForward)->Arg(128)->Arg(512);

void BM_CausalMha(benchmark::State &state) {
  const int T = static_cast<int>(state.range(0)), d = 64;
  lm::MhaParams params = lm::MhaParams::create(2, d, d, d);
  Rng rng(2);
  params.init(rng);
  Tensor x = Tensor::uniform({T, d}, rng, -1.0, 1.0);
  for (auto _ : state) {
    lm::MhaTape tape = lm::causal_mha(x, params);
    benchmark::DoNotOptimize(tape.u.data());
  }
}
BENCHMARK(BM_CausalMha)->Arg(64)->Arg(275);

}  // namespace
