// benchmarks/bench_rescore.cc

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

#include "asrkit/rescore.h"
#include "asrkit/rng.h"

namespace {

using namespace asrkit;

rescore::NBestList synthetic_list(int n, uint64_t seed) {
  Rng rng(seed);
  const std::vector<std::string> alphabet = {"A", "B", "C", "D", "E", "F", "G"};
  rescore::NBestList list;
  list.utt_id = "bench";
  for (int i = 0; i < n; ++i) {
    rescore::Hypothesis h;
    const int len = 6 + static_cast<int>(rng.next_below(8));
    for (int w = 0; w < len; ++w) {
      if (w) h.text += " ";
      h.text += alphabet[rng.next_below(alphabet.size())];
    }
    h.words = rescore::split_tokens(h.text);
    h.am_logp = -20.0 * rng.next_double();
    h.original_rank = i;
    h.lm_logps = {{rescore::kLmSruBpe, -10.0 * rng.next_double()},
                  {rescore::kLmSruWord, -10.0 * rng.next_double()},
                  {rescore::kLmTdnnLstm, -10.0 * rng.next_double()}};
    list.hyps.push_back(std::move(h));
  }
  return list;
}

void BM_EditAlign(benchmark::State &state) {
  Rng rng(7);
  const std::vector<std::string> alphabet = {"A", "B", "C", "D"};
  std::vector<std::string> hyp(18), ref(20);
  for (auto &w : hyp) w = alphabet[rng.next_below(alphabet.size())];
  for (auto &w : ref) w = alphabet[rng.next_below(alphabet.size())];
  for (auto _ : state) {
    auto a = rescore::edit_align(hyp, ref);
    benchmark::DoNotOptimize(a.distance);
  }
}
BENCHMARK(BM_EditAlign);

void BM_FullRescorePipeline(benchmark::State &state) {
  const int n = static_cast<int>(state.range(0));
  rescore::NBestList list = synthetic_list(n, 11);
  const rescore::Lambdas lambdas{1.0, 0.5, 0.5};
  for (auto _ : state) {
    const auto ranked = rescore::rank_nbest(list, lambdas);
    const auto final_rank = rescore::expected_wer_rerank(list, ranked, lambdas, 20);
    benchmark::DoNotOptimize(final_rank.data());
  }
}
BENCHMARK(BM_FullRescorePipeline)->Arg(20)->Arg(100);

}  // namespace
