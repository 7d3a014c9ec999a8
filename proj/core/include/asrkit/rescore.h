// asrkit/rescore.h

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

#ifndef ASRKIT_RESCORE_H_
#define ASRKIT_RESCORE_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "asrkit/error.h"
#include "json.hpp"

namespace asrkit {
namespace rescore {

// N-best rescoring over natural-log scores throughout:
//
//   score(S)     = am_logp + alpha * log P_LM(S)
//   log P_LM(S)  = beta * log P_SRU*(S) + (1 - beta) * L_tdnn_lstm
//   log P_SRU*(S) = logsumexp(log(gamma) + L_bpe, log(1-gamma) + L_word)
//
// The gamma mix is probability-domain (the two SRU streams are linearly
// interpolated); the beta mix is log-domain (geometric).  gamma in {0, 1}
// and beta = 1 drop the corresponding score requirements.

inline constexpr const char *kLmTdnnLstm = "tdnn_lstm";
inline constexpr const char *kLmSruBpe = "sru_bpe";
inline constexpr const char *kLmSruWord = "sru_word";
inline constexpr const char *kLmNgram = "ngram";

struct Hypothesis {
  std::string text;  // normalized words joined by single spaces
  std::vector<std::string> words;
  double am_logp = 0.0;
  std::map<std::string, double> lm_logps;
  int original_rank = 0;

  bool has_lm(const std::string &key) const { return lm_logps.count(key) > 0; }
};

struct NBestList {
  std::string utt_id;
  std::vector<Hypothesis> hyps;
  std::optional<std::string> reference;
};

struct Lambdas {
  double alpha = 1.0;  // LM weight, >= 0
  double beta = 1.0;   // SRU* vs TDNN-LSTM, in [0, 1]
  double gamma = 1.0;  // BPE vs word SRU, in [0, 1]
  // Experimentation-only additive length term (score += wip * |words|);
  // off by default and excluded from grid search.
  double word_insertion_penalty = 0.0;
};

void validate(const Lambdas &lambdas);

// Levenshtein alignment with unit costs.  Among minimal edit paths the
// backtrace prefers substitution over insertion over deletion.  wer is
// distance / |ref|; an empty reference scores |hyp| insertions with
// wer = |hyp| (flagged in reports).
struct Alignment {
  int distance = 0;
  int substitutions = 0;
  int insertions = 0;
  int deletions = 0;
  double wer = 0.0;
  bool empty_reference = false;
};

Alignment edit_align(const std::vector<std::string> &hyp, const std::vector<std::string> &ref);

std::vector<std::string> split_tokens(const std::string &text);

// Combined log score of one hypothesis; throws DataError naming the
// utterance and the missing LM key when a required score is absent.
double combine_scores(const Hypothesis &hyp, const Lambdas &lambdas,
                      const std::string &utt_id = "");

// Indices of list.hyps sorted by descending combined score; exact ties keep
// ascending original_rank.
std::vector<int> rank_nbest(const NBestList &list, const Lambdas &lambdas);

// Posteriors over all hypotheses: softmax of the combined log scores.
std::vector<double> posteriors(const NBestList &list, const Lambdas &lambdas);

// Pairwise WERs: wer_matrix[s][i] = err(hyp_s | ref = hyp_i).
std::vector<std::vector<double>> pairwise_wer(const NBestList &list);

// Expected-word-error reranking of the current top_k: posteriors are
// computed over all N hypotheses, each candidate's expected error is the
// posterior-weighted WER against every hypothesis as reference, and the
// top_k block is reordered by ascending expected error (ties keep the prior
// rank).  Positions beyond top_k stay put.  posteriors_over_top_k restricts
// the posterior normalization (and the reference set) to the current top_k
// instead of all N.
std::vector<int> expected_wer_rerank(const NBestList &list, const std::vector<int> &ranked,
                                     const Lambdas &lambdas, int top_k = 20,
                                     const std::vector<std::vector<double>> *wer_cache = nullptr,
                                     bool posteriors_over_top_k = false);

struct GridSpec {
  std::vector<double> alphas;
  std::vector<double> betas;
  std::vector<double> gammas;

  // alpha 0..2 step 0.2; beta, gamma 0..1 step 0.1.
  static GridSpec default_grid();
};

struct GridPoint {
  Lambdas lambdas;
  double wer = 0.0;
};

struct GridResult {
  Lambdas best;
  double best_wer = 0.0;
  std::vector<GridPoint> table;
};

// Corpus WER of the full pipeline (rank + expected-WER rerank) at every grid
// point; ties break toward the lexicographically smallest (alpha, beta,
// gamma).  Every list needs a reference.
GridResult grid_search(const std::vector<NBestList> &dev, const GridSpec &grid, int top_k = 20);

// Staged evaluation mirroring the rescoring ablation: AM-only ranking, the
// score fusion, then expected-WER reranking.
struct UttEval {
  std::string utt_id;
  std::string selected_am_only;
  std::string selected_rescored;
  std::string selected_mbr;
  Alignment alignment;  // final stage top-1 vs reference
};

struct EvalReport {
  Lambdas lambdas;
  int top_k = 20;
  double wer_am_only = 0.0;
  double wer_rescored = 0.0;
  double wer_mbr = 0.0;
  std::vector<UttEval> utterances;

  nlohmann::json to_json() const;
};

EvalReport evaluate(const std::vector<NBestList> &corpus, const Lambdas &lambdas,
                    int top_k = 20);

// JSON-lines N-best IO; one hypothesis per line:
//   {"utt": id, "rank": int, "text": "A B C", "am_logp": float, "lm": {...}}
// Utterance order follows first appearance; each utterance keeps at most
// n_cap hypotheses (lowest ranks win).
std::vector<NBestList> read_nbest(const std::string &path, int n_cap = 100);
void write_nbest(const std::string &path, const std::vector<NBestList> &lists);

// Reference file: lines "utt<TAB>normalized transcript".
std::map<std::string, std::string> read_refs(const std::string &path);

// Attaches references; throws DataError listing utterances without one when
// require_all is set.
void attach_refs(std::vector<NBestList> &lists,
                 const std::map<std::string, std::string> &refs, bool require_all);

}  // namespace rescore
}  // namespace asrkit

#endif  // ASRKIT_RESCORE_H_
