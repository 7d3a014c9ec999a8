// asrkit/rescore.cc

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

#include "asrkit/rescore.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace asrkit {
namespace rescore {

void validate(const Lambdas &lambdas) {
  if (lambdas.alpha < 0.0) throw UsageError("lambdas: alpha must be >= 0");
  if (lambdas.beta < 0.0 || lambdas.beta > 1.0) throw UsageError("lambdas: beta must be in [0,1]");
  if (lambdas.gamma < 0.0 || lambdas.gamma > 1.0) {
    throw UsageError("lambdas: gamma must be in [0,1]");
  }
}

std::vector<std::string> split_tokens(const std::string &text) {
  std::vector<std::string> words;
  std::string cur;
  for (char c : text) {
    if (c == ' ' || c == '\t') {
      if (!cur.empty()) words.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) words.push_back(cur);
  return words;
}

Alignment edit_align(const std::vector<std::string> &hyp, const std::vector<std::string> &ref) {
  Alignment out;
  const int H = static_cast<int>(hyp.size());
  const int R = static_cast<int>(ref.size());
  if (R == 0) {
    out.distance = H;
    out.insertions = H;
    out.wer = static_cast<double>(H);  // documented empty-reference convention
    out.empty_reference = true;
    return out;
  }

  // d[i][j]: edits between hyp[0..i) and ref[0..j).
  std::vector<std::vector<int>> d(static_cast<size_t>(H) + 1,
                                  std::vector<int>(static_cast<size_t>(R) + 1));
  for (int i = 0; i <= H; ++i) d[static_cast<size_t>(i)][0] = i;
  for (int j = 0; j <= R; ++j) d[0][static_cast<size_t>(j)] = j;
  for (int i = 1; i <= H; ++i) {
    for (int j = 1; j <= R; ++j) {
      const int sub = d[static_cast<size_t>(i) - 1][static_cast<size_t>(j) - 1] +
                      (hyp[static_cast<size_t>(i) - 1] == ref[static_cast<size_t>(j) - 1] ? 0 : 1);
      const int ins = d[static_cast<size_t>(i) - 1][static_cast<size_t>(j)] + 1;
      const int del = d[static_cast<size_t>(i)][static_cast<size_t>(j) - 1] + 1;
      d[static_cast<size_t>(i)][static_cast<size_t>(j)] = std::min({sub, ins, del});
    }
  }
  out.distance = d[static_cast<size_t>(H)][static_cast<size_t>(R)];

  // Backtrace preferring substitution (diagonal) over insertion over deletion.
  int i = H, j = R;
  while (i > 0 || j > 0) {
    const int cur = d[static_cast<size_t>(i)][static_cast<size_t>(j)];
    if (i > 0 && j > 0) {
      const bool match = hyp[static_cast<size_t>(i) - 1] == ref[static_cast<size_t>(j) - 1];
      if (cur == d[static_cast<size_t>(i) - 1][static_cast<size_t>(j) - 1] + (match ? 0 : 1)) {
        if (!match) ++out.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && cur == d[static_cast<size_t>(i) - 1][static_cast<size_t>(j)] + 1) {
      ++out.insertions;
      --i;
      continue;
    }
    ++out.deletions;
    --j;
  }
  out.wer = static_cast<double>(out.distance) / static_cast<double>(R);
  return out;
}

double combine_scores(const Hypothesis &hyp, const Lambdas &lambdas, const std::string &utt_id) {
  validate(lambdas);
  const double wip = lambdas.word_insertion_penalty * static_cast<double>(hyp.words.size());
  if (lambdas.alpha == 0.0) return hyp.am_logp + wip;

  auto require = [&](const char *key) -> double {
    auto it = hyp.lm_logps.find(key);
    if (it == hyp.lm_logps.end()) {
      throw DataError("combine_scores: utt '" + utt_id + "' rank " +
                      std::to_string(hyp.original_rank) + " is missing lm score '" + key + "'");
    }
    return it->second;
  };

  double log_p_lm;
  if (lambdas.beta == 0.0) {
    log_p_lm = require(kLmTdnnLstm);
  } else {
    // Probability-domain interpolation of the two SRU streams.
    double log_sru;
    if (lambdas.gamma == 1.0) {
      log_sru = require(kLmSruBpe);
    } else if (lambdas.gamma == 0.0) {
      log_sru = require(kLmSruWord);
    } else {
      const double a = std::log(lambdas.gamma) + require(kLmSruBpe);
      const double b = std::log(1.0 - lambdas.gamma) + require(kLmSruWord);
      const double m = std::max(a, b);
      log_sru = m + std::log(std::exp(a - m) + std::exp(b - m));
    }
    if (lambdas.beta == 1.0) {
      log_p_lm = log_sru;
    } else {
      log_p_lm = lambdas.beta * log_sru + (1.0 - lambdas.beta) * require(kLmTdnnLstm);
    }
  }
  return hyp.am_logp + lambdas.alpha * log_p_lm + wip;
}

namespace {

std::vector<double> combined_scores(const NBestList &list, const Lambdas &lambdas) {
  std::vector<double> scores;
  scores.reserve(list.hyps.size());
  for (const auto &hyp : list.hyps) scores.push_back(combine_scores(hyp, lambdas, list.utt_id));
  return scores;
}

}  // namespace

std::vector<int> rank_nbest(const NBestList &list, const Lambdas &lambdas) {
  if (list.hyps.empty()) throw DataError("rank_nbest: empty list for utt '" + list.utt_id + "'");
  const std::vector<double> scores = combined_scores(list, lambdas);
  std::vector<int> idx(list.hyps.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    const double sa = scores[static_cast<size_t>(a)];
    const double sb = scores[static_cast<size_t>(b)];
    if (sa != sb) return sa > sb;
    return list.hyps[static_cast<size_t>(a)].original_rank <
           list.hyps[static_cast<size_t>(b)].original_rank;
  });
  return idx;
}

std::vector<double> posteriors(const NBestList &list, const Lambdas &lambdas) {
  const std::vector<double> scores = combined_scores(list, lambdas);
  double m = scores[0];
  for (double s : scores) m = std::max(m, s);
  std::vector<double> post(scores.size());
  double sum = 0.0;
  for (size_t i = 0; i < scores.size(); ++i) {
    post[i] = std::exp(scores[i] - m);
    sum += post[i];
  }
  for (double &p : post) p /= sum;
  return post;
}

std::vector<std::vector<double>> pairwise_wer(const NBestList &list) {
  const size_t n = list.hyps.size();
  std::vector<std::vector<double>> wer(n, std::vector<double>(n, 0.0));
  for (size_t s = 0; s < n; ++s) {
    for (size_t i = 0; i < n; ++i) {
      if (s == i) continue;
      wer[s][i] = edit_align(list.hyps[s].words, list.hyps[i].words).wer;
    }
  }
  return wer;
}

std::vector<int> expected_wer_rerank(const NBestList &list, const std::vector<int> &ranked,
                                     const Lambdas &lambdas, int top_k,
                                     const std::vector<std::vector<double>> *wer_cache,
                                     bool posteriors_over_top_k) {
  if (top_k < 1) throw UsageError("expected_wer_rerank: top_k must be >= 1");
  if (ranked.size() != list.hyps.size()) {
    throw DataError("expected_wer_rerank: rank permutation size mismatch for utt '" +
                    list.utt_id + "'");
  }
  const int n = static_cast<int>(list.hyps.size());
  const int k = std::min(top_k, n);
  std::vector<double> post = posteriors(list, lambdas);
  if (posteriors_over_top_k) {
    // Alternative normalization: only the current top block carries mass.
    std::vector<double> masked(static_cast<size_t>(n), 0.0);
    double z = 0.0;
    for (int c = 0; c < k; ++c) z += post[static_cast<size_t>(ranked[static_cast<size_t>(c)])];
    for (int c = 0; c < k; ++c) {
      const int i = ranked[static_cast<size_t>(c)];
      masked[static_cast<size_t>(i)] = post[static_cast<size_t>(i)] / z;
    }
    post = std::move(masked);
  }

  // Expected word error of each top-k candidate against all N references
  // (references outside the mass-carrying set contribute nothing).
  std::vector<double> expected(static_cast<size_t>(k), 0.0);
  for (int c = 0; c < k; ++c) {
    const int cand = ranked[static_cast<size_t>(c)];
    double e = 0.0;
    for (int i = 0; i < n; ++i) {
      if (i == cand || post[static_cast<size_t>(i)] == 0.0) continue;  // err(S|S) = 0
      const double w = wer_cache
                           ? (*wer_cache)[static_cast<size_t>(cand)][static_cast<size_t>(i)]
                           : edit_align(list.hyps[static_cast<size_t>(cand)].words,
                                        list.hyps[static_cast<size_t>(i)].words)
                                 .wer;
      e += post[static_cast<size_t>(i)] * w;
    }
    expected[static_cast<size_t>(c)] = e;
  }

  std::vector<int> block(static_cast<size_t>(k));
  for (int c = 0; c < k; ++c) block[static_cast<size_t>(c)] = c;
  std::sort(block.begin(), block.end(), [&](int a, int b) {
    const double ea = expected[static_cast<size_t>(a)];
    const double eb = expected[static_cast<size_t>(b)];
    if (ea != eb) return ea < eb;
    return a < b;  // prior rank
  });

  std::vector<int> out = ranked;
  for (int c = 0; c < k; ++c) {
    out[static_cast<size_t>(c)] = ranked[static_cast<size_t>(block[static_cast<size_t>(c)])];
  }
  return out;
}

GridSpec GridSpec::default_grid() {
  GridSpec grid;
  for (int i = 0; i <= 10; ++i) grid.alphas.push_back(0.2 * i);
  for (int i = 0; i <= 10; ++i) grid.betas.push_back(0.1 * i);
  for (int i = 0; i <= 10; ++i) grid.gammas.push_back(0.1 * i);
  return grid;
}

namespace {

struct CorpusTopErrors {
  int64_t distance = 0;
  int64_t ref_len = 0;
  double wer() const {
    if (ref_len == 0) return static_cast<double>(distance);
    return static_cast<double>(distance) / static_cast<double>(ref_len);
  }
};

void accumulate_top1(CorpusTopErrors &acc, const NBestList &list, int top_index) {
  const auto ref_words = split_tokens(*list.reference);
  const Alignment a = edit_align(list.hyps[static_cast<size_t>(top_index)].words, ref_words);
  acc.distance += a.distance;
  acc.ref_len += static_cast<int64_t>(ref_words.size());
}

bool lambdas_less(const Lambdas &a, const Lambdas &b) {
  if (a.alpha != b.alpha) return a.alpha < b.alpha;
  if (a.beta != b.beta) return a.beta < b.beta;
  return a.gamma < b.gamma;
}

}  // namespace

GridResult grid_search(const std::vector<NBestList> &dev, const GridSpec &grid, int top_k) {
  if (grid.alphas.empty() || grid.betas.empty() || grid.gammas.empty()) {
    throw UsageError("grid_search: empty grid");
  }
  if (dev.empty()) throw DataError("grid_search: empty dev corpus");
  for (const auto &list : dev) {
    if (!list.reference.has_value()) {
      throw DataError("grid_search: utt '" + list.utt_id + "' has no reference");
    }
  }

  // err(S|S_i) never depends on the lambdas; compute each list's pairwise
  // WER matrix once.
  std::vector<std::vector<std::vector<double>>> caches;
  caches.reserve(dev.size());
  for (const auto &list : dev) caches.push_back(pairwise_wer(list));

  GridResult result;
  bool first = true;
  for (double alpha : grid.alphas) {
    for (double beta : grid.betas) {
      for (double gamma : grid.gammas) {
        const Lambdas lambdas{alpha, beta, gamma};
        CorpusTopErrors acc;
        for (size_t u = 0; u < dev.size(); ++u) {
          const auto ranked = rank_nbest(dev[u], lambdas);
          const auto final_rank =
              expected_wer_rerank(dev[u], ranked, lambdas, top_k, &caches[u]);
          accumulate_top1(acc, dev[u], final_rank[0]);
        }
        const double wer = acc.wer();
        result.table.push_back({lambdas, wer});
        if (first || wer < result.best_wer ||
            (wer == result.best_wer && lambdas_less(lambdas, result.best))) {
          result.best = lambdas;
          result.best_wer = wer;
          first = false;
        }
      }
    }
  }
  return result;
}

EvalReport evaluate(const std::vector<NBestList> &corpus, const Lambdas &lambdas, int top_k) {
  if (corpus.empty()) throw DataError("evaluate: empty corpus");
  EvalReport report;
  report.lambdas = lambdas;
  report.top_k = top_k;

  CorpusTopErrors am_only, rescored, mbr;
  const Lambdas am_lambdas{0.0, lambdas.beta, lambdas.gamma};
  for (const auto &list : corpus) {
    if (!list.reference.has_value()) {
      throw DataError("evaluate: utt '" + list.utt_id + "' has no reference");
    }
    const auto rank_am = rank_nbest(list, am_lambdas);
    const auto rank_fused = rank_nbest(list, lambdas);
    const auto rank_final = expected_wer_rerank(list, rank_fused, lambdas, top_k);

    accumulate_top1(am_only, list, rank_am[0]);
    accumulate_top1(rescored, list, rank_fused[0]);
    accumulate_top1(mbr, list, rank_final[0]);

    UttEval utt;
    utt.utt_id = list.utt_id;
    utt.selected_am_only = list.hyps[static_cast<size_t>(rank_am[0])].text;
    utt.selected_rescored = list.hyps[static_cast<size_t>(rank_fused[0])].text;
    utt.selected_mbr = list.hyps[static_cast<size_t>(rank_final[0])].text;
    utt.alignment = edit_align(list.hyps[static_cast<size_t>(rank_final[0])].words,
                               split_tokens(*list.reference));
    report.utterances.push_back(std::move(utt));
  }
  report.wer_am_only = am_only.wer();
  report.wer_rescored = rescored.wer();
  report.wer_mbr = mbr.wer();
  return report;
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json j;
  j["lambdas"] = {{"alpha", lambdas.alpha}, {"beta", lambdas.beta}, {"gamma", lambdas.gamma}};
  j["top_k"] = top_k;
  j["stages"] = {{"am_only", wer_am_only},
                 {"rescored", wer_rescored},
                 {"expected_wer", wer_mbr}};
  j["corpus_wer"] = wer_mbr;
  nlohmann::json utts = nlohmann::json::array();
  for (const auto &u : utterances) {
    nlohmann::json ju;
    ju["utt"] = u.utt_id;
    ju["selected"] = {{"am_only", u.selected_am_only},
                      {"rescored", u.selected_rescored},
                      {"expected_wer", u.selected_mbr}};
    ju["alignment"] = {{"distance", u.alignment.distance},
                       {"substitutions", u.alignment.substitutions},
                       {"insertions", u.alignment.insertions},
                       {"deletions", u.alignment.deletions},
                       {"wer", u.alignment.wer}};
    if (u.alignment.empty_reference) ju["flags"] = {"empty_reference"};
    utts.push_back(std::move(ju));
  }
  j["utterances"] = std::move(utts);
  return j;
}

// ---------------------------------------------------------------------------
// File IO

std::vector<NBestList> read_nbest(const std::string &path, int n_cap) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("nbest: cannot read " + path);
  std::vector<NBestList> lists;
  std::map<std::string, size_t> index;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("utt") || !j.contains("rank") ||
        !j.contains("text") || !j.contains("am_logp")) {
      throw DataError("nbest: malformed line " + std::to_string(line_no) + " in " + path);
    }
    Hypothesis hyp;
    hyp.text = j["text"].get<std::string>();
    hyp.words = split_tokens(hyp.text);
    hyp.am_logp = j["am_logp"].get<double>();
    hyp.original_rank = j["rank"].get<int>();
    if (j.contains("lm")) {
      for (const auto &[key, value] : j["lm"].items()) {
        hyp.lm_logps[key] = value.get<double>();
      }
    }
    const std::string utt = j["utt"].get<std::string>();
    auto [it, inserted] = index.try_emplace(utt, lists.size());
    if (inserted) {
      lists.push_back(NBestList{utt, {}, std::nullopt});
    }
    lists[it->second].hyps.push_back(std::move(hyp));
  }
  for (auto &list : lists) {
    std::set<int> ranks;
    for (const auto &hyp : list.hyps) {
      if (!ranks.insert(hyp.original_rank).second) {
        throw DataError("nbest: duplicate rank " + std::to_string(hyp.original_rank) +
                        " for utt '" + list.utt_id + "'");
      }
    }
    std::sort(list.hyps.begin(), list.hyps.end(),
              [](const Hypothesis &a, const Hypothesis &b) {
                return a.original_rank < b.original_rank;
              });
    if (static_cast<int>(list.hyps.size()) > n_cap) {
      list.hyps.resize(static_cast<size_t>(n_cap));  // the N cap, lowest ranks first
    }
  }
  return lists;
}

void write_nbest(const std::string &path, const std::vector<NBestList> &lists) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("nbest: cannot write " + path);
  for (const auto &list : lists) {
    for (const auto &hyp : list.hyps) {
      nlohmann::json j;
      j["utt"] = list.utt_id;
      j["rank"] = hyp.original_rank;
      j["text"] = hyp.text;
      j["am_logp"] = hyp.am_logp;
      if (!hyp.lm_logps.empty()) {
        nlohmann::json lm;
        for (const auto &[key, value] : hyp.lm_logps) lm[key] = value;
        j["lm"] = std::move(lm);
      }
      out << j.dump() << "\n";
    }
  }
}

std::map<std::string, std::string> read_refs(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("refs: cannot read " + path);
  std::map<std::string, std::string> refs;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw DataError("refs: line " + std::to_string(line_no) + " has no tab in " + path);
    }
    refs[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return refs;
}

void attach_refs(std::vector<NBestList> &lists,
                 const std::map<std::string, std::string> &refs, bool require_all) {
  std::vector<std::string> missing;
  for (auto &list : lists) {
    auto it = refs.find(list.utt_id);
    if (it != refs.end()) {
      list.reference = it->second;
    } else if (require_all) {
      missing.push_back(list.utt_id);
    }
  }
  if (!missing.empty()) {
    std::string msg = "refs: missing utterances:";
    for (const auto &utt : missing) msg += " " + utt;
    throw DataError(msg);
  }
}

}  // namespace rescore
}  // namespace asrkit
