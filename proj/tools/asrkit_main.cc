// tools/asrkit_main.cc

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

// Batch N-best rescoring toolkit.  Every subcommand is a pure file-to-file
// transform: identical flags, files and seeds produce byte-identical
// outputs.  Exit codes: 0 success, 1 usage or validation, 2 data or runtime
// failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "asrkit/am.h"
#include "asrkit/lm.h"
#include "asrkit/ngram.h"
#include "asrkit/rescore.h"
#include "asrkit/text.h"
#include "asrkit/trainer.h"
#include "json.hpp"

namespace asrkit {
namespace {

std::vector<std::string> read_corpus_lines(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read corpus file " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string normalized = text::normalize_text(line);
    if (!normalized.empty()) lines.push_back(normalized);
  }
  return lines;
}

nlohmann::json read_json_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read JSON file " + path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw DataError("malformed JSON in " + path);
  return j;
}

template <typename T>
T json_get(const nlohmann::json &j, const char *key, T fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<T>();
}

// ---------------------------------------------------------------------------
// train-bpe

int cmd_train_bpe(const std::string &corpus_path, int vocab_size, const std::string &out) {
  const auto corpus = read_corpus_lines(corpus_path);
  text::BpeModel model = text::BpeModel::train(corpus, vocab_size);
  model.save(out + ".bpe.json");
  model.build_vocabulary().save(out + ".vocab.txt");
  std::cout << "learned " << model.merges().size() << " merges over "
            << model.base_symbols().size() << " base symbols\n"
            << "wrote " << out << ".bpe.json and " << out << ".vocab.txt\n";
  return 0;
}

// ---------------------------------------------------------------------------
// train-lm

struct TokenizerSetup {
  std::unique_ptr<text::Tokenizer> tokenizer;
  std::string vocab_out;  // set when a corpus-built vocabulary should be saved
};

TokenizerSetup make_tokenizer(const nlohmann::json &spec,
                              const std::vector<std::string> &corpus,
                              const std::string &out_prefix) {
  TokenizerSetup setup;
  const std::string type = json_get<std::string>(spec, "type", "char");
  if (type == "bpe") {
    if (!spec.contains("path")) throw UsageError("tokenizer: bpe needs a model path");
    text::BpeModel model = text::BpeModel::load(spec.at("path").get<std::string>());
    setup.tokenizer = std::make_unique<text::BpeTokenizer>(std::move(model));
  } else if (type == "word") {
    if (spec.contains("path")) {
      setup.tokenizer = std::make_unique<text::WordTokenizer>(
          text::Vocabulary::load(spec.at("path").get<std::string>()));
    } else {
      const int cap = json_get<int>(spec, "max_tokens", 10000);
      text::Vocabulary vocab = text::build_word_vocab(corpus, cap);
      setup.vocab_out = out_prefix + ".vocab.txt";
      vocab.save(setup.vocab_out);
      setup.tokenizer = std::make_unique<text::WordTokenizer>(std::move(vocab));
    }
  } else if (type == "char") {
    setup.tokenizer = std::make_unique<text::CharTokenizer>(text::build_char_vocab(corpus));
  } else {
    throw UsageError("tokenizer: unknown type '" + type + "'");
  }
  return setup;
}

int cmd_train_lm(const std::string &corpus_path, const std::string &dev_path,
                 const std::string &config_path, const std::string &out, int64_t seed_flag) {
  const nlohmann::json config_json = read_json_file(config_path);
  const auto corpus = read_corpus_lines(corpus_path);
  if (corpus.empty()) throw DataError("training corpus is empty: " + corpus_path);
  const auto dev = read_corpus_lines(dev_path);
  if (dev.empty()) throw DataError("dev corpus is empty: " + dev_path);

  const nlohmann::json model_json = config_json.value("model", nlohmann::json::object());
  const nlohmann::json train_json = config_json.value("train", nlohmann::json::object());
  const nlohmann::json tok_json = config_json.value("tokenizer", nlohmann::json::object());

  TokenizerSetup tok = make_tokenizer(tok_json, corpus, out);

  lm::LmModel::Config model_config;
  model_config.layers = json_get<int>(model_json, "layers", 2);
  model_config.dim = json_get<int>(model_json, "dim", 64);
  model_config.proj_dim = json_get<int>(model_json, "proj_dim", model_config.dim);
  model_config.heads = json_get<int>(model_json, "heads", 2);
  model_config.tie_weights = json_get<bool>(model_json, "tie_weights", true);
  model_config.dropout = json_get<double>(model_json, "dropout", 0.0);

  train::TrainConfig train_config;
  train_config.batch_size = json_get<int>(train_json, "batch_size", 16);
  train_config.epochs = json_get<int>(train_json, "epochs", 2);
  train_config.max_seq_len = json_get<int>(train_json, "max_seq_len", 275);
  train_config.seed = json_get<uint64_t>(train_json, "seed", 1234);
  train_config.lr = json_get<double>(train_json, "lr", 2e-4);
  train_config.min_lr = json_get<double>(train_json, "min_lr", 0.0);
  train_config.warmup_steps = json_get<int>(train_json, "warmup_steps", 0);
  train_config.grad_clip = json_get<double>(train_json, "grad_clip", 5.0);
  train_config.eval_interval = json_get<int>(train_json, "eval_interval", 200);
  if (seed_flag >= 0) train_config.seed = static_cast<uint64_t>(seed_flag);

  std::vector<std::vector<int>> train_ids, dev_ids;
  for (const auto &s : corpus) train_ids.push_back(tok.tokenizer->encode(s));
  for (const auto &s : dev) dev_ids.push_back(tok.tokenizer->encode(s));

  lm::LmModel model(model_config, tok.tokenizer->vocab());
  model.init_params(train_config.seed);
  train::TrainResult result = train::train_lm(model, train_ids, dev_ids, train_config);
  model.save(out);
  train::write_curve_csv(out + ".curve.csv", result.curve);

  // Add-1 bigram baseline over the same token stream.
  text::NgramModel bigram(2, 1.0, tok.tokenizer->vocab(), train_ids);
  const double baseline = bigram.perplexity(dev_ids);
  std::cout << "steps " << result.steps << ", final dev ppl " << result.final_dev_ppl
            << ", add-1 bigram baseline " << baseline << "\n"
            << "wrote " << out << ".json / .bin / .curve.csv";
  if (!tok.vocab_out.empty()) std::cout << " / " << tok.vocab_out;
  std::cout << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// score-nbest

std::unique_ptr<text::Tokenizer> load_scoring_tokenizer(const std::string &spec,
                                                        const text::Vocabulary &ckpt_vocab) {
  if (spec == "char") return std::make_unique<text::CharTokenizer>(ckpt_vocab);
  std::ifstream probe(spec, std::ios::binary);
  if (!probe) throw DataError("cannot read tokenizer file " + spec);
  char first = 0;
  probe >> first;
  std::unique_ptr<text::Tokenizer> tokenizer;
  if (first == '{') {
    tokenizer = std::make_unique<text::BpeTokenizer>(text::BpeModel::load(spec));
  } else {
    tokenizer = std::make_unique<text::WordTokenizer>(text::Vocabulary::load(spec));
  }
  if (tokenizer->vocab().tokens() != ckpt_vocab.tokens()) {
    throw DataError("tokenizer " + spec + " does not match the checkpoint vocabulary");
  }
  return tokenizer;
}

int cmd_score_nbest(const std::string &nbest_path, const std::string &ckpt_prefix,
                    const std::string &tokenizer_spec, const std::string &field,
                    const std::string &out, int n_cap) {
  if (field != rescore::kLmSruBpe && field != rescore::kLmSruWord) {
    throw UsageError("score-nbest: unknown field '" + field + "' (use sru_bpe or sru_word)");
  }
  lm::LmModel model = lm::LmModel::load(ckpt_prefix);
  auto tokenizer = load_scoring_tokenizer(tokenizer_spec, model.vocab());
  auto lists = rescore::read_nbest(nbest_path, n_cap);

  int64_t unk_hyps = 0;
  const int unk_id = model.vocab().unk_id();
  for (auto &list : lists) {
    for (auto &hyp : list.hyps) {
      const auto ids = tokenizer->encode(text::normalize_text(hyp.text));
      bool has_unk = false;
      for (int id : ids) has_unk |= (id == unk_id);
      unk_hyps += has_unk ? 1 : 0;
      hyp.lm_logps[field] = model.sequence_logprob(ids);
    }
  }
  rescore::write_nbest(out, lists);
  if (unk_hyps > 0) {
    std::cerr << "warning: " << unk_hyps << " hypotheses contained unknown symbols\n";
  }
  std::cout << "scored " << lists.size() << " utterances into field '" << field << "'\n";
  return 0;
}

// ---------------------------------------------------------------------------
// rescore and grid-search

void write_json_file(const std::string &path, const nlohmann::json &j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << j.dump(2) << "\n";
}

int cmd_rescore(const std::string &nbest_path, const std::vector<double> &lambdas_flat,
                int top_k, const std::string &out, std::string best_path,
                const std::string &refs_path, std::string report_path, int n_cap,
                double wip, bool posteriors_top_k) {
  rescore::Lambdas lambdas{lambdas_flat[0], lambdas_flat[1], lambdas_flat[2]};
  lambdas.word_insertion_penalty = wip;
  rescore::validate(lambdas);
  auto lists = rescore::read_nbest(nbest_path, n_cap);

  std::vector<rescore::NBestList> reranked;
  reranked.reserve(lists.size());
  for (const auto &list : lists) {
    const auto ranked = rescore::rank_nbest(list, lambdas);
    const auto final_rank =
        rescore::expected_wer_rerank(list, ranked, lambdas, top_k, nullptr, posteriors_top_k);
    rescore::NBestList out_list;
    out_list.utt_id = list.utt_id;
    for (size_t pos = 0; pos < final_rank.size(); ++pos) {
      rescore::Hypothesis hyp = list.hyps[static_cast<size_t>(final_rank[pos])];
      hyp.original_rank = static_cast<int>(pos);  // rank after rescoring
      out_list.hyps.push_back(std::move(hyp));
    }
    reranked.push_back(std::move(out_list));
  }
  rescore::write_nbest(out, reranked);

  if (best_path.empty()) best_path = out + ".1best.tsv";
  {
    std::ofstream best(best_path, std::ios::binary);
    if (!best) throw DataError("cannot write " + best_path);
    for (const auto &list : reranked) best << list.utt_id << "\t" << list.hyps[0].text << "\n";
  }

  if (!refs_path.empty()) {
    rescore::attach_refs(lists, rescore::read_refs(refs_path), /*require_all=*/true);
    rescore::EvalReport report = rescore::evaluate(lists, lambdas, top_k);
    if (report_path.empty()) report_path = out + ".report.json";
    write_json_file(report_path, report.to_json());
    std::cout << "staged WER: am_only " << report.wer_am_only << ", rescored "
              << report.wer_rescored << ", expected_wer " << report.wer_mbr << "\n";
  }
  std::cout << "wrote " << out << " and " << best_path << "\n";
  return 0;
}

rescore::GridSpec parse_grid(const std::string &grid_path) {
  if (grid_path.empty()) return rescore::GridSpec::default_grid();
  const nlohmann::json j = read_json_file(grid_path);
  rescore::GridSpec grid;
  grid.alphas = json_get<std::vector<double>>(j, "alpha", {});
  grid.betas = json_get<std::vector<double>>(j, "beta", {});
  grid.gammas = json_get<std::vector<double>>(j, "gamma", {});
  const rescore::GridSpec fallback = rescore::GridSpec::default_grid();
  if (grid.alphas.empty()) grid.alphas = fallback.alphas;
  if (grid.betas.empty()) grid.betas = fallback.betas;
  if (grid.gammas.empty()) grid.gammas = fallback.gammas;
  return grid;
}

int cmd_grid_search(const std::string &nbest_path, const std::string &refs_path,
                    const std::string &grid_path, int top_k, const std::string &out,
                    int n_cap) {
  auto lists = rescore::read_nbest(nbest_path, n_cap);
  rescore::attach_refs(lists, rescore::read_refs(refs_path), /*require_all=*/true);
  const rescore::GridSpec grid = parse_grid(grid_path);
  rescore::GridResult result = rescore::grid_search(lists, grid, top_k);

  nlohmann::json j;
  j["best"] = {{"alpha", result.best.alpha},
               {"beta", result.best.beta},
               {"gamma", result.best.gamma}};
  j["best_wer"] = result.best_wer;
  nlohmann::json table = nlohmann::json::array();
  for (const auto &point : result.table) {
    table.push_back({{"alpha", point.lambdas.alpha},
                     {"beta", point.lambdas.beta},
                     {"gamma", point.lambdas.gamma},
                     {"wer", point.wer}});
  }
  j["table"] = std::move(table);
  write_json_file(out, j);
  std::cout << "best lambdas: alpha " << result.best.alpha << ", beta " << result.best.beta
            << ", gamma " << result.best.gamma << " (dev WER " << result.best_wer << ")\n";
  return 0;
}

// ---------------------------------------------------------------------------
// wer

int cmd_wer(const std::string &hyp_path, const std::string &ref_path) {
  const auto hyps = rescore::read_refs(hyp_path);
  const auto refs = rescore::read_refs(ref_path);
  std::vector<std::string> missing;
  for (const auto &[utt, unused] : hyps) {
    (void)unused;
    if (!refs.count(utt)) missing.push_back(utt + " (no reference)");
  }
  for (const auto &[utt, unused] : refs) {
    (void)unused;
    if (!hyps.count(utt)) missing.push_back(utt + " (no hypothesis)");
  }
  if (!missing.empty()) {
    std::string msg = "mismatched utterance ids:";
    for (const auto &m : missing) msg += " " + m;
    throw DataError(msg);
  }

  int64_t distance = 0, ref_len = 0;
  std::printf("%-20s %8s %6s %6s %6s %8s\n", "utt", "dist", "sub", "ins", "del", "wer");
  for (const auto &[utt, ref_text] : refs) {
    const auto a = rescore::edit_align(rescore::split_tokens(hyps.at(utt)),
                                       rescore::split_tokens(ref_text));
    distance += a.distance;
    ref_len += static_cast<int64_t>(rescore::split_tokens(ref_text).size());
    std::printf("%-20s %8d %6d %6d %6d %7.2f%%%s\n", utt.c_str(), a.distance,
                a.substitutions, a.insertions, a.deletions, 100.0 * a.wer,
                a.empty_reference ? " [empty reference]" : "");
  }
  const double wer =
      ref_len > 0 ? static_cast<double>(distance) / static_cast<double>(ref_len)
                  : static_cast<double>(distance);
  std::printf("corpus WER: %.2f%%\n", 100.0 * wer);
  return 0;
}

// ---------------------------------------------------------------------------
// am-forward, spec-augment, init-am

int cmd_am_forward(const std::string &features_path, const std::string &model_prefix,
                   const std::string &out) {
  am::MultistreamModel model = am::MultistreamModel::load(model_prefix);
  auto utts = am::read_features(features_path);
  std::vector<am::UttFeatures> logits;
  logits.reserve(utts.size());
  for (const auto &u : utts) {
    am::UttFeatures entry;
    entry.utt = u.utt;
    entry.frames = model.forward(u.frames);
    logits.push_back(std::move(entry));
  }
  am::write_features(out, logits, "logits");
  std::cout << "wrote logits for " << logits.size() << " utterances to " << out << "\n";
  return 0;
}

int cmd_spec_augment(const std::string &features_path, const std::string &config_path,
                     uint64_t seed, const std::string &out) {
  am::SpecAugmentConfig config;
  if (!config_path.empty()) {
    const nlohmann::json j = read_json_file(config_path);
    config.n_time_masks = json_get<int>(j, "n_time_masks", config.n_time_masks);
    config.max_time_width = json_get<int>(j, "max_time_width", config.max_time_width);
    config.n_freq_masks = json_get<int>(j, "n_freq_masks", config.n_freq_masks);
    config.max_freq_width = json_get<int>(j, "max_freq_width", config.max_freq_width);
  }
  auto utts = am::read_features(features_path);
  Rng rng(seed);  // one stream across utterances, in file order
  for (auto &u : utts) u.frames = am::spec_augment(u.frames, config, rng);
  am::write_features(out, utts);
  std::cout << "masked " << utts.size() << " utterances to " << out << "\n";
  return 0;
}

int cmd_init_am(const std::string &config_path, uint64_t seed, const std::string &out) {
  am::ModelConfig config;
  if (!config_path.empty()) {
    const nlohmann::json j = read_json_file(config_path);
    config.input_freq_bins = json_get<int>(j, "input_freq_bins", config.input_freq_bins);
    config.frontend.filters =
        json_get<std::vector<int>>(j, "frontend_filters", config.frontend.filters);
    config.dilations = json_get<std::vector<int>>(j, "dilations", config.dilations);
    config.layers_per_stream = json_get<int>(j, "layers_per_stream", config.layers_per_stream);
    config.stream_width = json_get<int>(j, "stream_width", config.stream_width);
    config.bottleneck = json_get<int>(j, "bottleneck", config.bottleneck);
    config.head_hidden = json_get<int>(j, "head_hidden", config.head_hidden);
    config.output_dim = json_get<int>(j, "output_dim", config.output_dim);
    config.dropout = json_get<double>(j, "dropout", config.dropout);
  }
  am::MultistreamModel model(config);
  model.init_params(seed);
  model.save(out);
  const auto rf = am::receptive_field(config);
  std::cout << "wrote " << out << ".json / .bin (receptive field +-" << rf.first
            << " frames)\n";
  return 0;
}

}  // namespace
}  // namespace asrkit

int main(int argc, char **argv) {
  using namespace asrkit;

  CLI::App app{"asrkit: multistream acoustic forward path, self-attentive SRU language "
               "models, and N-best rescoring with expected word error minimization"};
  app.require_subcommand(1);

  // train-bpe
  std::string tb_corpus, tb_out;
  int tb_vocab = 1000;
  auto *train_bpe = app.add_subcommand("train-bpe", "Learn a BPE vocabulary from text");
  train_bpe->add_option("--corpus", tb_corpus, "training text, one sentence per line")
      ->required();
  train_bpe->add_option("--vocab-size", tb_vocab, "target symbol inventory")->required();
  train_bpe->add_option("--out", tb_out, "output prefix")->required();

  // train-lm
  std::string tl_corpus, tl_dev, tl_config, tl_out;
  int64_t tl_seed = -1;
  auto *train_lm = app.add_subcommand("train-lm", "Train a self-attentive SRU language model");
  train_lm->add_option("--corpus", tl_corpus, "training text")->required();
  train_lm->add_option("--dev", tl_dev, "dev text for perplexity")->required();
  train_lm->add_option("--config", tl_config, "JSON config (model/tokenizer/train)")
      ->required();
  train_lm->add_option("--out", tl_out, "checkpoint prefix")->required();
  train_lm->add_option("--seed", tl_seed, "override the config seed");

  // score-nbest
  std::string sn_nbest, sn_ckpt, sn_tok, sn_field, sn_out;
  int sn_cap = 100;
  auto *score_nbest =
      app.add_subcommand("score-nbest", "Populate an LM score field on an N-best file");
  score_nbest->add_option("--nbest", sn_nbest, "N-best JSONL")->required();
  score_nbest->add_option("--lm-checkpoint", sn_ckpt, "LM checkpoint prefix")->required();
  score_nbest->add_option("--tokenizer", sn_tok, "BPE model JSON, vocab file, or 'char'")
      ->required();
  score_nbest->add_option("--field", sn_field, "sru_bpe or sru_word")->required();
  score_nbest->add_option("--out", sn_out, "output JSONL")->required();
  score_nbest->add_option("--n", sn_cap, "N-best cap on ingest");

  // rescore
  std::string rs_nbest, rs_out, rs_best, rs_refs, rs_report;
  std::vector<double> rs_lambdas;
  int rs_topk = 20, rs_cap = 100;
  double rs_wip = 0.0;
  bool rs_post_topk = false;
  auto *rescore_cmd = app.add_subcommand("rescore", "Rank and expected-WER rerank an N-best file");
  rescore_cmd->add_option("--nbest", rs_nbest, "N-best JSONL")->required();
  rescore_cmd->add_option("--lambdas", rs_lambdas, "alpha beta gamma")
      ->expected(3)
      ->required();
  rescore_cmd->add_option("--top-k", rs_topk, "expected-WER rerank depth");
  rescore_cmd->add_option("--out", rs_out, "reranked JSONL")->required();
  rescore_cmd->add_option("--best", rs_best, "1-best TSV (default <out>.1best.tsv)");
  rescore_cmd->add_option("--refs", rs_refs, "references for a staged WER report");
  rescore_cmd->add_option("--report", rs_report, "report path (default <out>.report.json)");
  rescore_cmd->add_option("--n", rs_cap, "N-best cap on ingest");
  rescore_cmd->add_option("--wip", rs_wip, "word insertion penalty (experimental, default 0)");
  rescore_cmd->add_flag("--posteriors-top-k", rs_post_topk,
                        "normalize expected-WER posteriors over the top-k only");

  // grid-search
  std::string gs_nbest, gs_refs, gs_grid, gs_out;
  int gs_topk = 20, gs_cap = 100;
  auto *grid_search =
      app.add_subcommand("grid-search", "Optimize lambdas by corpus WER on dev data");
  grid_search->add_option("--nbest", gs_nbest, "N-best JSONL")->required();
  grid_search->add_option("--refs", gs_refs, "reference TSV")->required();
  grid_search->add_option("--grid", gs_grid, "grid JSON (default alpha 0..2, beta/gamma 0..1)");
  grid_search->add_option("--top-k", gs_topk, "expected-WER rerank depth");
  grid_search->add_option("--out", gs_out, "result JSON")->required();
  grid_search->add_option("--n", gs_cap, "N-best cap on ingest");

  // wer
  std::string wr_hyp, wr_ref;
  auto *wer = app.add_subcommand("wer", "Corpus WER of a hypothesis TSV against references");
  wer->add_option("--hyp", wr_hyp, "hypothesis TSV (utt<TAB>text)")->required();
  wer->add_option("--ref", wr_ref, "reference TSV")->required();

  // am-forward
  std::string af_features, af_model, af_out;
  auto *am_forward = app.add_subcommand("am-forward", "Run the multistream acoustic model");
  am_forward->add_option("--features", af_features, "feature JSONL")->required();
  am_forward->add_option("--model", af_model, "AM checkpoint prefix")->required();
  am_forward->add_option("--out", af_out, "logits JSONL")->required();

  // spec-augment
  std::string sa_features, sa_config, sa_out;
  uint64_t sa_seed = 0;
  auto *spec_augment = app.add_subcommand("spec-augment", "Mask features with SpecAugment");
  spec_augment->add_option("--features", sa_features, "feature JSONL")->required();
  spec_augment->add_option("--config", sa_config, "mask config JSON");
  spec_augment->add_option("--seed", sa_seed, "mask RNG seed")->required();
  spec_augment->add_option("--out", sa_out, "masked feature JSONL")->required();

  // init-am
  std::string ia_config, ia_out;
  uint64_t ia_seed = 0;
  auto *init_am = app.add_subcommand("init-am", "Materialize a seeded AM checkpoint");
  init_am->add_option("--config", ia_config, "model config JSON (defaults when omitted)");
  init_am->add_option("--seed", ia_seed, "parameter seed")->required();
  init_am->add_option("--out", ia_out, "checkpoint prefix")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 1;
  }

  try {
    if (train_bpe->parsed()) return cmd_train_bpe(tb_corpus, tb_vocab, tb_out);
    if (train_lm->parsed()) return cmd_train_lm(tl_corpus, tl_dev, tl_config, tl_out, tl_seed);
    if (score_nbest->parsed()) {
      return cmd_score_nbest(sn_nbest, sn_ckpt, sn_tok, sn_field, sn_out, sn_cap);
    }
    if (rescore_cmd->parsed()) {
      return cmd_rescore(rs_nbest, rs_lambdas, rs_topk, rs_out, rs_best, rs_refs, rs_report,
                         rs_cap, rs_wip, rs_post_topk);
    }
    if (grid_search->parsed()) {
      return cmd_grid_search(gs_nbest, gs_refs, gs_grid, gs_topk, gs_out, gs_cap);
    }
    if (wer->parsed()) return cmd_wer(wr_hyp, wr_ref);
    if (am_forward->parsed()) return cmd_am_forward(af_features, af_model, af_out);
    if (spec_augment->parsed()) return cmd_spec_augment(sa_features, sa_config, sa_seed, sa_out);
    if (init_am->parsed()) return cmd_init_am(ia_config, ia_seed, ia_out);
  } catch (const UsageError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ConfigError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
