// asrkit/lm.cc

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

#include "asrkit/lm.h"

#include <cmath>
#include <utility>

#include "asrkit/checkpoint.h"

namespace asrkit {
namespace lm {

SelfAttentiveSruBlock SelfAttentiveSruBlock::create(int dim, int proj_dim, int heads) {
  SelfAttentiveSruBlock block;
  block.attn = MhaParams::create(heads, dim, proj_dim, dim);
  block.cell = SruCell::create(dim, /*with_linear_u=*/false);
  return block;
}

Tensor SelfAttentiveSruBlock::forward(const Tensor &x, MhaTape *attn_tape,
                                      SruTape *sru_tape) const {
  MhaTape local_attn;
  MhaTape &at = attn_tape ? *attn_tape : local_attn;
  at = causal_mha(x, attn);
  SruTape local_sru;
  SruTape &st = sru_tape ? *sru_tape : local_sru;
  st = sru_cell_forward(x, cell, at.u, Tensor({cell.dim}));
  return st.h;
}

LmModel::LmModel(const Config &config, text::Vocabulary vocab)
    : config_(config), vocab_(std::move(vocab)) {
  if (config_.layers < 1) throw ConfigError("lm: layers must be >= 1");
  const int V = vocab_.size();
  const int d = config_.dim;
  embedding_ = Tensor({V, d});
  for (int i = 0; i < config_.layers; ++i) {
    blocks_.push_back(SelfAttentiveSruBlock::create(d, config_.proj_dim, config_.heads));
  }
  if (!config_.tie_weights) out_proj_ = Tensor({d, V});
  out_bias_ = Tensor({V});

  g_embedding_ = Tensor({V, d});
  block_grads_.resize(static_cast<size_t>(config_.layers));
  for (auto &bg : block_grads_) {
    bg.w_q = Tensor({d, config_.proj_dim});
    bg.w_k = Tensor({d, config_.proj_dim});
    bg.w_v = Tensor({d, config_.proj_dim});
    bg.w_o = Tensor({config_.proj_dim, 3 * d});
    bg.v = Tensor({d});
    bg.v_prime = Tensor({d});
    bg.b = Tensor({d});
    bg.b_prime = Tensor({d});
  }
  if (!config_.tie_weights) g_out_proj_ = Tensor({d, V});
  g_out_bias_ = Tensor({V});
}

void LmModel::init_params(uint64_t seed) {
  config_.seed = seed;
  Rng rng(seed);
  embedding_ = Tensor::uniform({vocab_.size(), config_.dim}, rng, -0.1, 0.1);
  for (auto &block : blocks_) {
    block.attn.init(rng);
    block.cell.init(rng);
  }
  if (!config_.tie_weights) {
    const double a = std::sqrt(6.0 / (config_.dim + vocab_.size()));
    out_proj_ = Tensor::uniform({config_.dim, vocab_.size()}, rng, -a, a);
  }
  out_bias_.set_zero();
}

void LmModel::check_ids(const std::vector<int> &tokens) const {
  for (int id : tokens) {
    if (id < 0 || id >= vocab_.size()) {
      throw DataError("lm: unknown token id " + std::to_string(id));
    }
  }
}

Tensor LmModel::embed(const std::vector<int> &inputs) const {
  const int T = static_cast<int>(inputs.size());
  const int d = config_.dim;
  Tensor x({T, d});
  for (int t = 0; t < T; ++t) {
    const double *src = embedding_.row(inputs[static_cast<size_t>(t)]);
    double *dst = x.row(t);
    for (int e = 0; e < d; ++e) dst[e] = src[e];
  }
  return x;
}

Tensor LmModel::output_logits(const Tensor &h) const {
  const int T = h.dim(0);
  const int d = config_.dim;
  const int V = vocab_.size();
  Tensor logits({T, V});
  if (config_.tie_weights) {
    // logits[t,w] = <h_t, emb_w> + bias_w; both rows are contiguous.
    for (int t = 0; t < T; ++t) {
      const double *hr = h.row(t);
      double *lr = logits.row(t);
      for (int w = 0; w < V; ++w) {
        const double *er = embedding_.row(w);
        double s = 0.0;
        for (int e = 0; e < d; ++e) s += hr[e] * er[e];
        lr[w] = s + out_bias_.at(w);
      }
    }
  } else {
    logits = matmul(h, out_proj_);
    for (int t = 0; t < T; ++t) {
      double *lr = logits.row(t);
      for (int w = 0; w < V; ++w) lr[w] += out_bias_.at(w);
    }
  }
  return logits;
}

std::vector<double> LmModel::conditional_logprobs(const std::vector<int> &tokens) const {
  check_ids(tokens);
  std::vector<int> inputs, targets;
  inputs.push_back(vocab_.bos_id());
  inputs.insert(inputs.end(), tokens.begin(), tokens.end());
  targets.assign(tokens.begin(), tokens.end());
  targets.push_back(vocab_.eos_id());

  Tensor x = embed(inputs);
  for (const auto &block : blocks_) x = block.forward(x, nullptr, nullptr);
  Tensor logits = output_logits(x);

  const int T = logits.dim(0);
  const int V = logits.dim(1);
  std::vector<double> lps(static_cast<size_t>(T));
  for (int t = 0; t < T; ++t) {
    const double lse = logsumexp_span(logits.row(t), V);
    lps[static_cast<size_t>(t)] = logits.at(t, targets[static_cast<size_t>(t)]) - lse;
  }
  return lps;
}

double LmModel::sequence_logprob(const std::vector<int> &tokens) const {
  double lp = 0.0;
  for (double v : conditional_logprobs(tokens)) lp += v;
  return lp;
}

double LmModel::perplexity(const std::vector<std::vector<int>> &corpus) const {
  if (corpus.empty()) throw DataError("perplexity: empty corpus");
  double total_lp = 0.0;
  int64_t total_tokens = 0;
  for (const auto &utt : corpus) {
    total_lp += sequence_logprob(utt);
    total_tokens += static_cast<int64_t>(utt.size()) + 1;
  }
  return std::exp(-total_lp / static_cast<double>(total_tokens));
}

std::pair<double, int> LmModel::forward_backward(const std::vector<int> &tokens,
                                                 double loss_scale, Rng *dropout_rng) {
  check_ids(tokens);
  const bool use_dropout = config_.dropout > 0.0;
  if (use_dropout && dropout_rng == nullptr) {
    throw ConfigError("lm: dropout " + std::to_string(config_.dropout) +
                      " configured but no rng supplied");
  }
  std::vector<int> inputs, targets;
  inputs.push_back(vocab_.bos_id());
  inputs.insert(inputs.end(), tokens.begin(), tokens.end());
  targets.assign(tokens.begin(), tokens.end());
  targets.push_back(vocab_.eos_id());

  const int T = static_cast<int>(inputs.size());
  const int d = config_.dim;
  const int V = vocab_.size();

  // Forward with tapes.
  Tensor x0 = embed(inputs);
  std::vector<MhaTape> attn_tapes(blocks_.size());
  std::vector<SruTape> sru_tapes(blocks_.size());
  std::vector<Tensor> dropout_masks(blocks_.size());
  Tensor x = x0;
  for (size_t i = 0; i < blocks_.size(); ++i) {
    x = blocks_[i].forward(x, &attn_tapes[i], &sru_tapes[i]);
    if (use_dropout) {
      Tensor mask({T, d});
      const double keep = 1.0 - config_.dropout;
      for (int64_t e = 0; e < mask.size(); ++e) {
        mask.data()[e] = dropout_rng->next_double() < config_.dropout ? 0.0 : 1.0 / keep;
      }
      for (int64_t e = 0; e < x.size(); ++e) x.data()[e] *= mask.data()[e];
      dropout_masks[i] = std::move(mask);
    }
  }
  Tensor logits = output_logits(x);

  // Softmax cross-entropy: d(-logprob)/dlogits = p - onehot.
  double sum_nll = 0.0;
  Tensor dlogits({T, V});
  for (int t = 0; t < T; ++t) {
    const double *lr = logits.row(t);
    double *dr = dlogits.row(t);
    const double lse = logsumexp_span(lr, V);
    const int target = targets[static_cast<size_t>(t)];
    sum_nll -= lr[target] - lse;
    for (int w = 0; w < V; ++w) dr[w] = loss_scale * std::exp(lr[w] - lse);
    dr[target] -= loss_scale;
  }

  // Output layer backward.
  Tensor g_h({T, d});
  for (int t = 0; t < T; ++t) {
    const double *dr = dlogits.row(t);
    for (int w = 0; w < V; ++w) g_out_bias_.at(w) += dr[w];
  }
  if (config_.tie_weights) {
    // g_emb += dlogits^T h ; g_h = dlogits emb
    for (int t = 0; t < T; ++t) {
      const double *dr = dlogits.row(t);
      const double *hr = x.row(t);
      double *ghr = g_h.row(t);
      for (int w = 0; w < V; ++w) {
        const double dv = dr[w];
        if (dv == 0.0) continue;
        double *ger = g_embedding_.row(w);
        const double *er = embedding_.row(w);
        for (int e = 0; e < d; ++e) {
          ger[e] += dv * hr[e];
          ghr[e] += dv * er[e];
        }
      }
    }
  } else {
    add_inplace(g_out_proj_, matmul(transpose(x), dlogits));
    g_h = matmul(dlogits, transpose(out_proj_));
  }

  // Blocks backward, deepest first.
  Tensor zero_c({d});
  for (int i = static_cast<int>(blocks_.size()) - 1; i >= 0; --i) {
    auto &block = blocks_[static_cast<size_t>(i)];
    auto &bg = block_grads_[static_cast<size_t>(i)];
    if (use_dropout) {
      // g_h is the gradient of the masked output; unmask it.
      const Tensor &mask = dropout_masks[static_cast<size_t>(i)];
      for (int64_t e = 0; e < g_h.size(); ++e) g_h.data()[e] *= mask.data()[e];
    }
    SruGrads sg = sru_cell_backward(block.cell, sru_tapes[static_cast<size_t>(i)], g_h, zero_c);
    add_inplace(bg.v, sg.v);
    add_inplace(bg.v_prime, sg.v_prime);
    add_inplace(bg.b, sg.b);
    add_inplace(bg.b_prime, sg.b_prime);
    MhaGrads ag = causal_mha_backward(block.attn, attn_tapes[static_cast<size_t>(i)], sg.u);
    add_inplace(bg.w_q, ag.w_q);
    add_inplace(bg.w_k, ag.w_k);
    add_inplace(bg.w_v, ag.w_v);
    add_inplace(bg.w_o, ag.w_o);
    // x feeds both the attention and the recurrence highway.
    g_h = sg.x;
    add_inplace(g_h, ag.x);
  }

  // Embedding scatter.
  for (int t = 0; t < T; ++t) {
    double *ger = g_embedding_.row(inputs[static_cast<size_t>(t)]);
    const double *ghr = g_h.row(t);
    for (int e = 0; e < d; ++e) ger[e] += ghr[e];
  }

  return {sum_nll, T};
}

std::vector<ParamRef> LmModel::parameters() {
  std::vector<ParamRef> params;
  params.push_back({"embedding", &embedding_, &g_embedding_});
  for (size_t i = 0; i < blocks_.size(); ++i) {
    const std::string p = "block" + std::to_string(i) + ".";
    auto &b = blocks_[i];
    auto &g = block_grads_[i];
    params.push_back({p + "w_q", &b.attn.w_q, &g.w_q});
    params.push_back({p + "w_k", &b.attn.w_k, &g.w_k});
    params.push_back({p + "w_v", &b.attn.w_v, &g.w_v});
    params.push_back({p + "w_o", &b.attn.w_o, &g.w_o});
    params.push_back({p + "v", &b.cell.v, &g.v});
    params.push_back({p + "v_prime", &b.cell.v_prime, &g.v_prime});
    params.push_back({p + "b", &b.cell.b, &g.b});
    params.push_back({p + "b_prime", &b.cell.b_prime, &g.b_prime});
  }
  if (!config_.tie_weights) params.push_back({"out_proj", &out_proj_, &g_out_proj_});
  params.push_back({"out_bias", &out_bias_, &g_out_bias_});
  return params;
}

void LmModel::zero_grads() {
  for (auto &p : parameters()) p.grad->set_zero();
}

void LmModel::save(const std::string &prefix) const {
  nlohmann::json manifest;
  manifest["format"] = "asrkit-checkpoint-v1";
  manifest["kind"] = "lm";
  manifest["layers"] = config_.layers;
  manifest["dim"] = config_.dim;
  manifest["proj_dim"] = config_.proj_dim;
  manifest["heads"] = config_.heads;
  manifest["tie_weights"] = config_.tie_weights;
  manifest["dropout"] = config_.dropout;
  manifest["seed"] = config_.seed;
  manifest["vocab"] = vocab_.tokens();

  std::vector<std::pair<std::string, const Tensor *>> tensors;
  auto &self = *const_cast<LmModel *>(this);  // parameters() only reads layout
  for (const auto &p : self.parameters()) tensors.emplace_back(p.name, p.value);
  checkpoint::write(prefix, std::move(manifest), tensors);
}

LmModel LmModel::load(const std::string &prefix) {
  checkpoint::Loaded loaded = checkpoint::read(prefix);
  const auto &m = loaded.manifest;
  if (!m.contains("kind") || m["kind"] != "lm") {
    throw DataError("lm checkpoint: wrong kind in " + prefix + ".json");
  }
  Config config;
  config.layers = m.at("layers").get<int>();
  config.dim = m.at("dim").get<int>();
  config.proj_dim = m.at("proj_dim").get<int>();
  config.heads = m.at("heads").get<int>();
  config.tie_weights = m.at("tie_weights").get<bool>();
  config.dropout = m.value("dropout", 0.0);
  config.seed = m.at("seed").get<uint64_t>();
  text::Vocabulary vocab(m.at("vocab").get<std::vector<std::string>>());

  LmModel model(config, std::move(vocab));
  for (auto &p : model.parameters()) {
    auto it = loaded.tensors.find(p.name);
    if (it == loaded.tensors.end()) {
      throw DataError("lm checkpoint: missing tensor " + p.name);
    }
    if (!it->second.same_shape(*p.value)) {
      throw DataError("lm checkpoint: shape mismatch for " + p.name);
    }
    *p.value = it->second;
  }
  return model;
}

}  // namespace lm
}  // namespace asrkit
