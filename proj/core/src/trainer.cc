// asrkit/trainer.cc

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

#include "asrkit/trainer.h"

#include <algorithm>
#include <fstream>
#include <numeric>

namespace asrkit {
namespace train {

namespace {

std::vector<int> truncated(const std::vector<int> &tokens, int max_len) {
  if (static_cast<int>(tokens.size()) <= max_len) return tokens;
  return std::vector<int>(tokens.begin(), tokens.begin() + max_len);
}

}  // namespace

TrainResult train_lm(lm::LmModel &model, const std::vector<std::vector<int>> &train_corpus,
                     const std::vector<std::vector<int>> &dev_corpus,
                     const TrainConfig &config) {
  if (train_corpus.empty()) throw DataError("train_lm: empty corpus");
  if (config.batch_size < 1) throw ConfigError("train_lm: batch_size must be >= 1");
  if (config.max_seq_len < 1) throw ConfigError("train_lm: max_seq_len must be >= 1");

  // Length buckets: stable sort by (length, original index), then batches of
  // consecutive sequences.  Batch order is reshuffled from the seed each
  // epoch; sequences within a batch keep ascending index order.
  const int n = static_cast<int>(train_corpus.size());
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const size_t la = train_corpus[static_cast<size_t>(a)].size();
    const size_t lb = train_corpus[static_cast<size_t>(b)].size();
    if (la != lb) return la < lb;
    return a < b;
  });
  const int num_batches = (n + config.batch_size - 1) / config.batch_size;
  std::vector<std::vector<int>> batches(static_cast<size_t>(num_batches));
  for (int i = 0; i < n; ++i) {
    batches[static_cast<size_t>(i / config.batch_size)].push_back(order[static_cast<size_t>(i)]);
  }

  CosineSchedule schedule;
  schedule.base_lr = config.lr;
  schedule.min_lr = config.min_lr;
  schedule.warmup_steps = config.warmup_steps;
  schedule.total_steps = std::max(1, config.epochs * num_batches);

  RAdam optimizer(config.radam);
  Rng rng(config.seed);
  // Separate deterministic stream for dropout masks.
  Rng dropout_rng(config.seed ^ 0x5DEECE66DULL);
  const bool use_dropout = model.config().dropout > 0.0;
  auto params = model.parameters();

  TrainResult result;
  double interval_loss = 0.0;
  int interval_steps = 0;
  int step = 0;

  auto record = [&]() {
    CurvePoint point;
    point.step = step;
    point.train_loss = interval_steps > 0 ? interval_loss / interval_steps : 0.0;
    point.dev_ppl = dev_corpus.empty() ? 0.0 : model.perplexity(dev_corpus);
    result.curve.push_back(point);
    interval_loss = 0.0;
    interval_steps = 0;
  };

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::vector<int> batch_order(batches.size());
    std::iota(batch_order.begin(), batch_order.end(), 0);
    for (size_t i = batch_order.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(rng.next_below(i));
      std::swap(batch_order[i - 1], batch_order[j]);
    }

    for (int bi : batch_order) {
      model.zero_grads();
      const auto &batch = batches[static_cast<size_t>(bi)];
      int64_t batch_tokens = 0;
      for (int si : batch) {
        batch_tokens += static_cast<int64_t>(
            truncated(train_corpus[static_cast<size_t>(si)], config.max_seq_len).size() + 1);
      }
      const double scale = 1.0 / static_cast<double>(batch_tokens);
      double batch_nll = 0.0;
      for (int si : batch) {
        auto seq = truncated(train_corpus[static_cast<size_t>(si)], config.max_seq_len);
        batch_nll +=
            model.forward_backward(seq, scale, use_dropout ? &dropout_rng : nullptr).first;
      }
      if (config.grad_clip > 0.0) clip_global_norm(params, config.grad_clip);
      const double lr = lr_at(schedule, step);
      optimizer.step(params, lr);
      ++step;

      const double mean_loss = batch_nll / static_cast<double>(batch_tokens);
      result.step_losses.push_back(mean_loss);
      interval_loss += mean_loss;
      ++interval_steps;
      if (config.eval_interval > 0 && step % config.eval_interval == 0) record();
    }
  }
  if (interval_steps > 0 || result.curve.empty()) record();

  result.steps = step;
  result.final_dev_ppl = result.curve.back().dev_ppl;
  return result;
}

void write_curve_csv(const std::string &path, const std::vector<CurvePoint> &curve) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("curve csv: cannot write " + path);
  out << "step,train_loss,dev_ppl\n";
  out.precision(17);
  for (const auto &point : curve) {
    out << point.step << "," << point.train_loss << "," << point.dev_ppl << "\n";
  }
}

}  // namespace train
}  // namespace asrkit
