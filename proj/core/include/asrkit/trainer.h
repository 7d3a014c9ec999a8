// asrkit/trainer.h

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

#ifndef ASRKIT_TRAINER_H_
#define ASRKIT_TRAINER_H_

#include <string>
#include <vector>

#include "asrkit/lm.h"
#include "asrkit/optim.h"

namespace asrkit {
namespace train {

struct TrainConfig {
  int batch_size = 16;
  int epochs = 2;
  int max_seq_len = 275;  // training-time truncation only
  uint64_t seed = 1234;
  double lr = 2e-4;
  double min_lr = 0.0;
  int warmup_steps = 0;
  double grad_clip = 5.0;  // global norm; 0 disables
  int eval_interval = 200;
  RAdam::Options radam;
};

struct CurvePoint {
  int step = 0;
  double train_loss = 0.0;  // mean per-token loss since the previous row
  double dev_ppl = 0.0;
};

struct TrainResult {
  std::vector<CurvePoint> curve;
  std::vector<double> step_losses;  // per-step mean token loss
  double final_dev_ppl = 0.0;
  int steps = 0;
};

// Cross-entropy next-token training with RAdam and the cosine schedule.
// Utterances are bucketed by length, batch order is shuffled from the seed,
// and sequences inside a batch are processed independently in index order,
// so runs with the same seed produce bitwise-identical models.  Sequences
// longer than max_seq_len are truncated for training only.
TrainResult train_lm(lm::LmModel &model, const std::vector<std::vector<int>> &train_corpus,
                     const std::vector<std::vector<int>> &dev_corpus, const TrainConfig &config);

// Header "step,train_loss,dev_ppl".
void write_curve_csv(const std::string &path, const std::vector<CurvePoint> &curve);

}  // namespace train
}  // namespace asrkit

#endif  // ASRKIT_TRAINER_H_
