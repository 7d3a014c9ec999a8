// asrkit/optim.h

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

#ifndef ASRKIT_OPTIM_H_
#define ASRKIT_OPTIM_H_

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "asrkit/lm.h"
#include "asrkit/tensor.h"

namespace asrkit {
namespace train {

// Rectified Adam.  The bias-corrected first moment always applies; the
// adaptive second-moment denominator (with the variance-rectification
// multiplier) only engages once rho_t > 4, otherwise the update is plain
// momentum at the given learning rate.
class RAdam {
 public:
  struct Options {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
  };

  RAdam() : options_() {}
  explicit RAdam(Options options) : options_(options) {}

  int64_t step_count() const { return t_; }

  // One update over all parameters; throws TrainError naming the parameter
  // if a gradient is non-finite.
  void step(const std::vector<lm::ParamRef> &params, double lr);

 private:
  struct Moments {
    Tensor m, v;
  };
  Options options_;
  int64_t t_ = 0;
  std::map<std::string, Moments> moments_;
};

// Linear warmup from 0 to base_lr over warmup_steps, then cosine annealing
// from base_lr down to min_lr at total_steps.
struct CosineSchedule {
  double base_lr = 2e-4;
  double min_lr = 0.0;
  int warmup_steps = 0;
  int total_steps = 1;
};

double lr_at(const CosineSchedule &schedule, int step);

// Global-norm gradient clipping; returns the pre-clip norm.
double clip_global_norm(const std::vector<lm::ParamRef> &params, double max_norm);

// Central finite-difference check of analytic gradients.
//
//   numeric = (L(theta + eps e) - L(theta - eps e)) / (2 eps)
//   rel_err = |analytic - numeric| / max(|analytic|, |numeric|, 1e-8)
struct GradCheckEntry {
  std::string param;
  int index = -1;
  double analytic = 0.0;
  double numeric = 0.0;
  double rel_err = 0.0;
};

struct GradCheckReport {
  double max_rel_err = 0.0;
  GradCheckEntry worst;
  int64_t checked = 0;
};

// fill_grads must populate every grad buffer for the current parameter
// values (typically zero_grads + forward_backward); loss evaluates the same
// objective without touching gradients.
GradCheckReport grad_check(const std::vector<lm::ParamRef> &params,
                           const std::function<void()> &fill_grads,
                           const std::function<double()> &loss, double eps = 1e-5);

}  // namespace train
}  // namespace asrkit

#endif  // ASRKIT_OPTIM_H_
