// asrkit/optim.cc

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

#include "asrkit/optim.h"

#include <cmath>

namespace asrkit {
namespace train {

void RAdam::step(const std::vector<lm::ParamRef> &params, double lr) {
  const double b1 = options_.beta1;
  const double b2 = options_.beta2;
  const double rho_inf = 2.0 / (1.0 - b2) - 1.0;
  t_ += 1;
  const double t = static_cast<double>(t_);
  const double b1t = std::pow(b1, t);
  const double b2t = std::pow(b2, t);
  const double rho_t = rho_inf - 2.0 * t * b2t / (1.0 - b2t);
  const bool rectified = rho_t > 4.0;
  double r_t = 0.0;
  if (rectified) {
    r_t = std::sqrt(((rho_t - 4.0) * (rho_t - 2.0) * rho_inf) /
                    ((rho_inf - 4.0) * (rho_inf - 2.0) * rho_t));
  }

  for (const auto &p : params) {
    if (!p.grad->all_finite()) {
      throw TrainError("radam: non-finite gradient for parameter " + p.name);
    }
    auto [it, inserted] = moments_.try_emplace(p.name);
    if (inserted) {
      it->second.m = Tensor(p.value->shape());
      it->second.v = Tensor(p.value->shape());
    }
    Tensor &m = it->second.m;
    Tensor &v = it->second.v;
    double *pm = m.data();
    double *pv = v.data();
    double *pw = p.value->data();
    const double *pg = p.grad->data();
    const int64_t n = p.value->size();
    for (int64_t i = 0; i < n; ++i) {
      const double g = pg[i];
      pm[i] = b1 * pm[i] + (1.0 - b1) * g;
      pv[i] = b2 * pv[i] + (1.0 - b2) * g * g;
      const double m_hat = pm[i] / (1.0 - b1t);
      if (rectified) {
        const double denom = std::sqrt(pv[i] / (1.0 - b2t)) + options_.eps;
        pw[i] -= lr * r_t * m_hat / denom;
      } else {
        pw[i] -= lr * m_hat;
      }
    }
  }
}

double lr_at(const CosineSchedule &schedule, int step) {
  if (schedule.warmup_steps < 0 || schedule.warmup_steps >= schedule.total_steps) {
    throw ConfigError("schedule: need 0 <= warmup_steps < total_steps");
  }
  if (schedule.min_lr > schedule.base_lr) {
    throw ConfigError("schedule: min_lr must not exceed base_lr");
  }
  if (step < 0 || step > schedule.total_steps) {
    throw UsageError("schedule: step " + std::to_string(step) + " outside [0, " +
                     std::to_string(schedule.total_steps) + "]");
  }
  if (step < schedule.warmup_steps) {
    return schedule.base_lr * static_cast<double>(step) /
           static_cast<double>(schedule.warmup_steps);
  }
  const double progress = static_cast<double>(step - schedule.warmup_steps) /
                          static_cast<double>(schedule.total_steps - schedule.warmup_steps);
  return schedule.min_lr +
         0.5 * (schedule.base_lr - schedule.min_lr) * (1.0 + std::cos(M_PI * progress));
}

double clip_global_norm(const std::vector<lm::ParamRef> &params, double max_norm) {
  double sq = 0.0;
  for (const auto &p : params) {
    const double *pg = p.grad->data();
    for (int64_t i = 0; i < p.grad->size(); ++i) sq += pg[i] * pg[i];
  }
  const double norm = std::sqrt(sq);
  if (max_norm > 0.0 && norm > max_norm) {
    const double scale = max_norm / norm;
    for (const auto &p : params) scale_inplace(*p.grad, scale);
  }
  return norm;
}

GradCheckReport grad_check(const std::vector<lm::ParamRef> &params,
                           const std::function<void()> &fill_grads,
                           const std::function<double()> &loss, double eps) {
  fill_grads();
  // Snapshot the analytic gradients before the FD loop perturbs anything.
  std::vector<Tensor> analytic;
  analytic.reserve(params.size());
  for (const auto &p : params) analytic.push_back(*p.grad);

  GradCheckReport report;
  for (size_t pi = 0; pi < params.size(); ++pi) {
    Tensor *value = params[pi].value;
    for (int64_t i = 0; i < value->size(); ++i) {
      const double saved = value->data()[i];
      value->data()[i] = saved + eps;
      const double up = loss();
      value->data()[i] = saved - eps;
      const double down = loss();
      value->data()[i] = saved;
      const double numeric = (up - down) / (2.0 * eps);
      const double a = analytic[pi].data()[i];
      const double rel =
          std::fabs(a - numeric) / std::max({std::fabs(a), std::fabs(numeric), 1e-8});
      ++report.checked;
      if (rel > report.max_rel_err) {
        report.max_rel_err = rel;
        report.worst = {params[pi].name, static_cast<int>(i), a, numeric, rel};
      }
    }
  }
  return report;
}

}  // namespace train
}  // namespace asrkit
