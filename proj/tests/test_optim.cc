// tests/test_optim.cc

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

#include <gtest/gtest.h>

#include <cmath>

#include "asrkit/optim.h"

namespace asrkit {
namespace train {
namespace {

TEST(RAdam, ZeroGradientsAreFixedPoint) {
  Tensor w = Tensor::from({3}, {1.0, -2.0, 0.5});
  Tensor g({3});
  std::vector<lm::ParamRef> params = {{"w", &w, &g}};
  RAdam opt;
  for (int step = 0; step < 5; ++step) opt.step(params, 0.1);
  EXPECT_EQ(w.at(0), 1.0);
  EXPECT_EQ(w.at(1), -2.0);
  EXPECT_EQ(w.at(2), 0.5);
}

TEST(RAdam, FirstStepIsPlainMomentum) {
  // rho_1 = rho_inf - 2 b2 / (1 - b2) = 1 <= 4 with b2 = 0.999: no adaptive
  // denominator, update = -lr * bias-corrected momentum = -lr * g.
  Tensor w = Tensor::from({2}, {0.0, 0.0});
  Tensor g = Tensor::from({2}, {3.0, -7.0});
  std::vector<lm::ParamRef> params = {{"w", &w, &g}};
  RAdam opt;
  const double lr = 0.01;
  opt.step(params, lr);
  EXPECT_NEAR(w.at(0), -lr * 3.0, 1e-15);
  EXPECT_NEAR(w.at(1), -lr * -7.0, 1e-15);
}

// Scalar simulation of the published update rule, used as the oracle for
// the quadratic run below.
void radam_oracle_step(std::vector<double> &w, std::vector<double> &m,
                       std::vector<double> &v, int64_t t, double lr, double b1, double b2,
                       double eps) {
  const double rho_inf = 2.0 / (1.0 - b2) - 1.0;
  const double b1t = std::pow(b1, static_cast<double>(t));
  const double b2t = std::pow(b2, static_cast<double>(t));
  const double rho = rho_inf - 2.0 * t * b2t / (1.0 - b2t);
  for (size_t i = 0; i < w.size(); ++i) {
    const double g = w[i];  // gradient of 0.5 ||w||^2
    m[i] = b1 * m[i] + (1.0 - b1) * g;
    v[i] = b2 * v[i] + (1.0 - b2) * g * g;
    const double mh = m[i] / (1.0 - b1t);
    if (rho > 4.0) {
      const double r = std::sqrt(((rho - 4.0) * (rho - 2.0) * rho_inf) /
                                 ((rho_inf - 4.0) * (rho_inf - 2.0) * rho));
      w[i] -= lr * r * mh / (std::sqrt(v[i] / (1.0 - b2t)) + eps);
    } else {
      w[i] -= lr * mh;
    }
  }
}

TEST(RAdam, QuadraticMatchesSimulationOracle) {
  // f(w) = 0.5 ||w||^2 at lr 1e-2.  The norm decreases monotonically after
  // the warm start and the trajectory tracks the scalar oracle exactly; the
  // oracle puts the 1e-3 contraction point near step 1700.
  Tensor w = Tensor::from({4}, {1.0, -2.0, 0.5, 3.0});
  Tensor g({4});
  std::vector<lm::ParamRef> params = {{"w", &w, &g}};
  RAdam opt;

  std::vector<double> ow = {1.0, -2.0, 0.5, 3.0};
  std::vector<double> om(4, 0.0), ov(4, 0.0);

  const double init_norm = std::sqrt(1 + 4 + 0.25 + 9);
  double prev_norm = init_norm;
  bool monotone_after_warm_start = true;
  double norm_at_200 = 0.0;
  for (int step = 1; step <= 1700; ++step) {
    for (int i = 0; i < 4; ++i) g.at(i) = w.at(i);
    opt.step(params, 1e-2);
    radam_oracle_step(ow, om, ov, step, 1e-2, 0.9, 0.999, 1e-8);
    double norm = 0.0;
    for (int i = 0; i < 4; ++i) {
      ASSERT_DOUBLE_EQ(w.at(i), ow[static_cast<size_t>(i)]) << "step " << step;
      norm += w.at(i) * w.at(i);
    }
    norm = std::sqrt(norm);
    if (step > 10 && step <= 200 && norm > prev_norm) monotone_after_warm_start = false;
    if (step == 200) norm_at_200 = norm;
    prev_norm = norm;
  }
  EXPECT_TRUE(monotone_after_warm_start);
  EXPECT_LT(norm_at_200, init_norm);
  EXPECT_LT(prev_norm, 1e-3 * init_norm);
}

TEST(RAdam, LrZeroIsIdentity) {
  Tensor w = Tensor::from({2}, {5.0, -1.0});
  Tensor g = Tensor::from({2}, {1.0, 2.0});
  std::vector<lm::ParamRef> params = {{"w", &w, &g}};
  RAdam opt;
  for (int step = 0; step < 10; ++step) opt.step(params, 0.0);
  EXPECT_EQ(w.at(0), 5.0);
  EXPECT_EQ(w.at(1), -1.0);
}

TEST(RAdam, NonFiniteGradientNamesParameter) {
  Tensor w({1});
  Tensor g = Tensor::from({1}, {std::numeric_limits<double>::quiet_NaN()});
  std::vector<lm::ParamRef> params = {{"block0.w_q", &w, &g}};
  RAdam opt;
  try {
    opt.step(params, 0.1);
    FAIL() << "expected TrainError";
  } catch (const TrainError &e) {
    EXPECT_NE(std::string(e.what()).find("block0.w_q"), std::string::npos);
  }
}

TEST(CosineSchedule, Boundaries) {
  CosineSchedule s{1e-3, 1e-5, 100, 1000};
  EXPECT_DOUBLE_EQ(lr_at(s, 0), 0.0);
  EXPECT_DOUBLE_EQ(lr_at(s, 100), 1e-3);             // ramp end
  EXPECT_DOUBLE_EQ(lr_at(s, 1000), 1e-5);            // annealing end
  EXPECT_NEAR(lr_at(s, 550), (1e-3 + 1e-5) / 2, 1e-18);  // cosine midpoint
}

TEST(CosineSchedule, ContinuousAndNonIncreasingAfterWarmup) {
  CosineSchedule s{2e-4, 0.0, 20, 200};
  EXPECT_NEAR(lr_at(s, 19), lr_at(s, 20) * 19.0 / 20.0, 1e-18);
  double prev = lr_at(s, 20);
  for (int t = 21; t <= 200; ++t) {
    const double lr = lr_at(s, t);
    EXPECT_LE(lr, prev + 1e-18);
    prev = lr;
  }
}

TEST(CosineSchedule, RangeAndValidation) {
  CosineSchedule s{1e-3, 0.0, 0, 10};
  EXPECT_DOUBLE_EQ(lr_at(s, 0), 1e-3);  // no warmup
  EXPECT_THROW(lr_at(s, -1), UsageError);
  EXPECT_THROW(lr_at(s, 11), UsageError);
  CosineSchedule bad{1e-3, 0.0, 10, 10};
  EXPECT_THROW(lr_at(bad, 0), ConfigError);
  CosineSchedule bad2{1e-4, 1e-3, 0, 10};
  EXPECT_THROW(lr_at(bad2, 0), ConfigError);
}

TEST(GradCheck, QuadraticExact) {
  Tensor w = Tensor::from({1}, {3.0});
  Tensor g({1});
  std::vector<lm::ParamRef> params = {{"w", &w, &g}};
  auto loss = [&]() { return 0.5 * w.at(0) * w.at(0); };
  auto fill = [&]() { g.at(0) = w.at(0); };
  GradCheckReport report = grad_check(params, fill, loss);
  EXPECT_LT(report.max_rel_err, 1e-9);
  EXPECT_EQ(report.checked, 1);
}

TEST(GradCheck, FlagsCorruptedGradient) {
  Tensor w = Tensor::from({3}, {1.0, 2.0, -1.5});
  Tensor g({3});
  std::vector<lm::ParamRef> params = {{"w", &w, &g}};
  auto loss = [&]() {
    return 0.5 * (w.at(0) * w.at(0) + w.at(1) * w.at(1) + w.at(2) * w.at(2));
  };
  auto fill = [&]() {
    for (int i = 0; i < 3; ++i) g.at(i) = w.at(i);
    g.at(1) *= 1.10;  // +10% corruption on one coordinate
  };
  GradCheckReport report = grad_check(params, fill, loss);
  EXPECT_GT(report.max_rel_err, 1e-2);
  EXPECT_EQ(report.worst.index, 1);
}

TEST(ClipGlobalNorm, ScalesOnlyWhenAboveLimit) {
  Tensor w({2});
  Tensor g = Tensor::from({2}, {3.0, 4.0});  // norm 5
  std::vector<lm::ParamRef> params = {{"w", &w, &g}};
  EXPECT_DOUBLE_EQ(clip_global_norm(params, 10.0), 5.0);
  EXPECT_DOUBLE_EQ(g.at(0), 3.0);
  EXPECT_DOUBLE_EQ(clip_global_norm(params, 2.5), 5.0);
  EXPECT_NEAR(g.at(0), 1.5, 1e-15);
  EXPECT_NEAR(g.at(1), 2.0, 1e-15);
}

}  // namespace
}  // namespace train
}  // namespace asrkit
