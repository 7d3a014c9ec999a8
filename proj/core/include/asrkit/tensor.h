// asrkit/tensor.h

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

#ifndef ASRKIT_TENSOR_H_
#define ASRKIT_TENSOR_H_

#include <cstdint>
#include <string>
#include <vector>

#include "asrkit/error.h"
#include "asrkit/rng.h"

namespace asrkit {

// Dense row-major array of 64-bit floats with an explicit shape.  The data
// length always equals the product of the extents.  All model computation in
// this library runs on Tensor; there is no broadcasting and no views.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int> shape);  // zero-filled

  static Tensor zeros(std::vector<int> shape) { return Tensor(std::move(shape)); }
  static Tensor full(std::vector<int> shape, double value);
  static Tensor from(std::vector<int> shape, std::vector<double> values);
  // Uniform draws in [lo, hi), row-major fill order.
  static Tensor uniform(std::vector<int> shape, Rng &rng, double lo, double hi);

  int rank() const { return static_cast<int>(shape_.size()); }
  int dim(int i) const { return shape_[static_cast<size_t>(i)]; }
  const std::vector<int> &shape() const { return shape_; }
  int64_t size() const { return static_cast<int64_t>(data_.size()); }
  bool empty() const { return data_.empty(); }

  double *data() { return data_.data(); }
  const double *data() const { return data_.data(); }

  double &at(int i) { return data_[static_cast<size_t>(i)]; }
  double at(int i) const { return data_[static_cast<size_t>(i)]; }
  double &at(int i, int j) { return data_[static_cast<size_t>(i) * shape_[1] + j]; }
  double at(int i, int j) const { return data_[static_cast<size_t>(i) * shape_[1] + j]; }
  double &at(int i, int j, int k) {
    return data_[(static_cast<size_t>(i) * shape_[1] + j) * shape_[2] + k];
  }
  double at(int i, int j, int k) const {
    return data_[(static_cast<size_t>(i) * shape_[1] + j) * shape_[2] + k];
  }

  double *row(int i) { return data_.data() + static_cast<size_t>(i) * shape_[1]; }
  const double *row(int i) const { return data_.data() + static_cast<size_t>(i) * shape_[1]; }

  void fill(double value);
  void set_zero() { fill(0.0); }

  bool same_shape(const Tensor &other) const { return shape_ == other.shape_; }
  bool all_finite() const;

  // "[2,3]" style rendering for error messages.
  std::string shape_str() const;
  static std::string shape_str(const std::vector<int> &shape);

 private:
  std::vector<int> shape_;
  std::vector<double> data_;
};

// Throws DimensionError naming both shapes unless they are equal.
void check_same_shape(const Tensor &a, const Tensor &b, const char *where);

}  // namespace asrkit

#endif  // ASRKIT_TENSOR_H_
