// Copyright 2026 The Narrev Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Binary maximum entropy classifier (L2-regularized logistic regression).
//
// Objective over examples (x_i, y_i), y_i in {-1, +1}:
//   f(w, b) = sum_i log(1 + exp(-y_i (w.x_i + b))) + (l2_c / 2) |w|^2
// The bias is not regularized. Minimized with L-BFGS and a backtracking
// Armijo line search, so the objective never increases between iterations.

#ifndef NARREV_MAXENT_H_
#define NARREV_MAXENT_H_

#include <string>
#include <string_view>
#include <vector>

#include "narrev/features.h"

namespace narrev {

struct TrainConfig {
  double l2_c = 1.0;
  int max_iterations = 500;
  double tolerance = 1e-6;  // on the gradient norm
  int history = 10;         // L-BFGS memory
};

struct LabeledExample {
  const FeatureVector *x = nullptr;
  bool positive = false;
};

class MaxEntModel {
 public:
  MaxEntModel() = default;
  MaxEntModel(std::vector<double> weights, double bias, FeatureSpace space);

  const std::vector<double> &weights() const { return weights_; }
  double bias() const { return bias_; }
  const FeatureSpace &space() const { return space_; }

  // w.x + b. Throws InvalidArgument for an id outside the space.
  double Score(const FeatureVector &x) const;
  // sigmoid(w.x + b)
  double PredictProb(const FeatureVector &x) const;
  // 1 - PredictProb(x)
  double PredictProbNegative(const FeatureVector &x) const;

  // Objective value after each optimizer iteration (index 0 = start).
  const std::vector<double> &loss_trace() const { return loss_trace_; }
  int iterations() const { return static_cast<int>(loss_trace_.size()) - 1; }
  double final_gradient_norm() const { return final_gradient_norm_; }

  // {"bias": b, "weights": [...], "space": {...}}
  std::string ToJson() const;
  static MaxEntModel FromJson(std::string_view text);

 private:
  friend MaxEntModel Train(const std::vector<FeatureVector> &,
                           const std::vector<FeatureVector> &,
                           const FeatureSpace &, const TrainConfig &);

  std::vector<double> weights_;
  double bias_ = 0.0;
  FeatureSpace space_;
  std::vector<double> loss_trace_;
  double final_gradient_norm_ = 0.0;
};

double Sigmoid(double z);

// Objective and exact gradient at parameters (weights..., bias); the
// gradient has dim + 1 entries with the bias last.
struct LossAndGradient {
  double loss = 0.0;
  std::vector<double> gradient;
};

LossAndGradient ComputeLossAndGradient(const std::vector<double> &params,
                                       const std::vector<LabeledExample> &data,
                                       size_t dim, const TrainConfig &cfg);

// Trains on positives vs negatives over `space` (which must cover every id).
// Deterministic, and independent of example order. Throws InvalidArgument
// when a class is empty or a feature value is not finite.
MaxEntModel Train(const std::vector<FeatureVector> &positives,
                  const std::vector<FeatureVector> &negatives,
                  const FeatureSpace &space, const TrainConfig &cfg = {});

}  // namespace narrev

#endif  // NARREV_MAXENT_H_
