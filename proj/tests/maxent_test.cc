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


#include "narrev/maxent.h"

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "narrev/error.h"
#include "narrev/random.h"

namespace narrev {
namespace {

FeatureSpace Space(size_t dim) {
  FeatureSpace s;
  for (size_t i = 0; i < dim; ++i) s.Intern("f" + std::to_string(i));
  s.Freeze();
  return s;
}

FeatureVector Dense(const std::vector<double> &v) {
  FeatureVector x;
  for (size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0.0) x.entries.emplace_back(static_cast<int>(i), v[i]);
  }
  return x;
}

TEST(SigmoidTest, StableAtExtremes) {
  EXPECT_DOUBLE_EQ(Sigmoid(0.0), 0.5);
  EXPECT_NEAR(Sigmoid(800.0), 1.0, 1e-15);
  EXPECT_NEAR(Sigmoid(-800.0), 0.0, 1e-15);
  EXPECT_NEAR(Sigmoid(2.0) + Sigmoid(-2.0), 1.0, 1e-15);
}

TEST(MaxEntTest, SeparableData) {
  std::vector<FeatureVector> pos = {Dense({1, 0}), Dense({2, 0.5}), Dense({1.5, 1})};
  std::vector<FeatureVector> neg = {Dense({0, 1}), Dense({0.5, 2}), Dense({0, 1.5})};
  MaxEntModel m = Train(pos, neg, Space(2));
  for (const auto &x : pos) EXPECT_GT(m.PredictProb(x), 0.5);
  for (const auto &x : neg) EXPECT_LT(m.PredictProb(x), 0.5);
  for (const auto &x : pos) {
    EXPECT_NEAR(m.PredictProb(x) + m.PredictProbNegative(x), 1.0, 1e-15);
  }
}

TEST(MaxEntTest, LossNeverIncreases) {
  Rng rng(9);
  std::vector<FeatureVector> pos, neg;
  for (int i = 0; i < 60; ++i) {
    std::vector<double> v(5);
    for (double &x : v) x = rng.UniformDouble() * 2 - 1;
    (v[0] + 0.3 * v[1] + 0.2 * rng.UniformDouble() > 0 ? pos : neg).push_back(Dense(v));
  }
  MaxEntModel m = Train(pos, neg, Space(5));
  const auto &trace = m.loss_trace();
  ASSERT_GE(trace.size(), 2u);
  for (size_t i = 1; i < trace.size(); ++i) EXPECT_LE(trace[i], trace[i - 1] + 1e-12);
  EXPECT_LE(m.final_gradient_norm(), 1e-6);
}

TEST(MaxEntTest, GradientMatchesFiniteDifferences) {
  Rng rng(17);
  TrainConfig cfg;
  cfg.l2_c = 0.7;
  for (int problem = 0; problem < 20; ++problem) {
    const size_t dim = 2 + rng.Uniform(6);
    std::vector<FeatureVector> xs(10 + rng.Uniform(20));
    std::vector<LabeledExample> data;
    for (auto &x : xs) {
      std::vector<double> v(dim);
      for (double &e : v) e = rng.Bernoulli(0.3) ? 0.0 : rng.UniformDouble() * 4 - 2;
      x = Dense(v);
      data.push_back({&x, rng.Bernoulli(0.5)});
    }
    std::vector<double> params(dim + 1);
    for (double &p : params) p = rng.UniformDouble() * 2 - 1;
    LossAndGradient lg = ComputeLossAndGradient(params, data, dim, cfg);
    for (size_t i = 0; i <= dim; ++i) {
      const double h = 1e-5;
      auto plus = params, minus = params;
      plus[i] += h;
      minus[i] -= h;
      const double fd = (ComputeLossAndGradient(plus, data, dim, cfg).loss -
                         ComputeLossAndGradient(minus, data, dim, cfg).loss) /
                        (2 * h);
      EXPECT_LE(std::abs(fd - lg.gradient[i]), 1e-4 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST(MaxEntTest, BalancedDegenerateDataPredictsHalf) {
  std::vector<FeatureVector> same = {Dense({1, 2}), Dense({0, 3})};
  MaxEntModel m = Train(same, same, Space(2));
  for (const auto &x : same) EXPECT_NEAR(m.PredictProb(x), 0.5, 1e-6);
  EXPECT_NEAR(m.PredictProb(FeatureVector{}), 0.5, 1e-6);
}

TEST(MaxEntTest, OrderIndependentAndRoundTrip) {
  std::vector<FeatureVector> pos = {Dense({1, 0, 1}), Dense({2, 1, 0}), Dense({1, 1, 1})};
  std::vector<FeatureVector> neg = {Dense({0, 1, 0}), Dense({0, 2, 1}), Dense({1, 2, 0})};
  MaxEntModel a = Train(pos, neg, Space(3));
  std::reverse(pos.begin(), pos.end());
  std::rotate(neg.begin(), neg.begin() + 1, neg.end());
  MaxEntModel b = Train(pos, neg, Space(3));
  EXPECT_EQ(a.weights(), b.weights());
  EXPECT_EQ(a.bias(), b.bias());
  EXPECT_EQ(a.ToJson(), b.ToJson());
  MaxEntModel c = MaxEntModel::FromJson(a.ToJson());
  EXPECT_EQ(c.weights(), a.weights());
  EXPECT_EQ(c.bias(), a.bias());
  EXPECT_EQ(c.space(), a.space());
}

TEST(MaxEntTest, Errors) {
  std::vector<FeatureVector> one = {Dense({1})};
  EXPECT_THROW(Train({}, one, Space(1)), Error);
  EXPECT_THROW(Train(one, {}, Space(1)), Error);
  FeatureVector bad;
  bad.entries = {{0, NAN}};
  EXPECT_THROW(Train({bad}, one, Space(1)), Error);
  EXPECT_THROW(Train({Dense({0, 1})}, one, Space(1)), Error);
  TrainConfig cfg;
  cfg.l2_c = 0;
  EXPECT_THROW(Train(one, one, Space(1), cfg), Error);
  EXPECT_THROW(MaxEntModel({1.0, 2.0}, 0.0, Space(1)), Error);
  EXPECT_THROW(MaxEntModel::FromJson("{\"bias\": 1}"), Error);
  MaxEntModel m({1.0}, 0.0, Space(1));
  FeatureVector out;
  out.entries = {{4, 1.0}};
  EXPECT_THROW(m.Score(out), Error);
}

}  // namespace
}  // namespace narrev
