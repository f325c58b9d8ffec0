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
#include <deque>
#include <numeric>

#include "json.hpp"
#include "narrev/error.h"

namespace narrev {

using json = nlohmann::json;

namespace {

// log(1 + exp(-m)) without overflow.
double LogisticLoss(double margin) {
  if (margin > 0) return std::log1p(std::exp(-margin));
  return -margin + std::log1p(std::exp(margin));
}

double Dot(const std::vector<double> &a, const std::vector<double> &b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double Norm(const std::vector<double> &a) { return std::sqrt(Dot(a, a)); }

double LinearScore(const std::vector<double> &params, size_t dim,
                   const FeatureVector &x) {
  double s = params[dim];
  for (const auto &[id, v] : x.entries) s += params[id] * v;
  return s;
}

struct Pair {
  std::vector<double> s;
  std::vector<double> y;
  double rho;
};

// Two-loop recursion: returns -H g.
std::vector<double> Direction(const std::deque<Pair> &history,
                              const std::vector<double> &g) {
  std::vector<double> q = g;
  std::vector<double> alpha(history.size());
  for (size_t k = history.size(); k-- > 0;) {
    alpha[k] = history[k].rho * Dot(history[k].s, q);
    for (size_t i = 0; i < q.size(); ++i) q[i] -= alpha[k] * history[k].y[i];
  }
  if (!history.empty()) {
    const Pair &last = history.back();
    const double gamma = Dot(last.s, last.y) / Dot(last.y, last.y);
    for (double &v : q) v *= gamma;
  }
  for (size_t k = 0; k < history.size(); ++k) {
    const double beta = history[k].rho * Dot(history[k].y, q);
    for (size_t i = 0; i < q.size(); ++i) q[i] += history[k].s[i] * (alpha[k] - beta);
  }
  for (double &v : q) v = -v;
  return q;
}

}  // namespace

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

MaxEntModel::MaxEntModel(std::vector<double> weights, double bias,
                         FeatureSpace space)
    : weights_(std::move(weights)), bias_(bias), space_(std::move(space)) {
  if (weights_.size() != space_.size()) {
    throw InvalidArgument("weight vector length " + std::to_string(weights_.size()) +
                          " does not match feature space size " +
                          std::to_string(space_.size()));
  }
  for (double w : weights_) {
    if (!std::isfinite(w)) throw InvalidArgument("non-finite weight");
  }
  if (!std::isfinite(bias_)) throw InvalidArgument("non-finite bias");
}

double MaxEntModel::Score(const FeatureVector &x) const {
  double s = bias_;
  for (const auto &[id, v] : x.entries) {
    if (id < 0 || static_cast<size_t>(id) >= weights_.size()) {
      throw InvalidArgument("feature id " + std::to_string(id) +
                            " outside the model's feature space");
    }
    s += weights_[id] * v;
  }
  return s;
}

double MaxEntModel::PredictProb(const FeatureVector &x) const {
  return Sigmoid(Score(x));
}

double MaxEntModel::PredictProbNegative(const FeatureVector &x) const {
  return 1.0 - PredictProb(x);
}

std::string MaxEntModel::ToJson() const {
  json js;
  js["bias"] = bias_;
  js["weights"] = weights_;
  js["space"] = json::parse(space_.ToJson());
  return js.dump();
}

MaxEntModel MaxEntModel::FromJson(std::string_view text) {
  try {
    json js = json::parse(text);
    FeatureSpace space = FeatureSpace::FromJson(js.at("space").dump());
    return MaxEntModel(js.at("weights").get<std::vector<double>>(),
                       js.at("bias").get<double>(), std::move(space));
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kParse, std::string("bad model: ") + e.what());
  }
}

LossAndGradient ComputeLossAndGradient(const std::vector<double> &params,
                                       const std::vector<LabeledExample> &data,
                                       size_t dim, const TrainConfig &cfg) {
  if (params.size() != dim + 1) {
    throw InvalidArgument("parameter vector must have dim + 1 entries");
  }
  LossAndGradient out;
  out.gradient.assign(dim + 1, 0.0);
  for (const LabeledExample &ex : data) {
    const double y = ex.positive ? 1.0 : -1.0;
    const double margin = y * LinearScore(params, dim, *ex.x);
    out.loss += LogisticLoss(margin);
    // d/ds log(1 + exp(-y s)) = -y sigmoid(-y s)
    const double coef = -y * Sigmoid(-margin);
    for (const auto &[id, v] : ex.x->entries) out.gradient[id] += coef * v;
    out.gradient[dim] += coef;
  }
  double norm2 = 0.0;
  for (size_t i = 0; i < dim; ++i) {
    norm2 += params[i] * params[i];
    out.gradient[i] += cfg.l2_c * params[i];
  }
  out.loss += 0.5 * cfg.l2_c * norm2;
  return out;
}

MaxEntModel Train(const std::vector<FeatureVector> &positives,
                  const std::vector<FeatureVector> &negatives,
                  const FeatureSpace &space, const TrainConfig &cfg) {
  if (positives.empty() || negatives.empty()) {
    throw InvalidArgument("training needs at least one positive and one negative example");
  }
  if (!(cfg.l2_c > 0) || cfg.max_iterations <= 0 || !(cfg.tolerance > 0) ||
      cfg.history <= 0) {
    throw InvalidArgument("training configuration values must be positive");
  }
  const size_t dim = space.size();
  std::vector<LabeledExample> data;
  data.reserve(positives.size() + negatives.size());
  for (const auto &x : positives) data.push_back({&x, true});
  for (const auto &x : negatives) data.push_back({&x, false});
  for (const LabeledExample &ex : data) {
    ex.x->Validate();
    if (!ex.x->entries.empty() &&
        static_cast<size_t>(ex.x->entries.back().first) >= dim) {
      throw InvalidArgument("feature id outside the feature space");
    }
  }
  // Canonical order makes the floating-point sums independent of input order.
  std::sort(data.begin(), data.end(),
            [](const LabeledExample &a, const LabeledExample &b) {
              if (a.positive != b.positive) return a.positive;
              return a.x->entries < b.x->entries;
            });

  std::vector<double> x(dim + 1, 0.0);
  LossAndGradient cur = ComputeLossAndGradient(x, data, dim, cfg);
  std::vector<double> trace = {cur.loss};
  std::deque<Pair> history;

  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    if (Norm(cur.gradient) <= cfg.tolerance) break;
    std::vector<double> dir = Direction(history, cur.gradient);
    double slope = Dot(dir, cur.gradient);
    if (!(slope < 0)) {
      history.clear();
      dir = cur.gradient;
      for (double &v : dir) v = -v;
      slope = Dot(dir, cur.gradient);
    }
    double step = history.empty() ? std::min(1.0, 1.0 / Norm(cur.gradient)) : 1.0;
    std::vector<double> next(dim + 1);
    LossAndGradient trial;
    bool accepted = false;
    for (int tries = 0; tries < 60; ++tries) {
      for (size_t i = 0; i <= dim; ++i) next[i] = x[i] + step * dir[i];
      trial = ComputeLossAndGradient(next, data, dim, cfg);
      if (std::isfinite(trial.loss) && trial.loss <= cur.loss + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (history.empty()) break;
      history.clear();
      continue;
    }
    Pair p;
    p.s.resize(dim + 1);
    p.y.resize(dim + 1);
    for (size_t i = 0; i <= dim; ++i) {
      p.s[i] = next[i] - x[i];
      p.y[i] = trial.gradient[i] - cur.gradient[i];
    }
    const double sy = Dot(p.s, p.y);
    if (sy > 1e-12) {
      p.rho = 1.0 / sy;
      history.push_back(std::move(p));
      if (history.size() > static_cast<size_t>(cfg.history)) history.pop_front();
    }
    x.swap(next);
    cur = std::move(trial);
    trace.push_back(cur.loss);
  }

  MaxEntModel model(std::vector<double>(x.begin(), x.end() - 1), x[dim], space);
  model.loss_trace_ = std::move(trace);
  model.final_gradient_norm_ = Norm(cur.gradient);
  return model;
}

}  // namespace narrev
