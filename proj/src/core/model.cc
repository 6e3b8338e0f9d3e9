/*
 * Copyright 2026 The dcbench Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "dcbench/core/model.h"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "dcbench/core/error.h"
#include "dcbench/core/hash.h"

namespace dcbench {

std::string_view model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::kLogReg: return "logreg";
    case ModelKind::kLinearSvm: return "linear_svm";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "logreg") return ModelKind::kLogReg;
  if (name == "linear_svm") return ModelKind::kLinearSvm;
  throw Error(ErrorCode::kParseError, "unknown model kind " + std::string(name));
}

SuiteConfig SuiteConfig::standard(std::uint64_t seed) {
  SuiteConfig suite;
  suite.members.push_back(SuiteMember{ModelKind::kLogReg});
  suite.members.push_back(SuiteMember{ModelKind::kLinearSvm});
  suite.seed = seed;
  return suite;
}

void SuiteConfig::validate() const {
  if (members.empty()) {
    throw Error(ErrorCode::kInvalidSpec, "suite needs at least one member");
  }
  for (const SuiteMember& m : members) {
    if (m.iterations < 1) {
      throw Error(ErrorCode::kInvalidSpec, "iterations must be >= 1");
    }
    if (!(m.l2_lambda >= 0.0)) {
      throw Error(ErrorCode::kInvalidSpec, "l2_lambda must be >= 0");
    }
    if (!(m.learning_rate > 0.0)) {
      throw Error(ErrorCode::kInvalidSpec, "learning_rate must be > 0");
    }
  }
}

namespace {

void append_number(std::string& out, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

std::string member_key(const SuiteMember& m) {
  std::string key = "kind=";
  key += model_kind_name(m.kind);
  key += ";lr=";
  append_number(key, m.learning_rate);
  key += ";iterations=" + std::to_string(m.iterations);
  key += ";l2=";
  append_number(key, m.l2_lambda);
  return key;
}

}  // namespace

std::string member_hash(const SuiteMember& member) {
  return sha256_hex(member_key(member));
}

std::string suite_hash(const SuiteConfig& suite) {
  std::string key = "seed=" + std::to_string(suite.seed);
  for (const SuiteMember& m : suite.members) key += "|" + member_key(m);
  return sha256_hex(key);
}

void LinearModel::validate() const {
  if (num_classes <= 0 || dim <= 0 ||
      weights.size() != static_cast<std::size_t>(num_classes) * dim ||
      bias.size() != static_cast<std::size_t>(num_classes)) {
    throw Error(ErrorCode::kInvalidSpec, "linear model shape mismatch");
  }
  auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(weights.begin(), weights.end(), finite) ||
      !std::all_of(bias.begin(), bias.end(), finite)) {
    throw Error(ErrorCode::kInvalidSpec, "linear model has non-finite entries");
  }
}

namespace {

// Column-major copy of the features (x_t[j * n + i]) so the hot loops run
// contiguously over examples.
struct Transposed {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<double> x_t;
};

Transposed transpose(const FeatureMatrix& x) {
  Transposed t;
  t.n = x.rows;
  t.d = x.cols;
  t.x_t.resize(t.n * t.d);
  for (std::size_t i = 0; i < t.n; ++i) {
    for (std::size_t j = 0; j < t.d; ++j) {
      t.x_t[j * t.n + i] = x.values[i * t.d + j];
    }
  }
  return t;
}

// Hot loops get an AVX2 clone picked at load time. Contraction stays off
// (strict ISO mode) and every lane runs the same multiply and add as the
// scalar code, so both clones produce bit-identical results.
#if defined(__x86_64__) && defined(__GNUC__)
#define DCBENCH_CLONES __attribute__((target_clones("avx2", "default")))
#else
#define DCBENCH_CLONES
#endif

// s[c * n + i] = b_c + sum_j W_cj x_ij, summed in increasing j.
DCBENCH_CLONES
void compute_scores(const double* w, const double* b, const Transposed& x,
                    int num_classes, double* s) {
  const std::size_t n = x.n;
  const std::size_t d = x.d;
  for (int c = 0; c < num_classes; ++c) {
    double* __restrict sc = s + static_cast<std::size_t>(c) * n;
    for (std::size_t i = 0; i < n; ++i) sc[i] = b[c];
    const double* wc = w + static_cast<std::size_t>(c) * d;
    for (std::size_t j = 0; j < d; ++j) {
      const double wcj = wc[j];
      const double* __restrict xj = x.x_t.data() + j * n;
      for (std::size_t i = 0; i < n; ++i) sc[i] += wcj * xj[i];
    }
  }
}

// Turns class-major scores into the per-score loss derivative (already
// divided by n) in place and returns the data term of the loss.
double score_gradient(ModelKind kind, std::size_t n, int num_classes,
                      const int* labels, double* g,
                      std::vector<double>& scratch) {
  const double inv_n = 1.0 / static_cast<double>(n);
  double loss = 0.0;
  if (kind == ModelKind::kLogReg) {
    scratch.assign(2 * n, 0.0);
    double* max_s = scratch.data();
    double* z = scratch.data() + n;
    for (std::size_t i = 0; i < n; ++i) max_s[i] = g[i];
    for (int c = 1; c < num_classes; ++c) {
      const double* gc = g + static_cast<std::size_t>(c) * n;
      for (std::size_t i = 0; i < n; ++i) max_s[i] = std::max(max_s[i], gc[i]);
    }
    for (int c = 0; c < num_classes; ++c) {
      double* gc = g + static_cast<std::size_t>(c) * n;
      for (std::size_t i = 0; i < n; ++i) {
        gc[i] = std::exp(gc[i] - max_s[i]);
        z[i] += gc[i];
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      loss -= std::log(g[static_cast<std::size_t>(labels[i]) * n + i] / z[i]);
    }
    for (int c = 0; c < num_classes; ++c) {
      double* gc = g + static_cast<std::size_t>(c) * n;
      for (std::size_t i = 0; i < n; ++i) {
        gc[i] = (gc[i] / z[i] - (labels[i] == c ? 1.0 : 0.0)) * inv_n;
      }
    }
  } else {
    for (int c = 0; c < num_classes; ++c) {
      double* gc = g + static_cast<std::size_t>(c) * n;
      for (std::size_t i = 0; i < n; ++i) {
        const double t = (labels[i] == c) ? 1.0 : -1.0;
        const double margin = 1.0 - t * gc[i];
        if (margin > 0.0) {
          loss += margin;
          gc[i] = -t * inv_n;
        } else {
          gc[i] = 0.0;
        }
      }
    }
  }
  return loss * inv_n;
}

// Fixed four-lane summation order; the compiler can vectorize it without
// reassociating anything itself.
DCBENCH_CLONES
double dot(const double* __restrict a, const double* __restrict b,
           std::size_t n) {
  double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 += a[i] * b[i];
    acc1 += a[i + 1] * b[i + 1];
    acc2 += a[i + 2] * b[i + 2];
    acc3 += a[i + 3] * b[i + 3];
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += a[i] * b[i];
  return ((acc0 + acc1) + (acc2 + acc3)) + tail;
}

// grad_w = G X + l2 W ; grad_b = row sums of G (G is class-major).
void accumulate_gradient(const double* g, const Transposed& x, int num_classes,
                         const double* w, double l2, double* grad_w,
                         double* grad_b) {
  const std::size_t n = x.n;
  const std::size_t d = x.d;
  for (int c = 0; c < num_classes; ++c) {
    const double* gc = g + static_cast<std::size_t>(c) * n;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += gc[i];
    grad_b[c] = sum;
    for (std::size_t j = 0; j < d; ++j) {
      const std::size_t k = static_cast<std::size_t>(c) * d + j;
      grad_w[k] = l2 * w[k] + dot(gc, x.x_t.data() + j * n, n);
    }
  }
}

double l2_term(std::span<const double> w, double l2) {
  double sq = 0.0;
  for (double v : w) sq += v * v;
  return 0.5 * l2 * sq;
}

}  // namespace

Objective objective(ModelKind kind, std::span<const double> weights,
                    std::span<const double> bias, const FeatureMatrix& x,
                    std::span<const int> labels, int num_classes,
                    double l2_lambda) {
  if (labels.size() != x.rows) {
    throw Error(ErrorCode::kLengthMismatch, "labels vs rows");
  }
  if (x.rows == 0) throw Error(ErrorCode::kEmptyTrainSet, "objective");
  const Transposed xt = transpose(x);
  std::vector<double> g(x.rows * num_classes);
  std::vector<double> scratch;
  compute_scores(weights.data(), bias.data(), xt, num_classes, g.data());
  Objective out;
  out.loss = score_gradient(kind, x.rows, num_classes, labels.data(), g.data(),
                            scratch) +
             l2_term(weights, l2_lambda);
  out.grad_weights.assign(weights.size(), 0.0);
  out.grad_bias.assign(static_cast<std::size_t>(num_classes), 0.0);
  accumulate_gradient(g.data(), xt, num_classes, weights.data(), l2_lambda,
                      out.grad_weights.data(), out.grad_bias.data());
  return out;
}

LinearModel train(const SuiteMember& member, const Dataset& train_set) {
  if (train_set.empty()) {
    throw Error(ErrorCode::kEmptyTrainSet, "dataset " + train_set.id());
  }
  const Transposed x = transpose(feature_matrix(train_set));
  const std::vector<int> labels = train_set.labels();
  const int num_classes = train_set.num_classes();
  const std::size_t d = x.d;

  LinearModel model;
  model.kind = member.kind;
  model.num_classes = num_classes;
  model.dim = train_set.dim();
  model.weights.assign(static_cast<std::size_t>(num_classes) * d, 0.0);
  model.bias.assign(static_cast<std::size_t>(num_classes), 0.0);
  model.training_config_hash = member_hash(member);

  std::vector<double> g(x.n * num_classes);
  std::vector<double> scratch;
  std::vector<double> grad_w(model.weights.size());
  std::vector<double> grad_b(model.bias.size());
  const double lr = member.learning_rate;
  for (int it = 0; it < member.iterations; ++it) {
    compute_scores(model.weights.data(), model.bias.data(), x, num_classes,
                   g.data());
    score_gradient(member.kind, x.n, num_classes, labels.data(), g.data(),
                   scratch);
    accumulate_gradient(g.data(), x, num_classes, model.weights.data(),
                        member.l2_lambda, grad_w.data(), grad_b.data());
    for (std::size_t k = 0; k < grad_w.size(); ++k) {
      model.weights[k] -= lr * grad_w[k];
    }
    for (std::size_t c = 0; c < grad_b.size(); ++c) {
      model.bias[c] -= lr * grad_b[c];
    }
  }
  return model;
}

ScoreMatrix predict_scores(const LinearModel& model, const Dataset& data) {
  if (data.dim() != model.dim) {
    throw Error(ErrorCode::kDimensionMismatch,
                "data dim " + std::to_string(data.dim()) + " vs model dim " +
                    std::to_string(model.dim));
  }
  const FeatureMatrix x = feature_matrix(data);
  ScoreMatrix s;
  s.rows = x.rows;
  s.cols = static_cast<std::size_t>(model.num_classes);
  s.values.resize(s.rows * s.cols);
  const std::size_t d = x.cols;
  for (std::size_t i = 0; i < s.rows; ++i) {
    const double* xi = x.values.data() + i * d;
    for (std::size_t c = 0; c < s.cols; ++c) {
      const double* wc = model.weights.data() + c * d;
      double v = model.bias[c];
      for (std::size_t j = 0; j < d; ++j) v += wc[j] * xi[j];
      s.values[i * s.cols + c] = v;
    }
  }
  return s;
}

std::vector<int> predict_labels(const ScoreMatrix& scores) {
  std::vector<int> out(scores.rows, 0);
  for (std::size_t i = 0; i < scores.rows; ++i) {
    auto row = scores.row(i);
    std::size_t best = 0;
    for (std::size_t c = 1; c < row.size(); ++c) {
      if (row[c] > row[best]) best = c;
    }
    out[i] = static_cast<int>(best);
  }
  return out;
}

std::vector<int> predict_labels(const LinearModel& model, const Dataset& data) {
  return predict_labels(predict_scores(model, data));
}

ScoreMatrix softmax(const ScoreMatrix& scores) {
  ScoreMatrix p = scores;
  for (std::size_t i = 0; i < p.rows; ++i) {
    double* row = p.values.data() + i * p.cols;
    double max_s = row[0];
    for (std::size_t c = 1; c < p.cols; ++c) max_s = std::max(max_s, row[c]);
    double z = 0.0;
    for (std::size_t c = 0; c < p.cols; ++c) {
      row[c] = std::exp(row[c] - max_s);
      z += row[c];
    }
    for (std::size_t c = 0; c < p.cols; ++c) row[c] /= z;
  }
  return p;
}

}  // namespace dcbench
