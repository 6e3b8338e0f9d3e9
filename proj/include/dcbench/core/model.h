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

#ifndef DCBENCH_CORE_MODEL_H_
#define DCBENCH_CORE_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dcbench/core/dataset.h"

namespace dcbench {

enum class ModelKind { kLogReg, kLinearSvm };

std::string_view model_kind_name(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);

// One member of the fixed training suite. Defaults are the harness-wide
// hyperparameters every submission is scored with.
struct SuiteMember {
  ModelKind kind = ModelKind::kLogReg;
  double learning_rate = 0.1;
  int iterations = 500;
  double l2_lambda = 1e-3;

  friend bool operator==(const SuiteMember&, const SuiteMember&) = default;
};

struct SuiteConfig {
  std::vector<SuiteMember> members;
  std::uint64_t seed = 0;

  // {logreg, linear_svm} at default hyperparameters.
  static SuiteConfig standard(std::uint64_t seed = 0);
  // Throws kInvalidSpec.
  void validate() const;

  friend bool operator==(const SuiteConfig&, const SuiteConfig&) = default;
};

std::string member_hash(const SuiteMember& member);
std::string suite_hash(const SuiteConfig& suite);

struct LinearModel {
  ModelKind kind = ModelKind::kLogReg;
  int num_classes = 0;
  int dim = 0;
  std::vector<double> weights;  // row-major [num_classes x dim]
  std::vector<double> bias;     // [num_classes]
  std::string training_config_hash;

  std::span<const double> class_weights(int c) const {
    return {weights.data() + static_cast<std::size_t>(c) * dim,
            static_cast<std::size_t>(dim)};
  }
  // Throws kInvalidSpec when shapes disagree or entries are not finite.
  void validate() const;

  friend bool operator==(const LinearModel&, const LinearModel&) = default;
};

// Full-batch gradient descent from zero weights for a fixed iteration count.
// Throws kEmptyTrainSet, kMissingFeature, kMissingLabel.
LinearModel train(const SuiteMember& member, const Dataset& train_set);

// Per-example per-class scores W x + b.
struct ScoreMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * cols, cols};
  }
  double at(std::size_t i, std::size_t c) const { return values[i * cols + c]; }
};

// Throws kDimensionMismatch, kMissingFeature.
ScoreMatrix predict_scores(const LinearModel& model, const Dataset& data);
// Argmax, ties to the lowest class index.
std::vector<int> predict_labels(const ScoreMatrix& scores);
std::vector<int> predict_labels(const LinearModel& model, const Dataset& data);
// Row-wise softmax.
ScoreMatrix softmax(const ScoreMatrix& scores);

// Training objective value and its (sub)gradient at the given parameters.
// Multinomial cross-entropy for logreg, one-vs-rest hinge for linear SVM,
// both averaged over examples, plus (l2/2) * ||W||^2 (bias unregularized).
struct Objective {
  double loss = 0.0;
  std::vector<double> grad_weights;
  std::vector<double> grad_bias;
};
Objective objective(ModelKind kind, std::span<const double> weights,
                    std::span<const double> bias, const FeatureMatrix& x,
                    std::span<const int> labels, int num_classes,
                    double l2_lambda);

}  // namespace dcbench

#endif  // DCBENCH_CORE_MODEL_H_
