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

#ifndef DCBENCH_FORGE_FORGE_H_
#define DCBENCH_FORGE_FORGE_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dcbench/core/dataset.h"
#include "dcbench/core/model.h"
#include "dcbench/forge/problems.h"

namespace dcbench::forge {

struct SplitFractions {
  double train = 0.6;
  double validation = 0.2;
  double test = 0.2;
};

struct ForgeSpec {
  std::uint64_t seed = 0;
  int num_classes = 6;
  int per_class_count = 167;  // 100 / 33 / 34 per class at the default split
  int dim = 32;
  double cluster_spread = 1.0;
  double mean_radius = 3.0;  // distance of every class mean from the origin
  SplitFractions splits;
  std::string class_prefix = "c";
  std::string id_prefix = "x";

  // Throws kInvalidSpec.
  void validate() const;
};

struct GeneratedDataset {
  Dataset all;
  std::vector<std::string> train_ids;
  std::vector<std::string> validation_ids;
  std::vector<std::string> test_ids;
  std::vector<std::vector<double>> class_means;

  Dataset train() const { return all.subset(train_ids); }
  Dataset validation() const { return all.subset(validation_ids); }
  Dataset test() const { return all.subset(test_ids); }
};

// One isotropic Gaussian per class around seeded orthogonal means (simplex
// like when num_classes <= dim), split stratified by class. Example ids are a
// seeded permutation so id order carries no class information.
GeneratedDataset gen_dataset(const ForgeSpec& spec);

// Orthonormal directions (Gram-Schmidt over Gaussian draws), count <= dim.
std::vector<std::vector<double>> orthonormal_directions(int count, int dim,
                                                        std::uint64_t seed);

enum class LabelNoise { kFlip, kMachineLabel };

struct Corruption {
  Dataset dirty;
  HiddenRepairs repairs;
};

// Alters exactly floor(rate * n) distinct labels. Flip draws a uniformly
// chosen different class; machine_label substitutes the top-scoring wrong
// class of a weak model (logreg, 10 iterations, 10% subsample).
// Throws kRateOutOfRange.
Corruption corrupt_labels(const Dataset& data, double rate, LabelNoise mode,
                          std::uint64_t seed);

// NULLs exactly floor(null_rate * n * dim) cells. Each gets three candidates:
// the truth and truth +/- u with u ~ U[0.5, 2] column std-devs, shuffled.
// Throws kRateOutOfRange.
Corruption corrupt_features(const Dataset& data, double null_rate,
                            std::uint64_t seed);

// ---- Problem forging -------------------------------------------------------

struct TrainingSetOptions {
  double label_noise = 0.2;  // applied to the published reference set
  std::size_t size_cap = 1000;
};
TrainingSetProblem forge_training_set(const ForgeSpec& spec,
                                      const TrainingSetOptions& options);

struct SelectionOptions {
  std::size_t budget = 50;
  int probe_per_class = 5;
  SelectionMetric metric = SelectionMetric::kAccuracy;
  bool concealed = true;
  int concealed_num_classes = 0;  // 0 keeps spec.num_classes
};
SelectionProblem forge_selection(const ForgeSpec& spec,
                                 const SelectionOptions& options);

struct TestSetOptions {
  std::size_t submission_cap = 50;
};
// Members of the frozen suite used to score adversarial collections.
SuiteConfig frozen_test_suite(std::uint64_t seed);
TestSetProblem forge_test_set(const ForgeSpec& spec,
                              const TestSetOptions& options);

struct DebuggingOptions {
  double label_rate = 0.3;
  LabelNoise label_mode = LabelNoise::kFlip;
  double null_rate = 0.0;
  std::optional<std::size_t> budget = 60;
  DebugMetric headline = DebugMetric::kGapClosed;
  std::size_t inspection_step = 10;
};
DebuggingProblem forge_debugging(const ForgeSpec& spec,
                                 const DebuggingOptions& options);

struct SliceOptions {
  double slice_fraction = 0.3;
  double undersample_factor = 0.1;
  double min_gap = 0.2;
  std::size_t k = 10;
  int max_retries = 10;
};
// Throws kInvalidSpec, kCannotRealizeGap.
SliceProblem forge_slice_problem(const ForgeSpec& spec,
                                 const SliceOptions& options);
SliceBatch forge_slice_batch(const ForgeSpec& spec, const SliceOptions& options,
                             int num_problems);

struct ValuationOptions {
  int num_problems = 5;
  double b_fraction_lo = 0.25;
  double b_fraction_hi = 2.0;
};
ValuationBatch forge_valuation_batch(const ForgeSpec& spec,
                                     const ValuationOptions& options);

}  // namespace dcbench::forge

#endif  // DCBENCH_FORGE_FORGE_H_
