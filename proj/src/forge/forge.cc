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

#include "dcbench/forge/forge.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "dcbench/core/error.h"
#include "dcbench/core/metrics.h"
#include "dcbench/core/random.h"
#include "dcbench/core/suite.h"

namespace dcbench::forge {

namespace {

// floor(rate * count), tolerant of the representation error in products like
// 0.3 * 600.
std::size_t fraction_count(double rate, std::size_t count) {
  return static_cast<std::size_t>(
      std::floor(rate * static_cast<double>(count) + 1e-9));
}

std::string padded(std::size_t value, std::size_t width) {
  std::string digits = std::to_string(value);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return digits;
}

void check_rate(double rate, const char* what) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw Error(ErrorCode::kRateOutOfRange,
                std::string(what) + " must be in [0, 1], got " +
                    std::to_string(rate));
  }
}

}  // namespace

void ForgeSpec::validate() const {
  auto invalid = [](const std::string& msg) {
    throw Error(ErrorCode::kInvalidSpec, msg);
  };
  if (num_classes < 2) invalid("num_classes must be >= 2");
  if (per_class_count < 4) invalid("per_class_count must be >= 4");
  if (dim < 1) invalid("dim must be >= 1");
  if (!(cluster_spread >= 0.0)) invalid("cluster_spread must be >= 0");
  if (!(mean_radius > 0.0)) invalid("mean_radius must be > 0");
  for (double f : {splits.train, splits.validation, splits.test}) {
    if (!(f > 0.0 && f < 1.0)) invalid("split fractions must be in (0, 1)");
  }
  if (std::abs(splits.train + splits.validation + splits.test - 1.0) > 1e-12) {
    invalid("split fractions must sum to 1");
  }
}

std::vector<std::vector<double>> orthonormal_directions(int count, int dim,
                                                        std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    std::vector<double> v(dim);
    for (double& x : v) x = rng.normal();
    if (k < dim) {
      for (const auto& u : out) {
        double proj = 0.0;
        for (int j = 0; j < dim; ++j) proj += v[j] * u[j];
        for (int j = 0; j < dim; ++j) v[j] -= proj * u[j];
      }
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
    out.push_back(std::move(v));
  }
  return out;
}

GeneratedDataset gen_dataset(const ForgeSpec& spec) {
  spec.validate();
  const auto m = static_cast<std::size_t>(spec.per_class_count);
  const auto num_classes = static_cast<std::size_t>(spec.num_classes);
  const std::size_t total = m * num_classes;

  GeneratedDataset out;
  out.class_means = orthonormal_directions(spec.num_classes, spec.dim,
                                           derive_seed(spec.seed, "means"));
  for (auto& mean : out.class_means) {
    for (double& x : mean) x *= spec.mean_radius;
  }

  std::vector<std::size_t> id_perm(total);
  for (std::size_t i = 0; i < total; ++i) id_perm[i] = i;
  Rng id_rng(derive_seed(spec.seed, "ids"));
  id_rng.shuffle(id_perm);
  const std::size_t width = std::max<std::size_t>(5, std::to_string(total).size());

  std::vector<std::string> classes;
  for (std::size_t c = 0; c < num_classes; ++c) {
    classes.push_back(spec.class_prefix + std::to_string(c));
  }

  Rng feature_rng(derive_seed(spec.seed, "features"));
  std::vector<Example> examples;
  examples.reserve(total);
  std::vector<std::vector<std::string>> class_ids(num_classes);
  for (std::size_t c = 0; c < num_classes; ++c) {
    for (std::size_t k = 0; k < m; ++k) {
      Example e;
      e.id = spec.id_prefix + padded(id_perm[c * m + k], width);
      e.label = static_cast<int>(c);
      e.features.resize(spec.dim);
      for (int j = 0; j < spec.dim; ++j) {
        e.features[j] =
            out.class_means[c][j] + spec.cluster_spread * feature_rng.normal();
      }
      class_ids[c].push_back(e.id);
      examples.push_back(std::move(e));
    }
  }

  // Stratified split sizes; test takes the rounding remainder.
  auto n_train = static_cast<std::ptrdiff_t>(
      std::llround(spec.splits.train * static_cast<double>(m)));
  auto n_val = static_cast<std::ptrdiff_t>(
      std::llround(spec.splits.validation * static_cast<double>(m)));
  n_train = std::max<std::ptrdiff_t>(1, n_train);
  n_val = std::max<std::ptrdiff_t>(1, n_val);
  while (static_cast<std::ptrdiff_t>(m) - n_train - n_val < 1) {
    if (n_train >= n_val && n_train > 1) {
      --n_train;
    } else if (n_val > 1) {
      --n_val;
    } else {
      throw Error(ErrorCode::kInvalidSpec, "cannot split per_class_count");
    }
  }

  Rng split_rng(derive_seed(spec.seed, "splits"));
  for (std::size_t c = 0; c < num_classes; ++c) {
    std::vector<std::string>& ids = class_ids[c];
    split_rng.shuffle(ids);
    for (std::size_t k = 0; k < ids.size(); ++k) {
      const auto pos = static_cast<std::ptrdiff_t>(k);
      if (pos < n_train) {
        out.train_ids.push_back(ids[k]);
      } else if (pos < n_train + n_val) {
        out.validation_ids.push_back(ids[k]);
      } else {
        out.test_ids.push_back(ids[k]);
      }
    }
  }
  std::sort(out.train_ids.begin(), out.train_ids.end());
  std::sort(out.validation_ids.begin(), out.validation_ids.end());
  std::sort(out.test_ids.begin(), out.test_ids.end());

  out.all = Dataset("generated", spec.dim, std::move(classes),
                    std::move(examples));
  return out;
}

Corruption corrupt_labels(const Dataset& data, double rate, LabelNoise mode,
                          std::uint64_t seed) {
  check_rate(rate, "label corruption rate");
  const std::vector<int> labels = data.labels();
  const int num_classes = data.num_classes();
  if (num_classes < 2) {
    throw Error(ErrorCode::kInvalidSpec, "label noise needs two classes");
  }
  const std::size_t count = fraction_count(rate, data.size());
  Corruption out;
  if (count == 0) {
    out.dirty = data;
    return out;
  }
  Rng rng(derive_seed(seed, "label-noise"));
  const std::vector<std::size_t> chosen =
      rng.sample_without_replacement(data.size(), count);

  ScoreMatrix weak_scores;
  if (mode == LabelNoise::kMachineLabel) {
    Rng sub_rng(derive_seed(seed, "weak-subsample"));
    const std::size_t sub_n = std::max<std::size_t>(1, data.size() / 10);
    const std::vector<std::size_t> sub =
        sub_rng.sample_without_replacement(data.size(), sub_n);
    SuiteMember weak{ModelKind::kLogReg};
    weak.iterations = 10;
    const LinearModel model = train(weak, data.subset_by_index(sub));
    weak_scores = predict_scores(model, data);
  }

  std::vector<Example> examples = data.examples();
  for (std::size_t i : chosen) {
    const int original = labels[i];
    int replacement = original;
    if (mode == LabelNoise::kFlip) {
      const int shift =
          1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(num_classes - 1)));
      replacement = (original + shift) % num_classes;
    } else {
      int best = -1;
      for (int c = 0; c < num_classes; ++c) {
        if (c == original) continue;
        if (best < 0 || weak_scores.at(i, c) > weak_scores.at(i, best)) best = c;
      }
      replacement = best;
    }
    examples[i].label = replacement;
    out.repairs[examples[i].id].label = original;
  }
  out.dirty = Dataset(data.id(), data.dim(), data.classes(), std::move(examples));
  return out;
}

Corruption corrupt_features(const Dataset& data, double null_rate,
                            std::uint64_t seed) {
  check_rate(null_rate, "null rate");
  const std::size_t n = data.size();
  const auto d = static_cast<std::size_t>(data.dim());
  const std::size_t count = fraction_count(null_rate, n * d);
  Corruption out;
  if (count == 0) {
    out.dirty = data;
    return out;
  }

  std::vector<double> spread(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    double sum = 0.0, sq = 0.0;
    std::size_t seen = 0;
    for (const Example& e : data.examples()) {
      const double v = e.features[j];
      if (is_missing(v)) continue;
      sum += v;
      sq += v * v;
      ++seen;
    }
    if (seen > 0) {
      const double mean = sum / static_cast<double>(seen);
      spread[j] = std::sqrt(std::max(0.0, sq / static_cast<double>(seen) - mean * mean));
    }
    if (!(spread[j] > 0.0)) spread[j] = 1.0;
  }

  Rng rng(derive_seed(seed, "null-cells"));
  std::vector<std::size_t> cells = rng.sample_without_replacement(n * d, count);
  std::sort(cells.begin(), cells.end());
  std::vector<Example> examples = data.examples();
  for (std::size_t cell : cells) {
    const std::size_t i = cell / d;
    const std::size_t j = cell % d;
    const double truth = examples[i].features[j];
    if (is_missing(truth)) continue;
    std::array<double, 3> values{truth, 0.0, 0.0};
    for (int k = 1; k < 3; ++k) {
      const double offset = rng.uniform(0.5, 2.0) * spread[j];
      values[k] = truth + (rng.below(2) == 0 ? offset : -offset);
    }
    std::array<int, 3> order{0, 1, 2};
    for (int k = 2; k > 0; --k) {
      std::swap(order[k], order[rng.below(static_cast<std::uint64_t>(k + 1))]);
    }
    CellRepair repair;
    repair.feature = static_cast<int>(j);
    repair.truth = truth;
    for (int k = 0; k < 3; ++k) {
      repair.candidates[k] = values[order[k]];
      if (order[k] == 0) repair.true_index = k;
    }
    examples[i].features[j] = kMissing;
    out.repairs[examples[i].id].cells.push_back(repair);
  }
  out.dirty = Dataset(data.id(), data.dim(), data.classes(), std::move(examples));
  return out;
}

TrainingSetProblem forge_training_set(const ForgeSpec& spec,
                                      const TrainingSetOptions& options) {
  const GeneratedDataset gen = gen_dataset(spec);
  TrainingSetProblem p;
  p.clean_train = gen.train().with_id("clean_train");
  p.reference_train =
      corrupt_labels(p.clean_train, options.label_noise, LabelNoise::kFlip,
                     derive_seed(spec.seed, "reference-noise"))
          .dirty.with_id("reference_train");
  p.validation = gen.validation().with_id("validation");
  p.hidden_test = gen.test().with_id("test");
  p.suite = SuiteConfig::standard(spec.seed);
  p.size_cap = options.size_cap;
  p.clean_baseline = suite_accuracy(p.suite, p.clean_train, p.hidden_test).mean;
  p.reference_baseline =
      suite_accuracy(p.suite, p.reference_train, p.hidden_test).mean;
  return p;
}

SelectionProblem forge_selection(const ForgeSpec& spec,
                                 const SelectionOptions& options) {
  const GeneratedDataset gen = gen_dataset(spec);
  SelectionProblem p;
  p.pool = gen.train().with_id("pool");
  p.hidden_test = gen.test().with_id("test");
  p.suite = SuiteConfig::standard(spec.seed);
  p.budget = options.budget;
  p.metric = options.metric;
  if (p.budget == 0 || p.budget > p.pool.size()) {
    throw Error(ErrorCode::kInvalidSpec, "selection budget out of range");
  }

  Rng rng(derive_seed(spec.seed, "probe"));
  std::vector<std::vector<std::string>> by_class(p.pool.num_classes());
  for (const Example& e : p.pool.examples()) by_class[*e.label].push_back(e.id);
  for (auto& ids : by_class) {
    rng.shuffle(ids);
    const std::size_t take =
        std::min<std::size_t>(ids.size(), static_cast<std::size_t>(options.probe_per_class));
    p.probe_ids.insert(p.probe_ids.end(), ids.begin(), ids.begin() + take);
  }
  std::sort(p.probe_ids.begin(), p.probe_ids.end());

  if (options.concealed) {
    ForgeSpec hidden_spec = spec;
    hidden_spec.seed = derive_seed(spec.seed, "concealed");
    hidden_spec.class_prefix = "k";
    hidden_spec.id_prefix = "z";
    if (options.concealed_num_classes > 0) {
      hidden_spec.num_classes = options.concealed_num_classes;
    }
    SelectionOptions hidden_options = options;
    hidden_options.concealed = false;
    p.concealed = std::make_shared<const SelectionProblem>(
        forge_selection(hidden_spec, hidden_options));
  }
  return p;
}

SuiteConfig frozen_test_suite(std::uint64_t seed) {
  SuiteConfig suite;
  suite.seed = seed;
  suite.members = {
      SuiteMember{ModelKind::kLogReg, 0.1, 500, 1e-3},
      SuiteMember{ModelKind::kLinearSvm, 0.1, 500, 1e-3},
      SuiteMember{ModelKind::kLogReg, 0.1, 50, 1e-3},
      SuiteMember{ModelKind::kLinearSvm, 0.05, 100, 1e-2},
      SuiteMember{ModelKind::kLogReg, 0.02, 200, 1e-2},
  };
  return suite;
}

TestSetProblem forge_test_set(const ForgeSpec& spec,
                              const TestSetOptions& options) {
  const GeneratedDataset gen = gen_dataset(spec);
  TestSetProblem p;
  p.suite = frozen_test_suite(spec.seed);
  p.frozen_models = train_suite(p.suite, gen.train());
  p.candidate_pool =
      merge("candidates", gen.validation(), gen.test());
  p.allowed_labels = p.candidate_pool.classes();
  p.submission_cap = options.submission_cap;
  return p;
}

DebuggingProblem forge_debugging(const ForgeSpec& spec,
                                 const DebuggingOptions& options) {
  const GeneratedDataset gen = gen_dataset(spec);
  DebuggingProblem p;
  Dataset clean = gen.train().with_id("dirty_train");
  Corruption labels = corrupt_labels(clean, options.label_rate,
                                     options.label_mode,
                                     derive_seed(spec.seed, "debug-labels"));
  Corruption cells = corrupt_features(labels.dirty, options.null_rate,
                                      derive_seed(spec.seed, "debug-cells"));
  p.dirty_train = std::move(cells.dirty);
  p.hidden_repairs = std::move(labels.repairs);
  for (auto& [id, repair] : cells.repairs) {
    p.hidden_repairs[id].cells = std::move(repair.cells);
  }
  p.validation = gen.validation().with_id("validation");
  p.hidden_test = gen.test().with_id("test");
  p.budget = options.budget;
  if (p.budget && *p.budget > p.dirty_train.size()) {
    throw Error(ErrorCode::kInvalidSpec, "budget exceeds training set size");
  }
  if (options.headline == DebugMetric::kGapClosed && !p.budget) {
    throw Error(ErrorCode::kInvalidSpec, "gap-closed scoring needs a budget");
  }
  if (options.inspection_step == 0) {
    throw Error(ErrorCode::kInvalidSpec, "inspection step must be >= 1");
  }
  p.suite = SuiteConfig::standard(spec.seed);
  p.headline = options.headline;
  p.inspection_step = options.inspection_step;
  return p;
}

SliceProblem forge_slice_problem(const ForgeSpec& spec,
                                 const SliceOptions& options) {
  spec.validate();
  if (!(options.slice_fraction > 0.0 && options.slice_fraction <= 0.5)) {
    throw Error(ErrorCode::kInvalidSpec, "slice_fraction must be in (0, 0.5]");
  }
  if (!(options.undersample_factor > 0.0 && options.undersample_factor <= 1.0)) {
    throw Error(ErrorCode::kInvalidSpec,
                "undersample_factor must be in (0, 1]");
  }
  if (!(options.min_gap > 0.0)) {
    throw Error(ErrorCode::kInvalidSpec, "min_gap must be > 0");
  }
  if (options.k == 0) throw Error(ErrorCode::kInvalidSpec, "k must be >= 1");
  if (spec.num_classes + 1 > spec.dim) {
    throw Error(ErrorCode::kInvalidSpec, "slicing needs dim > num_classes");
  }

  const SuiteMember member = SuiteConfig::standard(spec.seed).members.front();
  for (int attempt = 0; attempt <= options.max_retries; ++attempt) {
    ForgeSpec s = spec;
    if (attempt > 0) {
      s.seed = derive_seed(spec.seed, "slice-retry-" + std::to_string(attempt));
    }
    const GeneratedDataset gen = gen_dataset(s);
    // The same stream as the class means, extended by one direction.
    std::vector<double> sub_mean =
        orthonormal_directions(s.num_classes + 1, s.dim,
                               derive_seed(s.seed, "means"))
            .back();
    for (double& x : sub_mean) x *= s.mean_radius;

    Rng rng(derive_seed(s.seed, "slice"));
    const int target =
        static_cast<int>(rng.below(static_cast<std::uint64_t>(s.num_classes)));
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < gen.all.size(); ++i) {
      if (*gen.all[i].label == target) members.push_back(i);
    }
    const std::size_t slice_n =
        std::max<std::size_t>(1, fraction_count(options.slice_fraction, members.size()));
    std::vector<std::size_t> pick = rng.sample_without_replacement(members.size(), slice_n);
    std::set<std::string> slice;
    std::vector<Example> examples = gen.all.examples();
    for (std::size_t p : pick) {
      Example& e = examples[members[p]];
      for (int j = 0; j < s.dim; ++j) {
        e.features[j] = sub_mean[j] + s.cluster_spread * rng.normal();
      }
      slice.insert(e.id);
    }
    Dataset data("dataset", s.dim, gen.all.classes(), std::move(examples));

    // Train split with the slice undersampled.
    std::vector<std::string> train_rest, train_slice;
    for (const std::string& id : gen.train_ids) {
      (slice.contains(id) ? train_slice : train_rest).push_back(id);
    }
    const std::size_t keep = fraction_count(options.undersample_factor,
                                            train_slice.size());
    for (std::size_t p : rng.sample_without_replacement(train_slice.size(), keep)) {
      train_rest.push_back(train_slice[p]);
    }
    const LinearModel model = train(member, data.subset(train_rest));

    const std::vector<int> predicted = predict_labels(model, data);
    const std::vector<int> truth = data.labels();
    const double overall = accuracy(predicted, truth);
    std::vector<int> slice_pred, slice_truth;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (slice.contains(data[i].id)) {
        slice_pred.push_back(predicted[i]);
        slice_truth.push_back(truth[i]);
      }
    }
    const double slice_acc = accuracy(slice_pred, slice_truth);
    if (slice_acc <= overall - options.min_gap) {
      SliceProblem out;
      out.dataset = std::move(data);
      out.trained_model = model;
      out.ground_truth_slices.push_back(std::move(slice));
      out.k = options.k;
      out.overall_accuracy = overall;
      out.slice_accuracies = {slice_acc};
      out.underperformance_gap = overall - slice_acc;
      out.final_seed = s.seed;
      return out;
    }
  }
  throw Error(ErrorCode::kCannotRealizeGap,
              "no seed within " + std::to_string(options.max_retries) +
                  " retries reached a gap of " + std::to_string(options.min_gap));
}

SliceBatch forge_slice_batch(const ForgeSpec& spec, const SliceOptions& options,
                             int num_problems) {
  if (num_problems < 1) {
    throw Error(ErrorCode::kInvalidSpec, "num_problems must be >= 1");
  }
  SliceBatch batch;
  for (int i = 0; i < num_problems; ++i) {
    ForgeSpec s = spec;
    s.seed = derive_seed(spec.seed, "slice-problem-" + std::to_string(i));
    SliceProblem p = forge_slice_problem(s, options);
    p.problem_id = "p" + std::to_string(i);
    batch.problems.push_back(std::move(p));
  }
  return batch;
}

ValuationBatch forge_valuation_batch(const ForgeSpec& spec,
                                     const ValuationOptions& options) {
  spec.validate();
  if (options.num_problems < 1) {
    throw Error(ErrorCode::kInvalidSpec, "num_problems must be >= 1");
  }
  if (!(options.b_fraction_lo > 0.0 &&
        options.b_fraction_lo <= options.b_fraction_hi)) {
    throw Error(ErrorCode::kInvalidSpec, "bad b_fraction range");
  }
  ValuationBatch batch;
  Rng fraction_rng(derive_seed(spec.seed, "b-fraction"));
  for (int i = 0; i < options.num_problems; ++i) {
    ForgeSpec s = spec;
    s.seed = derive_seed(spec.seed, "valuation-" + std::to_string(i));
    const GeneratedDataset gen = gen_dataset(s);
    const double f =
        fraction_rng.uniform(options.b_fraction_lo, options.b_fraction_hi);
    std::vector<std::string> ids = gen.train_ids;
    Rng rng(derive_seed(s.seed, "a-b-split"));
    rng.shuffle(ids);
    const std::size_t n = ids.size();
    auto n_a = static_cast<std::size_t>(std::llround(static_cast<double>(n) / (1.0 + f)));
    n_a = std::clamp<std::size_t>(n_a, 1, n - 1);
    std::vector<std::string> a_ids(ids.begin(), ids.begin() + n_a);
    std::vector<std::string> b_ids(ids.begin() + n_a, ids.end());

    ValuationProblem p;
    p.problem_id = "p" + std::to_string(i);
    p.d_a = gen.all.subset(a_ids).with_id("d_a");
    p.d_b = gen.all.subset(b_ids).with_id("d_b");
    p.d_test = gen.test().with_id("d_test");
    p.suite = SuiteConfig::standard(spec.seed);
    p.true_union_accuracy =
        suite_accuracy(p.suite, merge("union", p.d_a, p.d_b), p.d_test).mean;
    batch.problems.push_back(std::move(p));
  }
  return batch;
}

}  // namespace dcbench::forge
