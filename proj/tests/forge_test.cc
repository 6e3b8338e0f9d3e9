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

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "dcbench/core/io.h"
#include "dcbench/core/metrics.h"
#include "dcbench/core/suite.h"
#include "dcbench/forge/bundle.h"
#include "dcbench/forge/forge.h"
#include "dcbench/forge/registry.h"
#include "test_util.h"

namespace dcbench::forge {
namespace {

using testing::TempDir;

ForgeSpec seeded(std::uint64_t seed) {
  ForgeSpec s;
  s.seed = seed;
  return s;
}

std::set<std::string> id_set(const std::vector<std::string>& ids) {
  return {ids.begin(), ids.end()};
}

// ---- Generator ---------------------------------------------------------------

TEST(GenDataset, ExactClassCounts) {
  ForgeSpec s = seeded(1);
  s.per_class_count = 100;
  const GeneratedDataset g = gen_dataset(s);
  EXPECT_EQ(g.all.size(), 600u);
  std::vector<int> counts(6, 0);
  for (int l : g.all.labels()) ++counts[l];
  for (int c : counts) EXPECT_EQ(c, 100);
}

TEST(GenDataset, DefaultSplitsAreStratifiedAndDisjoint) {
  const GeneratedDataset g = gen_dataset(seeded(2));
  EXPECT_EQ(g.train_ids.size(), 600u);
  EXPECT_EQ(g.validation_ids.size(), 198u);
  EXPECT_EQ(g.test_ids.size(), 204u);
  std::set<std::string> all = id_set(g.train_ids);
  for (const auto* part : {&g.validation_ids, &g.test_ids}) {
    for (const std::string& id : *part) EXPECT_TRUE(all.insert(id).second) << id;
  }
  EXPECT_EQ(all.size(), g.all.size());
  for (const Dataset& split : {g.train(), g.validation(), g.test()}) {
    std::vector<int> counts(6, 0);
    for (int l : split.labels()) ++counts[l];
    for (int c : counts) EXPECT_EQ(c, counts[0]);
  }
}

TEST(GenDataset, ZeroSpreadIsSeparableByNearestMean) {
  ForgeSpec s = seeded(3);
  s.cluster_spread = 0.0;
  const GeneratedDataset g = gen_dataset(s);
  for (const Dataset& split : {g.train(), g.validation(), g.test()}) {
    std::size_t correct = 0;
    for (const Example& e : split.examples()) {
      int best = 0;
      double best_d = INFINITY;
      for (int c = 0; c < split.num_classes(); ++c) {
        double d = 0.0;
        for (int j = 0; j < s.dim; ++j) {
          d += (e.features[j] - g.class_means[c][j]) * (e.features[j] - g.class_means[c][j]);
        }
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      correct += best == *e.label ? 1 : 0;
    }
    EXPECT_EQ(correct, split.size());
  }
}

TEST(GenDataset, MeansAreOrthogonalAtFixedRadius) {
  const GeneratedDataset g = gen_dataset(seeded(4));
  for (std::size_t a = 0; a < g.class_means.size(); ++a) {
    for (std::size_t b = 0; b <= a; ++b) {
      double dotp = 0.0;
      for (std::size_t j = 0; j < g.class_means[a].size(); ++j) {
        dotp += g.class_means[a][j] * g.class_means[b][j];
      }
      EXPECT_NEAR(dotp, a == b ? 9.0 : 0.0, 1e-9);
    }
  }
}

TEST(GenDataset, SameSpecGivesByteIdenticalCsv) {
  EXPECT_EQ(dataset_to_csv(gen_dataset(seeded(5)).all), dataset_to_csv(gen_dataset(seeded(5)).all));
  EXPECT_NE(dataset_to_csv(gen_dataset(seeded(5)).all), dataset_to_csv(gen_dataset(seeded(6)).all));
}

TEST(ForgeSpec, RejectsInvalidValues) {
  ForgeSpec s;
  s.splits = {0.5, 0.3, 0.3};
  EXPECT_DCB_ERROR(s.validate(), ErrorCode::kInvalidSpec);
  s = ForgeSpec{};
  s.splits = {1.0, 0.0, 0.0};
  EXPECT_DCB_ERROR(s.validate(), ErrorCode::kInvalidSpec);
  s = ForgeSpec{};
  s.per_class_count = 3;
  EXPECT_DCB_ERROR(s.validate(), ErrorCode::kInvalidSpec);
  s = ForgeSpec{};
  s.num_classes = 1;
  EXPECT_DCB_ERROR(s.validate(), ErrorCode::kInvalidSpec);
  s = ForgeSpec{};
  s.cluster_spread = -1;
  EXPECT_DCB_ERROR(s.validate(), ErrorCode::kInvalidSpec);
}

TEST(ForgeSpec, SmallestClassStillFillsEverySplit) {
  ForgeSpec s = seeded(0);
  s.per_class_count = 4;
  const GeneratedDataset g = gen_dataset(s);
  EXPECT_EQ(g.train().size() + g.validation().size() + g.test().size(), 24u);
  EXPECT_EQ(g.test().size() % 6, 0u);
  EXPECT_GE(g.test().size(), 6u);
  EXPECT_GE(g.validation().size(), 6u);
}

// ---- Corruption --------------------------------------------------------------

Dataset sample(std::uint64_t seed, int classes = 6, int per_class = 167) {
  ForgeSpec s = seeded(seed);
  s.num_classes = classes;
  s.per_class_count = per_class;
  return gen_dataset(s).train();
}

TEST(CorruptLabels, RateZeroIsIdentity) {
  const Dataset d = sample(1);
  const Corruption c = corrupt_labels(d, 0.0, LabelNoise::kFlip, 1);
  EXPECT_EQ(c.dirty, d);
  EXPECT_TRUE(c.repairs.empty());
}

TEST(CorruptLabels, FullRateBinaryFlipsEveryLabel) {
  const Dataset d = sample(2, 2, 50);
  const Corruption c = corrupt_labels(d, 1.0, LabelNoise::kFlip, 2);
  ASSERT_EQ(c.repairs.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_NE(c.dirty[i].label, d[i].label);
}

TEST(CorruptLabels, ExactFloorCount) {
  ForgeSpec s = seeded(3);
  s.num_classes = 4;
  s.per_class_count = 25;
  const Dataset d = gen_dataset(s).all;
  ASSERT_EQ(d.size(), 100u);
  EXPECT_EQ(corrupt_labels(d, 0.2, LabelNoise::kFlip, 3).repairs.size(), 20u);
  EXPECT_EQ(corrupt_labels(d, 0.199, LabelNoise::kMachineLabel, 3).repairs.size(), 19u);
  EXPECT_DCB_ERROR(corrupt_labels(d, 1.5, LabelNoise::kFlip, 3), ErrorCode::kRateOutOfRange);
  EXPECT_DCB_ERROR(corrupt_labels(d, -0.1, LabelNoise::kFlip, 3), ErrorCode::kRateOutOfRange);
}

TEST(CorruptLabels, RepairRoundTripRestoresLabelsProperty) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    for (LabelNoise mode : {LabelNoise::kFlip, LabelNoise::kMachineLabel}) {
      const Dataset d = sample(seed);
      const double rate = 0.05 * static_cast<double>(1 + seed);
      const Corruption c = corrupt_labels(d, rate, mode, seed);
      std::vector<std::string> ids;
      for (const auto& [id, r] : c.repairs) {
        ids.push_back(id);
        const auto i = *c.dirty.find(id);
        EXPECT_NE(c.dirty[i].label, r.label);  // every listed label really changed
      }
      EXPECT_EQ(c.repairs.size(), static_cast<std::size_t>(std::floor(rate * d.size())));
      EXPECT_EQ(apply_repairs(c.dirty, c.repairs, ids), d);
      // Examples not listed keep their labels.
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (!c.repairs.contains(d[i].id)) EXPECT_EQ(c.dirty[i].label, d[i].label);
      }
    }
  }
}

TEST(CorruptFeatures, RateZeroHasNoNulls) {
  const Dataset d = sample(4);
  const Corruption c = corrupt_features(d, 0.0, 4);
  EXPECT_FALSE(c.dirty.has_missing_features());
  EXPECT_TRUE(c.repairs.empty());
}

TEST(CorruptFeatures, CandidatesAlwaysHoldTheTruth) {
  const Dataset d = sample(5);
  const Corruption c = corrupt_features(d, 0.1, 5);
  std::size_t cells = 0;
  for (const auto& [id, r] : c.repairs) {
    const Example& clean = d[*d.find(id)];
    const Example& dirty = c.dirty[*c.dirty.find(id)];
    for (const CellRepair& cell : r.cells) {
      ++cells;
      EXPECT_EQ(cell.candidates.size(), 3u);
      EXPECT_EQ(cell.candidates[cell.true_index], cell.truth);
      EXPECT_EQ(cell.truth, clean.features[cell.feature]);
      EXPECT_TRUE(is_missing(dirty.features[cell.feature]));
      int equal = 0;
      for (double v : cell.candidates) equal += v == cell.truth ? 1 : 0;
      EXPECT_EQ(equal, 1);
    }
  }
  EXPECT_EQ(cells, static_cast<std::size_t>(std::floor(0.1 * d.size() * d.dim())));
  std::vector<std::string> ids;
  for (const auto& [id, r] : c.repairs) ids.push_back(id);
  EXPECT_EQ(apply_repairs(c.dirty, c.repairs, ids), d);
}

TEST(CorruptFeatures, SameSeedSameCells) {
  const Dataset d = sample(6);
  const Corruption a = corrupt_features(d, 0.05, 6);
  const Corruption b = corrupt_features(d, 0.05, 6);
  EXPECT_EQ(a.repairs, b.repairs);
  EXPECT_EQ(dataset_to_csv(a.dirty), dataset_to_csv(b.dirty));
  EXPECT_NE(a.repairs, corrupt_features(d, 0.05, 7).repairs);
}

// ---- Problems ----------------------------------------------------------------

TEST(TrainingSetProblem, BaselinesMatchSuiteAccuracy) {
  const TrainingSetProblem p = forge_training_set(seeded(1), {});
  EXPECT_EQ(p.clean_baseline, suite_accuracy(p.suite, p.clean_train, p.hidden_test).mean);
  EXPECT_EQ(p.reference_baseline, suite_accuracy(p.suite, p.reference_train, p.hidden_test).mean);
  EXPECT_EQ(p.reference_train.ids(), p.clean_train.ids());
  EXPECT_NE(p.reference_train, p.clean_train);
}

TEST(SelectionProblem, Invariants) {
  const SelectionProblem p = forge_selection(seeded(2), {});
  EXPECT_EQ(p.pool.size(), 600u);
  EXPECT_EQ(p.probe_ids.size(), 30u);
  for (const std::string& id : p.probe_ids) EXPECT_TRUE(p.pool.contains(id));
  ASSERT_TRUE(p.concealed);
  for (const std::string& id : p.concealed->pool.ids()) EXPECT_FALSE(p.pool.contains(id));
  EXPECT_FALSE(p.concealed->concealed);
  SelectionOptions bad;
  bad.budget = 601;
  EXPECT_DCB_ERROR(forge_selection(seeded(2), bad), ErrorCode::kInvalidSpec);
}

TEST(TestSetProblem, Invariants) {
  const TestSetProblem p = forge_test_set(seeded(3), {});
  EXPECT_EQ(p.frozen_models.size(), 5u);
  const std::set<std::string> classes(p.candidate_pool.classes().begin(),
                                      p.candidate_pool.classes().end());
  for (const std::string& l : p.allowed_labels) EXPECT_TRUE(classes.contains(l));
  EXPECT_TRUE(p.candidate_pool.fully_labeled());
}

TEST(DebuggingProblem, Invariants) {
  DebuggingOptions o;
  o.null_rate = 0.02;
  const DebuggingProblem p = forge_debugging(seeded(4), o);
  EXPECT_EQ(p.hidden_repairs.size() >= 180u, true);
  std::size_t label_repairs = 0;
  for (const auto& [id, r] : p.hidden_repairs) {
    EXPECT_TRUE(p.dirty_train.contains(id));
    label_repairs += r.label ? 1 : 0;
  }
  EXPECT_EQ(label_repairs, 180u);
  ASSERT_TRUE(p.budget);
  EXPECT_LE(*p.budget, p.dirty_train.size());
  DebuggingOptions too_big;
  too_big.budget = 601;
  EXPECT_DCB_ERROR(forge_debugging(seeded(4), too_big), ErrorCode::kInvalidSpec);
  DebuggingOptions no_budget;
  no_budget.budget = std::nullopt;
  EXPECT_DCB_ERROR(forge_debugging(seeded(4), no_budget), ErrorCode::kInvalidSpec);
}

TEST(DebuggingProblem, RepairedDataTrainsAtLeastAsWellProperty) {
  int at_least = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    DebuggingOptions o;
    o.label_rate = 0.2 + 0.01 * static_cast<double>(seed % 5);
    const DebuggingProblem p = forge_debugging(seeded(seed), o);
    std::vector<std::string> ids;
    for (const auto& [id, r] : p.hidden_repairs) ids.push_back(id);
    const Dataset repaired = apply_repairs(p.dirty_train, p.hidden_repairs, ids);
    const double dirty = suite_accuracy(p.suite, p.dirty_train, p.hidden_test).mean;
    const double clean = suite_accuracy(p.suite, repaired, p.hidden_test).mean;
    at_least += clean >= dirty ? 1 : 0;
  }
  EXPECT_GE(at_least, 18);
}

TEST(SliceProblem, UndersamplingOffWithTinySpreadCannotRealizeGap) {
  ForgeSpec s = seeded(5);
  s.cluster_spread = 0.01;
  SliceOptions o;
  o.undersample_factor = 1.0;
  o.max_retries = 3;
  EXPECT_DCB_ERROR(forge_slice_problem(s, o), ErrorCode::kCannotRealizeGap);
}

TEST(SliceProblem, OptionValidation) {
  SliceOptions o;
  o.slice_fraction = 0.0;
  EXPECT_DCB_ERROR(forge_slice_problem(seeded(0), o), ErrorCode::kInvalidSpec);
  o = SliceOptions{};
  o.undersample_factor = 0.0;
  EXPECT_DCB_ERROR(forge_slice_problem(seeded(0), o), ErrorCode::kInvalidSpec);
  o = SliceOptions{};
  o.k = 0;
  EXPECT_DCB_ERROR(forge_slice_problem(seeded(0), o), ErrorCode::kInvalidSpec);
}

// Independent re-measurement from stored artifacts; the forge-time values
// must match to 1e-12 and satisfy the requested gap.
TEST(SliceProblem, DefaultGapHoldsAndIsReproducible) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const SliceProblem p = forge_slice_problem(seeded(seed), {});
    ASSERT_EQ(p.ground_truth_slices.size(), 1u);
    const std::set<std::string>& slice = p.ground_truth_slices[0];
    EXPECT_FALSE(slice.empty());
    EXPECT_LT(slice.size(), p.dataset.size());
    std::size_t all_ok = 0, slice_ok = 0;
    const std::vector<int> pred = predict_labels(p.trained_model, p.dataset);
    for (std::size_t i = 0; i < p.dataset.size(); ++i) {
      const bool ok = pred[i] == *p.dataset[i].label;
      all_ok += ok ? 1 : 0;
      if (slice.contains(p.dataset[i].id)) slice_ok += ok ? 1 : 0;
    }
    const double overall = static_cast<double>(all_ok) / static_cast<double>(p.dataset.size());
    const double on_slice = static_cast<double>(slice_ok) / static_cast<double>(slice.size());
    EXPECT_LE(on_slice, overall - 0.2) << seed;
    EXPECT_NEAR(overall - on_slice, p.underperformance_gap, 1e-12);
    EXPECT_NEAR(overall, p.overall_accuracy, 1e-12);
  }
}

TEST(ValuationBatch, DisjointSplitsAndIndependentRetrain) {
  const ValuationBatch b = forge_valuation_batch(seeded(7), {});
  ASSERT_EQ(b.problems.size(), 5u);
  std::set<std::string> problem_ids;
  for (const ValuationProblem& p : b.problems) {
    EXPECT_TRUE(problem_ids.insert(p.problem_id).second);
    std::set<std::string> seen;
    for (const Dataset* d : {&p.d_a, &p.d_b, &p.d_test}) {
      EXPECT_FALSE(d->empty());
      for (const std::string& id : d->ids()) EXPECT_TRUE(seen.insert(id).second) << id;
    }
    // Second code path: merge rows by hand, train each member, average.
    std::vector<Example> rows = p.d_a.examples();
    rows.insert(rows.end(), p.d_b.examples().begin(), p.d_b.examples().end());
    const Dataset joined("joined", p.d_a.dim(), p.d_a.classes(), rows);
    double total = 0.0;
    for (const SuiteMember& m : p.suite.members) {
      total += accuracy(predict_labels(train(m, joined), p.d_test), p.d_test.labels());
    }
    EXPECT_EQ(p.true_union_accuracy, total / static_cast<double>(p.suite.members.size()));
  }
}

// ---- Bundles and the registry ------------------------------------------------

TEST(Bundle, RoundTripRewritesToTheSameHash) {
  for (BenchmarkType t : {BenchmarkType::kTrainingSet, BenchmarkType::kTestSet,
                          BenchmarkType::kSelection, BenchmarkType::kDebugging,
                          BenchmarkType::kValuation, BenchmarkType::kSlicing}) {
    TempDir dir;
    Json options = Json::object();
    if (t == BenchmarkType::kSlicing) options["num_problems"] = 1;
    if (t == BenchmarkType::kValuation) options["num_problems"] = 2;
    if (t == BenchmarkType::kDebugging) options["null_rate"] = 0.01;
    const std::string hash = forge_bundle(t, seeded(3), options, dir / "a");
    const Bundle loaded = load_bundle(dir / "a");
    EXPECT_EQ(loaded.manifest_hash, hash);
    EXPECT_EQ(type_of(loaded.problem), t);
    EXPECT_EQ(write_bundle(loaded.problem, loaded.manifest.at("forge"), dir / "b"), hash)
        << benchmark_type_name(t);
  }
}

TEST(Bundle, SameSeedSameHashDifferentSeedDifferentHash) {
  TempDir dir;
  const Json o = Json::object();
  const std::string a = forge_bundle(BenchmarkType::kSelection, seeded(7), o, dir / "a");
  const std::string b = forge_bundle(BenchmarkType::kSelection, seeded(7), o, dir / "b");
  const std::string c = forge_bundle(BenchmarkType::kSelection, seeded(8), o, dir / "c");
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
}

TEST(Bundle, TamperedHiddenFileIsDetected) {
  TempDir dir;
  forge_bundle(BenchmarkType::kDebugging, seeded(1), Json::object(), dir / "b");
  const auto target = dir / "b" / "hidden" / "repairs.json";
  ASSERT_TRUE(std::filesystem::exists(target));
  write_file(target, read_file(target) + " ");
  EXPECT_DCB_ERROR(load_bundle(dir / "b"), ErrorCode::kBundleHashMismatch);
}

TEST(Bundle, PublicFilesExcludeHidden) {
  TempDir dir;
  forge_bundle(BenchmarkType::kSelection, seeded(1), Json::object(), dir / "b");
  const Bundle b = load_bundle(dir / "b");
  for (const std::string& f : public_files(b.manifest)) {
    EXPECT_FALSE(is_hidden_path(f)) << f;
  }
  EXPECT_TRUE(is_hidden_path("hidden/test.csv"));
  EXPECT_EQ(headline_metric(b.problem), "accuracy");
  EXPECT_TRUE(higher_is_better("accuracy"));
  EXPECT_FALSE(higher_is_better("rmse"));
}

TEST(Registry, OptionsAreAppliedAndUnknownKeysRejected) {
  const Problem p = forge_problem(BenchmarkType::kSelection, seeded(1),
                                  Json{{"budget", 20}, {"concealed", false}});
  const auto& sel = std::get<SelectionProblem>(p);
  EXPECT_EQ(sel.budget, 20u);
  EXPECT_FALSE(sel.concealed);
  EXPECT_DCB_ERROR(forge_problem(BenchmarkType::kSelection, seeded(1), Json{{"budgte", 20}}),
                   ErrorCode::kInvalidSpec);
  const Problem d = forge_problem(BenchmarkType::kDebugging, seeded(1),
                                  Json{{"headline", "inspection_fraction"}});
  EXPECT_FALSE(std::get<DebuggingProblem>(d).budget.has_value());
  EXPECT_DCB_ERROR(forge_problem(BenchmarkType::kDebugging, seeded(1), Json{{"label_mode", "x"}}),
                   ErrorCode::kInvalidSpec);
  EXPECT_EQ(parse_benchmark_type("slicing"), BenchmarkType::kSlicing);
  EXPECT_DCB_ERROR(parse_benchmark_type("nope"), ErrorCode::kParseError);
}

}  // namespace
}  // namespace dcbench::forge
