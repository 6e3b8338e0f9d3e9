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

#include "dcbench/forge/bundle.h"

#include <algorithm>
#include <map>

#include "dcbench/core/error.h"
#include "dcbench/core/hash.h"

namespace dcbench::forge {

namespace fs = std::filesystem;

std::string headline_metric(const Problem& problem) {
  switch (type_of(problem)) {
    case BenchmarkType::kTrainingSet: return "accuracy";
    case BenchmarkType::kTestSet: return "adversarial_credit";
    case BenchmarkType::kSelection:
      return std::get<SelectionProblem>(problem).metric ==
                     SelectionMetric::kAccuracy
                 ? "accuracy"
                 : "mean_average_precision";
    case BenchmarkType::kDebugging:
      return std::get<DebuggingProblem>(problem).headline ==
                     DebugMetric::kGapClosed
                 ? "gap_closed"
                 : "inspection_fraction";
    case BenchmarkType::kValuation: return "rmse";
    case BenchmarkType::kSlicing: return "mean_max_precision_at_k";
  }
  return "unknown";
}

bool higher_is_better(const std::string& metric) {
  return metric != "rmse" && metric != "inspection_fraction";
}

std::string metric_direction(const std::string& metric) {
  return higher_is_better(metric) ? "higher" : "lower";
}

Json to_json(const ForgeSpec& spec) {
  return {{"seed", spec.seed},
          {"num_classes", spec.num_classes},
          {"per_class_count", spec.per_class_count},
          {"dim", spec.dim},
          {"cluster_spread", spec.cluster_spread},
          {"mean_radius", spec.mean_radius},
          {"splits",
           {spec.splits.train, spec.splits.validation, spec.splits.test}},
          {"class_prefix", spec.class_prefix},
          {"id_prefix", spec.id_prefix}};
}

ForgeSpec forge_spec_from_json(const Json& j) {
  try {
    ForgeSpec s;
    s.seed = j.value("seed", s.seed);
    s.num_classes = j.value("num_classes", s.num_classes);
    s.per_class_count = j.value("per_class_count", s.per_class_count);
    s.dim = j.value("dim", s.dim);
    s.cluster_spread = j.value("cluster_spread", s.cluster_spread);
    s.mean_radius = j.value("mean_radius", s.mean_radius);
    if (j.contains("splits")) {
      const auto f = j.at("splits").get<std::vector<double>>();
      if (f.size() != 3) throw Error(ErrorCode::kParseError, "splits need 3");
      s.splits = {f[0], f[1], f[2]};
    }
    s.class_prefix = j.value("class_prefix", s.class_prefix);
    s.id_prefix = j.value("id_prefix", s.id_prefix);
    return s;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("forge spec: ") + e.what());
  }
}

bool is_hidden_path(const std::string& relative_path) {
  return relative_path == kHiddenDir ||
         relative_path.rfind(std::string(kHiddenDir) + "/", 0) == 0;
}

namespace {

std::string join(const std::string& dir, const std::string& name) {
  return dir.empty() ? name : dir + "/" + name;
}

class Writer {
 public:
  explicit Writer(fs::path root) : root_(std::move(root)) {
    fs::create_directories(root_);
  }

  void dataset(const Dataset& data, const std::string& dir,
               const std::string& name) {
    for (const std::string& f : write_dataset(data, root_ / dir, name)) {
      files_.push_back(join(dir, f));
    }
  }

  void json(const std::string& rel, const Json& j) {
    write_json_file(root_ / rel, j);
    files_.push_back(rel);
  }

  void nested(const std::string& rel_dir, const Problem& problem,
              const Json& provenance) {
    write_bundle(problem, provenance, root_ / rel_dir);
    const Json sub = read_json_file(root_ / rel_dir / "manifest.json");
    files_.push_back(join(rel_dir, "manifest.json"));
    for (const auto& [f, hash] : sub.at("files").items()) {
      files_.push_back(join(rel_dir, f));
    }
  }

  std::string finish(Json manifest) {
    Json hashes = Json::object();
    std::sort(files_.begin(), files_.end());
    for (const std::string& f : files_) hashes[f] = sha256_file(root_ / f);
    manifest["files"] = hashes;
    write_json_file(root_ / "manifest.json", manifest);
    return sha256_file(root_ / "manifest.json");
  }

 private:
  fs::path root_;
  std::vector<std::string> files_;
};

Json repairs_to_json(const HiddenRepairs& repairs, const Dataset& data) {
  Json out = Json::object();
  for (const auto& [id, r] : repairs) {
    Json entry = Json::object();
    if (r.label) entry["label"] = data.classes().at(*r.label);
    Json cells = Json::array();
    for (const CellRepair& c : r.cells) {
      cells.push_back({{"feature", c.feature},
                       {"truth", c.truth},
                       {"candidates", c.candidates},
                       {"true_index", c.true_index}});
    }
    entry["cells"] = cells;
    out[id] = entry;
  }
  return out;
}

HiddenRepairs repairs_from_json(const Json& j, const Dataset& data) {
  HiddenRepairs out;
  for (const auto& [id, entry] : j.items()) {
    Repair r;
    if (entry.contains("label")) {
      auto c = data.class_index(entry.at("label").get<std::string>());
      if (!c) throw Error(ErrorCode::kParseError, "repair label for " + id);
      r.label = *c;
    }
    for (const Json& cell : entry.at("cells")) {
      CellRepair c;
      c.feature = cell.at("feature").get<int>();
      c.truth = cell.at("truth").get<double>();
      c.candidates = cell.at("candidates").get<std::array<double, 3>>();
      c.true_index = cell.at("true_index").get<int>();
      r.cells.push_back(c);
    }
    out.emplace(id, std::move(r));
  }
  return out;
}

Json public_candidates(const HiddenRepairs& repairs) {
  Json out = Json::array();
  for (const auto& [id, r] : repairs) {
    for (const CellRepair& c : r.cells) {
      out.push_back({{"example_id", id},
                     {"feature", c.feature},
                     {"candidates", c.candidates}});
    }
  }
  return out;
}

std::string selection_metric_name(SelectionMetric m) {
  return m == SelectionMetric::kAccuracy ? "accuracy" : "mean_average_precision";
}

Json base_manifest(const Problem& problem, const Json& provenance) {
  const std::string metric = headline_metric(problem);
  return {{"format", kBundleFormat},
          {"type", benchmark_type_name(type_of(problem))},
          {"headline_metric", metric},
          {"metric_direction", metric_direction(metric)},
          {"forge", provenance}};
}

void put_suite(Json& manifest, const SuiteConfig& suite) {
  manifest["suite"] = to_json(suite);
  manifest["suite_hash"] = suite_hash(suite);
}

}  // namespace

std::string write_bundle(const Problem& problem, const Json& provenance,
                         const fs::path& dir) {
  Writer w(dir);
  Json m = base_manifest(problem, provenance);
  const std::string hidden = kHiddenDir;

  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, TrainingSetProblem>) {
          w.dataset(p.reference_train, "", "reference_train");
          w.dataset(p.validation, "", "validation");
          w.dataset(p.hidden_test, hidden, "test");
          w.dataset(p.clean_train, hidden, "clean_train");
          w.json(hidden + "/truth.json", {{"clean_baseline", p.clean_baseline}});
          m["size_cap"] = p.size_cap;
          m["reference_baseline"] = p.reference_baseline;
          put_suite(m, p.suite);
        } else if constexpr (std::is_same_v<T, SelectionProblem>) {
          w.dataset(p.pool, "", "pool");
          w.dataset(p.hidden_test, hidden, "test");
          m["probe_ids"] = p.probe_ids;
          m["budget"] = p.budget;
          m["metric"] = selection_metric_name(p.metric);
          put_suite(m, p.suite);
          if (p.concealed) {
            w.nested(hidden + "/concealed", Problem(*p.concealed), provenance);
            m["concealed"] = hidden + "/concealed";
          }
        } else if constexpr (std::is_same_v<T, TestSetProblem>) {
          w.dataset(p.candidate_pool.without_labels(), "", "candidates");
          w.dataset(p.candidate_pool, hidden, "candidates");
          Json models = Json::array();
          for (const LinearModel& model : p.frozen_models) {
            models.push_back(to_json(model));
          }
          w.json(hidden + "/models.json", models);
          m["allowed_labels"] = p.allowed_labels;
          m["submission_cap"] = p.submission_cap;
          put_suite(m, p.suite);
        } else if constexpr (std::is_same_v<T, DebuggingProblem>) {
          w.dataset(p.dirty_train, "", "dirty_train");
          w.dataset(p.validation, "", "validation");
          w.json("candidates.json", public_candidates(p.hidden_repairs));
          w.dataset(p.hidden_test, hidden, "test");
          w.json(hidden + "/repairs.json",
                 repairs_to_json(p.hidden_repairs, p.dirty_train));
          m["budget"] = p.budget ? Json(*p.budget) : Json(nullptr);
          m["inspection_step"] = p.inspection_step;
          put_suite(m, p.suite);
        } else if constexpr (std::is_same_v<T, ValuationBatch>) {
          Json ids = Json::array();
          Json truth = Json::object();
          for (const ValuationProblem& v : p.problems) {
            w.dataset(v.d_a, v.problem_id, "d_a");
            w.dataset(v.d_b.without_labels(), v.problem_id, "d_b");
            w.dataset(v.d_test, v.problem_id, "d_test");
            w.dataset(v.d_b, hidden + "/" + v.problem_id, "d_b");
            ids.push_back(v.problem_id);
            truth[v.problem_id] = v.true_union_accuracy;
          }
          w.json(hidden + "/truth.json", truth);
          m["problems"] = ids;
          put_suite(m, p.problems.front().suite);
        } else if constexpr (std::is_same_v<T, SliceBatch>) {
          Json problems = Json::array();
          Json truth = Json::object();
          for (const SliceProblem& s : p.problems) {
            w.dataset(s.dataset, s.problem_id, "dataset");
            w.json(s.problem_id + "/model.json", to_json(s.trained_model));
            problems.push_back({{"problem_id", s.problem_id}, {"k", s.k}});
            Json slices = Json::array();
            for (const auto& slice : s.ground_truth_slices) {
              slices.push_back(std::vector<std::string>(slice.begin(), slice.end()));
            }
            truth[s.problem_id] = {{"slices", slices},
                                   {"overall_accuracy", s.overall_accuracy},
                                   {"slice_accuracies", s.slice_accuracies},
                                   {"underperformance_gap", s.underperformance_gap},
                                   {"final_seed", s.final_seed}};
          }
          w.json(hidden + "/slices.json", truth);
          m["problems"] = problems;
        }
      },
      problem);
  return w.finish(std::move(m));
}

void verify_bundle(const fs::path& dir, const Json& manifest) {
  if (!manifest.contains("files") || !manifest.at("files").is_object()) {
    throw Error(ErrorCode::kParseError, "manifest has no file list");
  }
  for (const auto& [rel, hash] : manifest.at("files").items()) {
    const fs::path path = dir / rel;
    if (!fs::exists(path)) {
      throw Error(ErrorCode::kBundleHashMismatch, "missing " + rel);
    }
    if (sha256_file(path) != hash.get<std::string>()) {
      throw Error(ErrorCode::kBundleHashMismatch, "altered " + rel);
    }
  }
}

std::vector<std::string> public_files(const Json& manifest) {
  std::vector<std::string> out{"manifest.json"};
  for (const auto& [rel, hash] : manifest.at("files").items()) {
    if (!is_hidden_path(rel)) out.push_back(rel);
  }
  return out;
}

namespace {

Problem load_problem(const fs::path& dir, const Json& m) {
  const BenchmarkType type = parse_benchmark_type(m.at("type").get<std::string>());
  auto ds = [&](const std::string& rel) { return read_dataset(dir / rel); };
  switch (type) {
    case BenchmarkType::kTrainingSet: {
      TrainingSetProblem p;
      p.reference_train = ds("reference_train.json");
      p.validation = ds("validation.json");
      p.hidden_test = ds("hidden/test.json");
      p.clean_train = ds("hidden/clean_train.json");
      p.clean_baseline =
          read_json_file(dir / "hidden/truth.json").at("clean_baseline").get<double>();
      p.reference_baseline = m.at("reference_baseline").get<double>();
      p.size_cap = m.at("size_cap").get<std::size_t>();
      p.suite = suite_from_json(m.at("suite"));
      return p;
    }
    case BenchmarkType::kSelection: {
      SelectionProblem p;
      p.pool = ds("pool.json");
      p.hidden_test = ds("hidden/test.json");
      p.probe_ids = m.at("probe_ids").get<std::vector<std::string>>();
      p.budget = m.at("budget").get<std::size_t>();
      const std::string metric = m.at("metric").get<std::string>();
      if (metric == "accuracy") {
        p.metric = SelectionMetric::kAccuracy;
      } else if (metric == "mean_average_precision") {
        p.metric = SelectionMetric::kMeanAveragePrecision;
      } else {
        throw Error(ErrorCode::kParseError, "unknown selection metric " + metric);
      }
      p.suite = suite_from_json(m.at("suite"));
      if (m.contains("concealed")) {
        const fs::path sub = dir / m.at("concealed").get<std::string>();
        const Json sub_manifest = read_json_file(sub / "manifest.json");
        p.concealed = std::make_shared<const SelectionProblem>(
            std::get<SelectionProblem>(load_problem(sub, sub_manifest)));
      }
      return p;
    }
    case BenchmarkType::kTestSet: {
      TestSetProblem p;
      p.candidate_pool = ds("hidden/candidates.json");
      for (const Json& j : read_json_file(dir / "hidden/models.json")) {
        p.frozen_models.push_back(model_from_json(j));
      }
      p.allowed_labels = m.at("allowed_labels").get<std::vector<std::string>>();
      p.submission_cap = m.at("submission_cap").get<std::size_t>();
      p.suite = suite_from_json(m.at("suite"));
      return p;
    }
    case BenchmarkType::kDebugging: {
      DebuggingProblem p;
      p.dirty_train = ds("dirty_train.json");
      p.validation = ds("validation.json");
      p.hidden_test = ds("hidden/test.json");
      p.hidden_repairs =
          repairs_from_json(read_json_file(dir / "hidden/repairs.json"), p.dirty_train);
      if (!m.at("budget").is_null()) p.budget = m.at("budget").get<std::size_t>();
      p.inspection_step = m.at("inspection_step").get<std::size_t>();
      p.headline = m.at("headline_metric").get<std::string>() == "gap_closed"
                       ? DebugMetric::kGapClosed
                       : DebugMetric::kInspectionFraction;
      p.suite = suite_from_json(m.at("suite"));
      return p;
    }
    case BenchmarkType::kValuation: {
      ValuationBatch batch;
      const SuiteConfig suite = suite_from_json(m.at("suite"));
      const Json truth = read_json_file(dir / "hidden/truth.json");
      for (const Json& id_json : m.at("problems")) {
        const std::string id = id_json.get<std::string>();
        ValuationProblem v;
        v.problem_id = id;
        v.d_a = ds(id + "/d_a.json");
        v.d_b = ds("hidden/" + id + "/d_b.json");
        v.d_test = ds(id + "/d_test.json");
        v.suite = suite;
        v.true_union_accuracy = truth.at(id).get<double>();
        batch.problems.push_back(std::move(v));
      }
      return batch;
    }
    case BenchmarkType::kSlicing: {
      SliceBatch batch;
      const Json truth = read_json_file(dir / "hidden/slices.json");
      for (const Json& entry : m.at("problems")) {
        SliceProblem s;
        s.problem_id = entry.at("problem_id").get<std::string>();
        s.k = entry.at("k").get<std::size_t>();
        s.dataset = ds(s.problem_id + "/dataset.json");
        s.trained_model =
            model_from_json(read_json_file(dir / (s.problem_id + "/model.json")));
        const Json& t = truth.at(s.problem_id);
        for (const Json& slice : t.at("slices")) {
          const auto ids = slice.get<std::vector<std::string>>();
          s.ground_truth_slices.emplace_back(ids.begin(), ids.end());
        }
        s.overall_accuracy = t.at("overall_accuracy").get<double>();
        s.slice_accuracies = t.at("slice_accuracies").get<std::vector<double>>();
        s.underperformance_gap = t.at("underperformance_gap").get<double>();
        s.final_seed = t.at("final_seed").get<std::uint64_t>();
        batch.problems.push_back(std::move(s));
      }
      return batch;
    }
  }
  throw Error(ErrorCode::kParseError, "unhandled bundle type");
}

}  // namespace

Bundle load_bundle(const fs::path& dir) {
  Bundle b;
  b.root = dir;
  const fs::path manifest_path = dir / "manifest.json";
  b.manifest = read_json_file(manifest_path);
  b.manifest_hash = sha256_file(manifest_path);
  if (b.manifest.value("format", std::string()) != kBundleFormat) {
    throw Error(ErrorCode::kParseError, "not a bundle: " + dir.string());
  }
  verify_bundle(dir, b.manifest);
  try {
    b.problem = load_problem(dir, b.manifest);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, dir.string() + ": " + e.what());
  }
  return b;
}

}  // namespace dcbench::forge
