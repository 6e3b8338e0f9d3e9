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

#include "dcbench/forge/registry.h"

#include <set>

#include "dcbench/core/error.h"
#include "dcbench/forge/bundle.h"

namespace dcbench::forge {

namespace {

class Options {
 public:
  Options(const Json& j, std::set<std::string> known) : j_(j) {
    if (j_.is_null()) return;
    if (!j_.is_object()) throw Error(ErrorCode::kInvalidSpec, "options must be an object");
    for (const auto& [key, value] : j_.items()) {
      if (!known.contains(key)) {
        throw Error(ErrorCode::kInvalidSpec, "unknown forge option " + key);
      }
    }
  }

  template <typename T>
  void get(const char* key, T& out) const {
    if (j_.is_null() || !j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kInvalidSpec,
                  std::string("forge option ") + key + ": " + e.what());
    }
  }

  bool has_null(const char* key) const {
    return !j_.is_null() && j_.contains(key) && j_.at(key).is_null();
  }

 private:
  const Json& j_;
};

}  // namespace

Problem forge_problem(BenchmarkType type, const ForgeSpec& spec,
                      const Json& options) {
  spec.validate();
  switch (type) {
    case BenchmarkType::kTrainingSet: {
      Options o(options, {"label_noise", "size_cap"});
      TrainingSetOptions t;
      o.get("label_noise", t.label_noise);
      o.get("size_cap", t.size_cap);
      return forge_training_set(spec, t);
    }
    case BenchmarkType::kSelection: {
      Options o(options, {"budget", "probe_per_class", "metric", "concealed",
                          "concealed_num_classes"});
      SelectionOptions s;
      o.get("budget", s.budget);
      o.get("probe_per_class", s.probe_per_class);
      std::string metric = "accuracy";
      o.get("metric", metric);
      if (metric == "accuracy") {
        s.metric = SelectionMetric::kAccuracy;
      } else if (metric == "mean_average_precision") {
        s.metric = SelectionMetric::kMeanAveragePrecision;
      } else {
        throw Error(ErrorCode::kInvalidSpec, "unknown selection metric " + metric);
      }
      o.get("concealed", s.concealed);
      o.get("concealed_num_classes", s.concealed_num_classes);
      return forge_selection(spec, s);
    }
    case BenchmarkType::kTestSet: {
      Options o(options, {"submission_cap"});
      TestSetOptions t;
      o.get("submission_cap", t.submission_cap);
      return forge_test_set(spec, t);
    }
    case BenchmarkType::kDebugging: {
      Options o(options, {"label_rate", "label_mode", "null_rate", "budget",
                          "headline", "inspection_step"});
      DebuggingOptions d;
      o.get("label_rate", d.label_rate);
      std::string mode = "flip";
      o.get("label_mode", mode);
      if (mode == "flip") {
        d.label_mode = LabelNoise::kFlip;
      } else if (mode == "machine_label") {
        d.label_mode = LabelNoise::kMachineLabel;
      } else {
        throw Error(ErrorCode::kInvalidSpec, "unknown label mode " + mode);
      }
      o.get("null_rate", d.null_rate);
      std::string headline = "gap_closed";
      o.get("headline", headline);
      if (headline == "gap_closed") {
        d.headline = DebugMetric::kGapClosed;
      } else if (headline == "inspection_fraction") {
        d.headline = DebugMetric::kInspectionFraction;
        d.budget = std::nullopt;  // a given budget below still applies
      } else {
        throw Error(ErrorCode::kInvalidSpec, "unknown debugging headline " + headline);
      }
      if (o.has_null("budget")) {
        d.budget = std::nullopt;
      } else if (!options.is_null() && options.contains("budget")) {
        std::size_t budget = 0;
        o.get("budget", budget);
        d.budget = budget;
      }
      o.get("inspection_step", d.inspection_step);
      return forge_debugging(spec, d);
    }
    case BenchmarkType::kValuation: {
      Options o(options, {"num_problems", "b_fraction_lo", "b_fraction_hi"});
      ValuationOptions v;
      o.get("num_problems", v.num_problems);
      o.get("b_fraction_lo", v.b_fraction_lo);
      o.get("b_fraction_hi", v.b_fraction_hi);
      return forge_valuation_batch(spec, v);
    }
    case BenchmarkType::kSlicing: {
      Options o(options, {"num_problems", "slice_fraction", "undersample_factor",
                          "min_gap", "k", "max_retries"});
      SliceOptions s;
      int num_problems = 3;
      o.get("num_problems", num_problems);
      o.get("slice_fraction", s.slice_fraction);
      o.get("undersample_factor", s.undersample_factor);
      o.get("min_gap", s.min_gap);
      o.get("k", s.k);
      o.get("max_retries", s.max_retries);
      return forge_slice_batch(spec, s, num_problems);
    }
  }
  throw Error(ErrorCode::kInvalidSpec, "unknown benchmark type");
}

Json forge_provenance(BenchmarkType type, const ForgeSpec& spec,
                      const Json& options) {
  return {{"type", benchmark_type_name(type)},
          {"spec", to_json(spec)},
          {"options", options.is_null() ? Json::object() : options}};
}

std::string forge_bundle(BenchmarkType type, const ForgeSpec& spec,
                         const Json& options, const std::filesystem::path& out) {
  return write_bundle(forge_problem(type, spec, options),
                      forge_provenance(type, spec, options), out);
}

}  // namespace dcbench::forge
