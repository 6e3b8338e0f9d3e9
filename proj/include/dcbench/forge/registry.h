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

#ifndef DCBENCH_FORGE_REGISTRY_H_
#define DCBENCH_FORGE_REGISTRY_H_

#include <filesystem>
#include <string>

#include "dcbench/core/io.h"
#include "dcbench/forge/forge.h"
#include "dcbench/forge/problems.h"

namespace dcbench::forge {

// Forges any problem type from a flat JSON option object. Recognized keys:
//   training_set: label_noise, size_cap
//   selection:    budget, probe_per_class, metric ("accuracy" |
//                 "mean_average_precision"), concealed, concealed_num_classes
//   test_set:     submission_cap
//   debugging:    label_rate, label_mode ("flip" | "machine_label"),
//                 null_rate, budget (null for none), headline ("gap_closed" |
//                 "inspection_fraction"), inspection_step
//   valuation:    num_problems, b_fraction_lo, b_fraction_hi
//   slicing:      num_problems, slice_fraction, undersample_factor, min_gap,
//                 k, max_retries
// Unknown keys throw kInvalidSpec.
Problem forge_problem(BenchmarkType type, const ForgeSpec& spec,
                      const Json& options);

// What write_bundle records under "forge".
Json forge_provenance(BenchmarkType type, const ForgeSpec& spec,
                      const Json& options);

// forge_problem + write_bundle; returns the manifest hash.
std::string forge_bundle(BenchmarkType type, const ForgeSpec& spec,
                         const Json& options, const std::filesystem::path& out);

}  // namespace dcbench::forge

#endif  // DCBENCH_FORGE_REGISTRY_H_
