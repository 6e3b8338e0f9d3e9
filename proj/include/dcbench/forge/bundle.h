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

#ifndef DCBENCH_FORGE_BUNDLE_H_
#define DCBENCH_FORGE_BUNDLE_H_

#include <filesystem>
#include <string>
#include <vector>

#include "dcbench/core/io.h"
#include "dcbench/forge/forge.h"
#include "dcbench/forge/problems.h"

namespace dcbench::forge {

// A problem bundle is a directory holding manifest.json, the participant
// visible files, and a hidden/ subdirectory with truth, repairs and hidden
// test data. The manifest lists the SHA-256 of every other file.
inline constexpr const char* kBundleFormat = "dcbench-bundle/1";
inline constexpr const char* kHiddenDir = "hidden";

std::string headline_metric(const Problem& problem);
// "higher" or "lower".
std::string metric_direction(const std::string& metric);
bool higher_is_better(const std::string& metric);

Json to_json(const ForgeSpec& spec);
ForgeSpec forge_spec_from_json(const Json& j);

// Writes the bundle and returns the SHA-256 of manifest.json. `provenance`
// is stored verbatim under "forge" (seed, spec, options).
std::string write_bundle(const Problem& problem, const Json& provenance,
                         const std::filesystem::path& dir);

struct Bundle {
  std::filesystem::path root;
  Json manifest;
  std::string manifest_hash;
  Problem problem;
};

// Loads a full bundle, including hidden data. Throws kBundleHashMismatch when
// any listed file is missing or altered, kParseError on schema problems.
Bundle load_bundle(const std::filesystem::path& dir);

// Checks every hash listed in the manifest.
void verify_bundle(const std::filesystem::path& dir, const Json& manifest);

// Manifest-listed files outside hidden/, plus manifest.json itself.
std::vector<std::string> public_files(const Json& manifest);
bool is_hidden_path(const std::string& relative_path);

}  // namespace dcbench::forge

#endif  // DCBENCH_FORGE_BUNDLE_H_
