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

#ifndef DCBENCH_CORE_IO_H_
#define DCBENCH_CORE_IO_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dcbench/core/dataset.h"
#include "dcbench/core/model.h"
#include "json.hpp"

namespace dcbench {

using Json = nlohmann::json;

// CSV body with header `example_id,label,f0..f{dim-1}`. Labels are class
// names; a hidden label or a NULL feature is an empty cell. Numbers are
// written in shortest round-trip form so a read gives back the same doubles.
std::string dataset_to_csv(const Dataset& data);
// Throws kParseError.
Dataset dataset_from_csv(std::string_view csv, std::string id, int dim,
                         std::vector<std::string> classes);

// Writes `<name>.json` (manifest) and `<name>.csv` into dir and returns the
// two file names.
std::vector<std::string> write_dataset(const Dataset& data,
                                       const std::filesystem::path& dir,
                                       const std::string& name);
// Reads a dataset through its manifest.
Dataset read_dataset(const std::filesystem::path& manifest_path);

Json to_json(const SuiteMember& member);
Json to_json(const SuiteConfig& suite);
Json to_json(const LinearModel& model);
SuiteMember suite_member_from_json(const Json& j);
SuiteConfig suite_from_json(const Json& j);
LinearModel model_from_json(const Json& j);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);
Json read_json_file(const std::filesystem::path& path);
// Pretty-printed with a trailing newline; object keys sorted.
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace dcbench

#endif  // DCBENCH_CORE_IO_H_
