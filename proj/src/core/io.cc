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

#include "dcbench/core/io.h"

#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>

#include "dcbench/core/error.h"

namespace dcbench {

namespace {

void append_double(std::string& out, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

void check_cell(const std::string& text, const char* what) {
  if (text.find_first_of(",\n\r") != std::string::npos) {
    throw Error(ErrorCode::kInvalidSpec,
                std::string(what) + " contains a separator: " + text);
  }
}

}  // namespace

std::string dataset_to_csv(const Dataset& data) {
  std::string out = "example_id,label";
  for (int j = 0; j < data.dim(); ++j) out += ",f" + std::to_string(j);
  out += '\n';
  for (const Example& e : data.examples()) {
    check_cell(e.id, "example id");
    out += e.id;
    out += ',';
    if (e.label) out += data.classes()[*e.label];
    for (double v : e.features) {
      out += ',';
      if (!is_missing(v)) append_double(out, v);
    }
    out += '\n';
  }
  return out;
}

Dataset dataset_from_csv(std::string_view csv, std::string id, int dim,
                         std::vector<std::string> classes) {
  std::vector<std::string_view> lines = split(csv, '\n');
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw Error(ErrorCode::kParseError, "missing CSV header");
  auto strip_cr = [](std::string_view s) {
    if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
    return s;
  };
  std::string expected = "example_id,label";
  for (int j = 0; j < dim; ++j) expected += ",f" + std::to_string(j);
  if (strip_cr(lines[0]) != expected) {
    throw Error(ErrorCode::kParseError, "unexpected CSV header in " + id);
  }
  std::vector<Example> examples;
  examples.reserve(lines.size() - 1);
  for (std::size_t row = 1; row < lines.size(); ++row) {
    std::vector<std::string_view> cells = split(strip_cr(lines[row]), ',');
    if (cells.size() != static_cast<std::size_t>(dim) + 2) {
      throw Error(ErrorCode::kParseError,
                  id + " row " + std::to_string(row) + " has " +
                      std::to_string(cells.size()) + " cells");
    }
    Example e;
    e.id = std::string(cells[0]);
    if (e.id.empty()) {
      throw Error(ErrorCode::kParseError,
                  id + " row " + std::to_string(row) + " has no id");
    }
    if (!cells[1].empty()) {
      bool found = false;
      for (std::size_t c = 0; c < classes.size(); ++c) {
        if (classes[c] == cells[1]) {
          e.label = static_cast<int>(c);
          found = true;
          break;
        }
      }
      if (!found) {
        throw Error(ErrorCode::kParseError,
                    id + " row " + std::to_string(row) + " unknown label " +
                        std::string(cells[1]));
      }
    }
    e.features.reserve(dim);
    for (int j = 0; j < dim; ++j) {
      std::string_view cell = cells[j + 2];
      if (cell.empty()) {
        e.features.push_back(kMissing);
        continue;
      }
      double v = 0.0;
      auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
        throw Error(ErrorCode::kParseError,
                    id + " row " + std::to_string(row) + " bad number " +
                        std::string(cell));
      }
      e.features.push_back(v);
    }
    examples.push_back(std::move(e));
  }
  try {
    return Dataset(std::move(id), dim, std::move(classes), std::move(examples));
  } catch (const Error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

std::vector<std::string> write_dataset(const Dataset& data,
                                       const std::filesystem::path& dir,
                                       const std::string& name) {
  std::filesystem::create_directories(dir);
  const std::string csv_name = name + ".csv";
  const std::string manifest_name = name + ".json";
  for (const std::string& c : data.classes()) check_cell(c, "class name");
  Json manifest = {{"id", data.id()},
                   {"dim", data.dim()},
                   {"classes", data.classes()},
                   {"data", csv_name}};
  write_file(dir / csv_name, dataset_to_csv(data));
  write_json_file(dir / manifest_name, manifest);
  return {manifest_name, csv_name};
}

Dataset read_dataset(const std::filesystem::path& manifest_path) {
  const Json manifest = read_json_file(manifest_path);
  try {
    const std::string csv_path =
        (manifest_path.parent_path() / manifest.at("data").get<std::string>())
            .string();
    return dataset_from_csv(read_file(csv_path),
                            manifest.at("id").get<std::string>(),
                            manifest.at("dim").get<int>(),
                            manifest.at("classes").get<std::vector<std::string>>());
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError,
                manifest_path.string() + ": " + e.what());
  }
}

Json to_json(const SuiteMember& member) {
  return {{"kind", model_kind_name(member.kind)},
          {"learning_rate", member.learning_rate},
          {"iterations", member.iterations},
          {"l2_lambda", member.l2_lambda}};
}

Json to_json(const SuiteConfig& suite) {
  Json members = Json::array();
  for (const SuiteMember& m : suite.members) members.push_back(to_json(m));
  return {{"members", members}, {"seed", suite.seed}};
}

Json to_json(const LinearModel& model) {
  return {{"kind", model_kind_name(model.kind)},
          {"num_classes", model.num_classes},
          {"dim", model.dim},
          {"weights", model.weights},
          {"bias", model.bias},
          {"training_config_hash", model.training_config_hash}};
}

SuiteMember suite_member_from_json(const Json& j) {
  try {
    SuiteMember m;
    m.kind = parse_model_kind(j.at("kind").get<std::string>());
    m.learning_rate = j.value("learning_rate", m.learning_rate);
    m.iterations = j.value("iterations", m.iterations);
    m.l2_lambda = j.value("l2_lambda", m.l2_lambda);
    return m;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("suite member: ") + e.what());
  }
}

SuiteConfig suite_from_json(const Json& j) {
  try {
    SuiteConfig suite;
    for (const Json& m : j.at("members")) {
      suite.members.push_back(suite_member_from_json(m));
    }
    suite.seed = j.value("seed", std::uint64_t{0});
    suite.validate();
    return suite;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("suite: ") + e.what());
  }
}

LinearModel model_from_json(const Json& j) {
  try {
    LinearModel m;
    m.kind = parse_model_kind(j.at("kind").get<std::string>());
    m.num_classes = j.at("num_classes").get<int>();
    m.dim = j.at("dim").get<int>();
    m.weights = j.at("weights").get<std::vector<double>>();
    m.bias = j.at("bias").get<std::vector<double>>();
    m.training_config_hash = j.value("training_config_hash", std::string());
    m.validate();
    return m;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("model: ") + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::kIoError, "short write " + path.string());
}

Json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  write_file(path, j.dump(2) + "\n");
}

}  // namespace dcbench
