// Copyright 2026 The Gatesmith Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gatesmith/learner.hpp"
#include "gatesmith/taskgen.hpp"

namespace gatesmith {

using Json = nlohmann::json;

/// A file could not be read or written.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A file was readable but its content is malformed.
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::filesystem::path &path);
/// Write to a temporary sibling, then rename over @p path.
void write_file_atomic(const std::filesystem::path &path, const std::string &content);

Json to_json(const Matrix &m);
Matrix matrix_from_json(const Json &j);

Json to_json(const Circuit &c);
/// Gate names are resolved against @p lib first, then the standard gates.
Circuit circuit_from_json(const Json &j, const Library &lib);

Json to_json(const Library &lib);
Library library_from_json(const Json &j);

/// Full record, including the generating circuit.
Json to_json(const TaskRecord &r);
/// Only id, n_qubits and unitary.
Json to_public_json(const TaskRecord &r);
TaskRecord task_record_from_json(const Json &j);

Json to_json(const SolutionSet &s);
SolutionSet solution_set_from_json(const Json &j, const Library &lib);

Json to_json(const EnumReport &r);
Json to_json(const AdoptionReport &r);

std::string to_jsonl(const std::vector<Json> &rows);
std::vector<Json> parse_jsonl(const std::string &text, const std::string &origin);

void write_records(const std::filesystem::path &path, const std::vector<TaskRecord> &records,
                   bool public_view);
std::vector<TaskRecord> read_records(const std::filesystem::path &path);
/// Tasks from a full or public dataset file.
std::vector<Task> read_tasks(const std::filesystem::path &path);

void write_library(const std::filesystem::path &path, const Library &lib);
Library read_library(const std::filesystem::path &path);

void write_solutions(const std::filesystem::path &path, const SolutionStore &store);
SolutionStore read_solutions(const std::filesystem::path &path, const Library &lib);

Matrix read_matrix(const std::filesystem::path &path);

} // namespace gatesmith
