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
#include "gatesmith/io.hpp"

#include <fstream>
#include <sstream>

#include "gatesmith/gates.hpp"

namespace gatesmith {

namespace fs = std::filesystem;

namespace {

template <typename T>
T field(const Json &j, const char *name) {
    if (!j.is_object() || !j.contains(name)) {
        throw FormatError(std::string("missing field \"") + name + "\"");
    }
    try {
        return j.at(name).get<T>();
    } catch (const Json::exception &e) {
        throw FormatError(std::string("field \"") + name + "\": " + e.what());
    }
}

GatePtr resolve_gate(const std::string &name, const Library &lib) {
    if (auto g = lib.find(name)) {
        return g;
    }
    if (auto g = gates::by_name(name)) {
        return g;
    }
    throw FormatError("unknown gate \"" + name + "\"");
}

} // namespace

std::string read_file(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string() + " for reading");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
        throw IoError("error while reading " + path.string());
    }
    return buf.str();
}

void write_file_atomic(const fs::path &path, const std::string &content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        if (ec) {
            throw IoError("cannot create directory " + path.parent_path().string() + ": " +
                          ec.message());
        }
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open " + tmp.string() + " for writing");
        }
        out << content;
        out.flush();
        if (!out) {
            throw IoError("error while writing " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " +
                      ec.message());
    }
}

Json to_json(const Matrix &m) {
    Json entries = Json::array();
    for (const auto &z : m.entries()) {
        entries.push_back(Json::array({z.real(), z.imag()}));
    }
    return Json{{"dim", m.dim()}, {"entries", std::move(entries)}};
}

Matrix matrix_from_json(const Json &j) {
    const auto dim = field<std::size_t>(j, "dim");
    const auto &entries = j.at("entries");
    if (!entries.is_array() || entries.size() != dim * dim) {
        throw FormatError("matrix of dim " + std::to_string(dim) + " needs " +
                          std::to_string(dim * dim) + " entries");
    }
    std::vector<Complex> values;
    values.reserve(entries.size());
    for (const auto &e : entries) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
            throw FormatError("matrix entries must be [re, im] pairs");
        }
        values.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    try {
        return Matrix(dim, std::move(values));
    } catch (const std::invalid_argument &e) {
        throw FormatError(e.what());
    }
}

Json to_json(const Circuit &c) {
    Json placements = Json::array();
    for (const auto &p : c.placements) {
        placements.push_back(Json{{"gate", p.gate->name()}, {"qubits", p.qubits}});
    }
    return Json{{"n_qubits", c.n_qubits}, {"placements", std::move(placements)}};
}

Circuit circuit_from_json(const Json &j, const Library &lib) {
    Circuit c;
    c.n_qubits = field<int>(j, "n_qubits");
    for (const auto &p : field<Json>(j, "placements")) {
        c.placements.push_back(
            Placement{resolve_gate(field<std::string>(p, "gate"), lib),
                      field<std::vector<int>>(p, "qubits")});
    }
    if (!validate(c)) {
        throw FormatError("circuit has an invalid placement");
    }
    return c;
}

Json to_json(const Library &lib) {
    Json gates = Json::array();
    for (std::size_t i = 0; i < lib.size(); ++i) {
        const auto &g = lib.gate(i);
        Json entry{{"name", g->name()}, {"arity", g->arity()}};
        if (g->is_elementary()) {
            entry["kind"] = "elementary";
            entry["matrix"] = to_json(g->matrix());
        } else {
            entry["kind"] = "composite";
            entry["body"] = g->body()->to_string();
        }
        entry["theta"] = lib.weight(i);
        gates.push_back(std::move(entry));
    }
    return Json{{"version", lib.version()},
                {"theta_end", lib.end_weight()},
                {"base_size", lib.base_size()},
                {"next_fragment_index", lib.next_fragment_index()},
                {"gates", std::move(gates)}};
}

Library library_from_json(const Json &j) {
    std::vector<GatePtr> loaded;
    std::vector<double> weights;
    for (const auto &entry : field<Json>(j, "gates")) {
        const auto name = field<std::string>(entry, "name");
        const auto kind = field<std::string>(entry, "kind");
        GatePtr g;
        try {
            if (kind == "elementary") {
                Matrix m = matrix_from_json(field<Json>(entry, "matrix"));
                auto standard = gates::by_name(name);
                if (standard && standard->matrix().dim() == m.dim() &&
                    frobenius_distance(standard->matrix(), m) < 1e-12) {
                    g = standard;
                } else {
                    g = Gate::elementary(name, std::move(m));
                }
            } else if (kind == "composite") {
                Program body = parse_program(field<std::string>(entry, "body"), loaded);
                g = Gate::composite(name, std::move(body));
            } else {
                throw FormatError("gate \"" + name + "\" has unknown kind \"" + kind + "\"");
            }
        } catch (const ParseError &e) {
            throw FormatError("gate \"" + name + "\": " + e.what());
        } catch (const std::invalid_argument &e) {
            throw FormatError("gate \"" + name + "\": " + e.what());
        }
        if (entry.contains("arity") && entry.at("arity").get<int>() != g->arity()) {
            throw FormatError("gate \"" + name + "\": stored arity does not match");
        }
        loaded.push_back(std::move(g));
        weights.push_back(field<double>(entry, "theta"));
    }
    std::optional<std::size_t> base;
    if (j.contains("base_size")) {
        base = j.at("base_size").get<std::size_t>();
    }
    const int next = j.value("next_fragment_index", 0);
    try {
        return Library(std::move(loaded), std::move(weights), field<double>(j, "theta_end"),
                       field<int>(j, "version"), base, next);
    } catch (const std::invalid_argument &e) {
        throw FormatError(e.what());
    }
}

Json to_json(const TaskRecord &r) {
    Json j = to_public_json(r);
    j["source_circuit"] = to_json(r.source_circuit);
    j["gate_count"] = r.gate_count;
    j["split"] = r.split == Split::Train ? "train" : "test";
    return j;
}

Json to_public_json(const TaskRecord &r) {
    return Json{{"id", r.id}, {"n_qubits", r.n_qubits}, {"unitary", to_json(r.unitary)}};
}

TaskRecord task_record_from_json(const Json &j) {
    TaskRecord r;
    r.id = field<std::string>(j, "id");
    r.n_qubits = field<int>(j, "n_qubits");
    r.unitary = matrix_from_json(field<Json>(j, "unitary"));
    if (r.unitary.n_qubits() != r.n_qubits) {
        throw FormatError("task " + r.id + ": unitary size does not match n_qubits");
    }
    if (j.contains("source_circuit")) {
        r.source_circuit = circuit_from_json(j.at("source_circuit"), Library{});
    } else {
        r.source_circuit.n_qubits = r.n_qubits;
    }
    r.gate_count = j.value("gate_count", static_cast<int>(r.source_circuit.size()));
    r.split = j.value("split", std::string("test")) == "train" ? Split::Train : Split::Test;
    return r;
}

Json to_json(const SolutionSet &s) {
    Json circuits = Json::array();
    for (const auto &sc : s.circuits) {
        circuits.push_back(Json{{"circuit", to_json(sc.circuit)}, {"log_prob", sc.log_prob}});
    }
    return Json{{"task_id", s.task_id}, {"circuits", std::move(circuits)}};
}

SolutionSet solution_set_from_json(const Json &j, const Library &lib) {
    SolutionSet s;
    s.task_id = field<std::string>(j, "task_id");
    for (const auto &c : field<Json>(j, "circuits")) {
        s.circuits.push_back(ScoredCircuit{circuit_from_json(field<Json>(c, "circuit"), lib),
                                           field<double>(c, "log_prob")});
    }
    return s;
}

Json to_json(const EnumReport &r) {
    Json shards = Json::array();
    for (const auto &s : r.per_shard) {
        shards.push_back(Json{{"visited", s.visited},
                              {"pruned", s.pruned},
                              {"emitted", s.emitted},
                              {"elapsed_s", s.elapsed_s},
                              {"stop_reason", s.stop_reason}});
    }
    return Json{{"visited", r.visited},
                {"pruned", r.pruned},
                {"emitted", r.emitted},
                {"elapsed_s", r.elapsed_s},
                {"per_shard", std::move(shards)}};
}

Json to_json(const AdoptionReport &r) {
    return Json{{"name", r.name},
                {"body", r.body},
                {"arity", r.arity},
                {"support", r.support},
                {"score_before", r.score_before},
                {"score_after", r.score_after}};
}

std::string to_jsonl(const std::vector<Json> &rows) {
    std::string out;
    for (const auto &row : rows) {
        out += row.dump();
        out += '\n';
    }
    return out;
}

std::vector<Json> parse_jsonl(const std::string &text, const std::string &origin) {
    std::vector<Json> rows;
    std::istringstream in(text);
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            rows.push_back(Json::parse(line));
        } catch (const Json::parse_error &e) {
            throw FormatError(origin + ":" + std::to_string(number) + ": " + e.what());
        }
    }
    return rows;
}

namespace {

template <typename F>
auto with_origin(const fs::path &path, F &&f) {
    try {
        return f();
    } catch (const FormatError &e) {
        throw FormatError(path.string() + ": " + e.what());
    } catch (const Json::exception &e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

} // namespace

void write_records(const fs::path &path, const std::vector<TaskRecord> &records,
                   bool public_view) {
    std::vector<Json> rows;
    rows.reserve(records.size());
    for (const auto &r : records) {
        rows.push_back(public_view ? to_public_json(r) : to_json(r));
    }
    write_file_atomic(path, to_jsonl(rows));
}

std::vector<TaskRecord> read_records(const fs::path &path) {
    const auto text = read_file(path);
    return with_origin(path, [&] {
        std::vector<TaskRecord> out;
        for (const auto &row : parse_jsonl(text, path.string())) {
            out.push_back(task_record_from_json(row));
        }
        return out;
    });
}

std::vector<Task> read_tasks(const fs::path &path) { return to_tasks(read_records(path)); }

void write_library(const fs::path &path, const Library &lib) {
    write_file_atomic(path, to_json(lib).dump(2) + "\n");
}

Library read_library(const fs::path &path) {
    const auto text = read_file(path);
    return with_origin(path, [&] { return library_from_json(Json::parse(text)); });
}

void write_solutions(const fs::path &path, const SolutionStore &store) {
    std::vector<Json> rows;
    rows.reserve(store.size());
    for (const auto &[id, set] : store) {
        rows.push_back(to_json(set));
    }
    write_file_atomic(path, to_jsonl(rows));
}

SolutionStore read_solutions(const fs::path &path, const Library &lib) {
    const auto text = read_file(path);
    return with_origin(path, [&] {
        SolutionStore store;
        for (const auto &row : parse_jsonl(text, path.string())) {
            auto set = solution_set_from_json(row, lib);
            auto id = set.task_id;
            store.emplace(std::move(id), std::move(set));
        }
        return store;
    });
}

Matrix read_matrix(const fs::path &path) {
    const auto text = read_file(path);
    return with_origin(path, [&] {
        const Json j = Json::parse(text);
        if (j.contains("unitary")) {
            return matrix_from_json(j.at("unitary"));
        }
        return matrix_from_json(j);
    });
}

} // namespace gatesmith
