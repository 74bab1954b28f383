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
#include <doctest.h>

#include <fstream>

#include "gatesmith/gates.hpp"
#include "gatesmith/io.hpp"
#include "helpers.hpp"
#include "tempdir.hpp"

using namespace gatesmith;
using testing::circuit;

namespace {

Library learned_library() {
    using namespace gates;
    const GatePtr f0 = Gate::composite("f0", Program::from_placements(1, {{t(), {0}}, {t(), {0}}}));
    const GatePtr f1 = Gate::composite(
        "f1", Program::from_placements(2, {{f0, {1}}, {cnot(), {0, 1}}, {f0, {0}}}));
    Library lib(elementary_set(), {0.2, 0.2, 0.1, 0.1}, 0.2, 3, std::nullopt, 2);
    return lib.with_gate(f0, 0.1).with_gate(f1, 0.1);
}

void spill(const std::filesystem::path &path, const std::string &text) {
    std::ofstream(path) << text;
}

} // namespace

TEST_SUITE("io") {

TEST_CASE("matrices round-trip exactly") {
    Matrix m(4);
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            m(r, c) = Complex(1.0 / (1.0 + r * 7 + c), -std::sqrt(static_cast<double>(r + c)) / 3.0);
        }
    }
    const Matrix back = matrix_from_json(Json::parse(to_json(m).dump()));
    CHECK(frobenius_distance(m, back) == 0.0);
}

TEST_CASE("malformed matrices") {
    CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"dim": 2, "entries": [[1,0]]})")),
                    FormatError);
    CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"dim": 1, "entries": [[1,0,3]]})")),
                    FormatError);
    CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"entries": []})")), FormatError);
}

TEST_CASE("libraries round-trip") {
    const Library lib = learned_library();
    const Library back = library_from_json(Json::parse(to_json(lib).dump()));
    REQUIRE(back.size() == lib.size());
    CHECK(back.version() == 3);
    CHECK(back.base_size() == 4);
    CHECK(back.next_fragment_index() == lib.next_fragment_index());
    CHECK(back.end_weight() == lib.end_weight());
    for (std::size_t i = 0; i < lib.size(); ++i) {
        CHECK(back.gate(i)->name() == lib.gate(i)->name());
        CHECK(back.gate(i)->arity() == lib.gate(i)->arity());
        CHECK(back.weight(i) == lib.weight(i));
        CHECK(frobenius_distance(back.gate(i)->matrix(), lib.gate(i)->matrix()) <= 1e-12);
    }
    // Elementary gates come back as the shared standard instances.
    CHECK(back.gate(0) == gates::h());
    CHECK(back.gate(5)->body()->to_string() == lib.gate(5)->body()->to_string());
}

TEST_CASE("libraries with dangling references are rejected") {
    Json j = to_json(learned_library());
    // Drop f0 so that f1's body names an unknown gate.
    auto &gates = j.at("gates");
    for (auto it = gates.begin(); it != gates.end(); ++it) {
        if ((*it).at("name") == "f0") {
            gates.erase(it);
            break;
        }
    }
    CHECK_THROWS_AS(library_from_json(j), FormatError);
}

TEST_CASE("task records round-trip") {
    using namespace gates;
    TaskRecord r;
    r.id = "q2-task-000007";
    r.n_qubits = 2;
    r.source_circuit = circuit(2, {{cz(), {0, 1}}, {sx(), {1}}});
    r.unitary = eval_unitary(r.source_circuit);
    r.gate_count = 2;
    r.split = Split::Train;
    const TaskRecord back = task_record_from_json(Json::parse(to_json(r).dump()));
    CHECK(back.id == r.id);
    CHECK(back.gate_count == 2);
    CHECK(back.split == Split::Train);
    CHECK(same_circuit(back.source_circuit, r.source_circuit));
    CHECK(frobenius_distance(back.unitary, r.unitary) == 0.0);

    const Json pub = to_public_json(r);
    CHECK(pub.size() == 3);
    CHECK(pub.contains("id"));
    CHECK(pub.contains("n_qubits"));
    CHECK(pub.contains("unitary"));

    Json bad = to_json(r);
    bad["n_qubits"] = 3;
    CHECK_THROWS_AS(task_record_from_json(bad), FormatError);
}

TEST_CASE("solutions round-trip against a learned library") {
    const testing::TempDir dir;
    const Library lib = learned_library();
    const GatePtr f1 = lib.find("f1");
    SolutionStore store;
    store["a"] = SolutionSet{"a", {{circuit(3, {{f1, {2, 0}}, {gates::h(), {1}}}), -4.25}}};
    store["b"] = SolutionSet{"b", {}};
    write_solutions(dir / "s.jsonl", store);
    const auto back = read_solutions(dir / "s.jsonl", lib);
    REQUIRE(back.size() == 2);
    REQUIRE(back.at("a").circuits.size() == 1);
    CHECK(back.at("a").circuits[0].circuit.placements[0].gate == f1);
    CHECK(back.at("a").circuits[0].log_prob == -4.25);
    CHECK(back.at("b").circuits.empty());
    // Without the learned gates the file cannot be interpreted.
    CHECK_THROWS_AS(read_solutions(dir / "s.jsonl", Library::uniform(gates::elementary_set())),
                    FormatError);
}

TEST_CASE("files") {
    const testing::TempDir dir;
    SUBCASE("missing file") {
        CHECK_THROWS_AS(read_file(dir / "nope.json"), IoError);
        CHECK_THROWS_AS(read_library(dir / "nope.json"), IoError);
    }
    SUBCASE("atomic writes leave no temporary behind") {
        write_library(dir / "sub" / "lib.json", learned_library());
        write_library(dir / "sub" / "lib.json", learned_library());
        int files = 0;
        for (const auto &e : std::filesystem::directory_iterator(dir / "sub")) {
            CHECK(e.path().filename() == "lib.json");
            ++files;
        }
        CHECK(files == 1);
        CHECK(read_library(dir / "sub" / "lib.json").size() == 6);
    }
    SUBCASE("broken json lines name the line") {
        spill(dir / "t.jsonl", "{\"id\": \"a\", \"n_qubits\": 1, \"unitary\": {\"dim\": 2, "
                               "\"entries\": [[1,0],[0,0],[0,0],[1,0]]}}\n{oops\n");
        try {
            read_tasks(dir / "t.jsonl");
            FAIL("expected a format error");
        } catch (const FormatError &e) {
            CHECK(std::string(e.what()).find(":2:") != std::string::npos);
        }
    }
    SUBCASE("blank lines are ignored") {
        spill(dir / "t.jsonl", "\n{\"id\": \"a\", \"n_qubits\": 1, \"unitary\": {\"dim\": 2, "
                               "\"entries\": [[1,0],[0,0],[0,0],[1,0]]}}\n\n");
        CHECK(read_tasks(dir / "t.jsonl").size() == 1);
    }
    SUBCASE("bare or wrapped matrices") {
        spill(dir / "m.json", R"({"dim": 2, "entries": [[0,0],[1,0],[1,0],[0,0]]})");
        spill(dir / "w.json",
              R"({"unitary": {"dim": 2, "entries": [[0,0],[1,0],[1,0],[0,0]]}, "id": "x"})");
        CHECK(frobenius_distance(read_matrix(dir / "m.json"), read_matrix(dir / "w.json")) == 0.0);
        spill(dir / "bad.json", "[1, 2");
        CHECK_THROWS_AS(read_matrix(dir / "bad.json"), FormatError);
    }
}

} // TEST_SUITE
