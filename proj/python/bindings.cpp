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
#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "gatesmith/gates.hpp"
#include "gatesmith/io.hpp"
#include "gatesmith/taskgen.hpp"
#include "gatesmith/trainer.hpp"

namespace py = pybind11;
using namespace gatesmith;

namespace {

using ComplexArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;
// A placement as seen from Python: (gate name, qubits).
using PyPlacement = std::pair<std::string, std::vector<int>>;

ComplexArray to_numpy(const Matrix &m) {
    const auto d = static_cast<py::ssize_t>(m.dim());
    ComplexArray out({d, d});
    std::copy(m.entries().begin(), m.entries().end(), out.mutable_data());
    return out;
}

Matrix from_numpy(const ComplexArray &a) {
    if (a.ndim() != 2 || a.shape(0) != a.shape(1)) {
        throw std::invalid_argument("expected a square matrix");
    }
    const auto d = static_cast<std::size_t>(a.shape(0));
    return Matrix(d, std::vector<Complex>(a.data(), a.data() + d * d));
}

Circuit to_circuit(int n_qubits, const std::vector<PyPlacement> &placements, const Library &lib) {
    Circuit c;
    c.n_qubits = n_qubits;
    for (const auto &[name, qubits] : placements) {
        GatePtr g = lib.find(name);
        if (!g) {
            g = gates::by_name(name);
        }
        if (!g) {
            throw std::invalid_argument("unknown gate \"" + name + "\"");
        }
        c.placements.push_back({g, qubits});
    }
    return c;
}

std::vector<PyPlacement> from_circuit(const Circuit &c) {
    std::vector<PyPlacement> out;
    for (const auto &p : c.placements) {
        out.emplace_back(p.gate->name(), p.qubits);
    }
    return out;
}

py::list scored(const std::vector<ScoredCircuit> &circuits) {
    py::list out;
    for (const auto &s : circuits) {
        out.append(py::make_tuple(from_circuit(s.circuit), s.log_prob));
    }
    return out;
}

EnumConfig search_config(std::uint64_t max_nodes, double timeout_s, int max_placements, int k,
                         int workers) {
    EnumConfig cfg;
    cfg.max_nodes = max_nodes;
    cfg.timeout_s = timeout_s;
    cfg.max_placements = max_placements;
    cfg.k = k;
    cfg.workers = workers;
    cfg.check();
    return cfg;
}

py::dict metrics_dict(const MetricsRow &r) {
    py::dict d;
    d["iteration"] = r.iteration;
    d["seen_train_solved_frac"] = r.seen_train_solved_frac;
    d["train_solved_frac"] = r.train_solved_frac;
    d["test_solved_frac"] = r.test_solved_frac;
    d["library_size"] = r.library_size;
    d["mean_task_log_likelihood"] = r.mean_task_log_likelihood;
    d["new_gates_this_iter"] = r.new_gates_this_iter;
    d["elapsed_s"] = r.elapsed_s;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Gate-library learning for quantum circuit synthesis";

    py::register_exception<IoError>(m, "IoError", PyExc_OSError);
    py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    py::class_<Library>(m, "Library")
        .def_static("elementary", [] { return Library::uniform(gates::elementary_set()); },
                    "Uniform weights over h, t, tdg and cnot.")
        .def_static("load", &read_library, py::arg("path"))
        .def_static("from_json", [](const std::string &text) {
            return library_from_json(Json::parse(text));
        })
        .def("save", [](const Library &lib, const std::filesystem::path &p) { write_library(p, lib); },
             py::arg("path"))
        .def("to_json", [](const Library &lib) { return to_json(lib).dump(); })
        .def("__len__", &Library::size)
        .def_property_readonly("gate_names",
                               [](const Library &lib) {
                                   std::vector<std::string> names;
                                   for (const auto &g : lib.gates()) {
                                       names.push_back(g->name());
                                   }
                                   return names;
                               })
        .def_property_readonly("weights",
                               [](const Library &lib) {
                                   return std::vector<double>(lib.weights().begin(),
                                                              lib.weights().end());
                               })
        .def_property_readonly("end_weight", &Library::end_weight)
        .def_property_readonly("version", &Library::version)
        .def_property_readonly("base_size", &Library::base_size)
        .def("gate_matrix",
             [](const Library &lib, const std::string &name) {
                 const GatePtr g = lib.find(name);
                 if (!g) {
                     throw py::key_error(name);
                 }
                 return to_numpy(g->matrix());
             })
        .def("gate_program", [](const Library &lib, const std::string &name) {
            const GatePtr g = lib.find(name);
            if (!g) {
                throw py::key_error(name);
            }
            return g->body() ? g->body()->to_string() : g->name();
        });

    m.def("unitary",
          [](const std::vector<PyPlacement> &placements, int n_qubits,
             std::optional<Library> lib) {
              const Library l = lib.value_or(Library::uniform(gates::elementary_set()));
              return to_numpy(eval_unitary(to_circuit(n_qubits, placements, l)));
          },
          py::arg("placements"), py::arg("n_qubits"), py::arg("library") = py::none(),
          "Unitary of a circuit given as [(gate, qubits), ...].");

    m.def("log_prob",
          [](const std::vector<PyPlacement> &placements, int n_qubits, const Library &lib,
             const std::string &constraint) {
              return circuit_log_prob(to_circuit(n_qubits, placements, lib), lib,
                                      Connectivity::parse(constraint));
          },
          py::arg("placements"), py::arg("n_qubits"), py::arg("library"),
          py::arg("constraint") = "full");

    m.def("phase_distance",
          [](const ComplexArray &a, const ComplexArray &b) {
              return phase_aligned_distance(from_numpy(a), from_numpy(b));
          });
    m.def("equal_up_to_phase",
          [](const ComplexArray &a, const ComplexArray &b, double tol) {
              return equal_up_to_phase(from_numpy(a), from_numpy(b), tol);
          },
          py::arg("a"), py::arg("b"), py::arg("tol") = kEqualityTolerance);

    m.def("enumerate_circuits",
          [](const Library &lib, int n_qubits, std::uint64_t max_nodes, int max_placements,
             const std::string &constraint) {
              const auto cfg = search_config(max_nodes, 0.0, max_placements, 1, 1);
              std::vector<ScoredCircuit> out;
              {
                  py::gil_scoped_release release;
                  enumerate(lib, n_qubits, Connectivity::parse(constraint), cfg,
                            [&](const ScoredCircuit &s) { out.push_back(s); });
              }
              return scored(out);
          },
          py::arg("library"), py::arg("n_qubits"), py::arg("max_nodes") = 1000,
          py::arg("max_placements") = 12, py::arg("constraint") = "full",
          "Distinct-unitary circuits in non-increasing probability order.");

    m.def("synthesize",
          [](const ComplexArray &target, std::optional<Library> lib, int k,
             std::uint64_t max_nodes, double timeout_s, int max_placements, int workers,
             const std::string &constraint) {
              const Library l = lib.value_or(Library::uniform(gates::elementary_set()));
              const auto cfg = search_config(max_nodes, timeout_s, max_placements, k, workers);
              const std::vector<Task> tasks{{"target", from_numpy(target)}};
              SynthesisResult r;
              {
                  py::gil_scoped_release release;
                  r = synthesize_batch(tasks, l, Connectivity::parse(constraint), cfg);
              }
              return scored(r.solutions.at("target").circuits);
          },
          py::arg("target"), py::arg("library") = py::none(), py::arg("k") = 2,
          py::arg("max_nodes") = 1000000, py::arg("timeout_s") = 0.0,
          py::arg("max_placements") = 12, py::arg("workers") = 1, py::arg("constraint") = "full",
          "Up to k most probable circuits for the target, best first.");

    m.def("learn_step",
          [](const Library &lib,
             const std::map<std::string, std::vector<std::pair<int, std::vector<PyPlacement>>>>
                 &solutions,
             const std::string &constraint) {
              const auto conn = Connectivity::parse(constraint);
              SolutionStore store;
              for (const auto &[id, circuits] : solutions) {
                  auto &set = store[id];
                  set.task_id = id;
                  for (const auto &[n, placements] : circuits) {
                      Circuit c = to_circuit(n, placements, lib);
                      set.circuits.push_back({c, circuit_log_prob(c, lib, conn)});
                  }
              }
              LearnResult r;
              {
                  py::gil_scoped_release release;
                  r = learn_step(lib, store, conn);
              }
              py::list adopted;
              for (const auto &a : r.adopted) {
                  py::dict d;
                  d["name"] = a.name;
                  d["body"] = a.body;
                  d["arity"] = a.arity;
                  d["support"] = a.support;
                  d["score_before"] = a.score_before;
                  d["score_after"] = a.score_after;
                  adopted.append(d);
              }
              return py::make_tuple(r.library, adopted);
          },
          py::arg("library"), py::arg("solutions"), py::arg("constraint") = "full",
          "Grow the library from {task_id: [(n_qubits, placements), ...]}.");

    m.def("generate_pool",
          [](int n_qubits, std::uint64_t max_nodes, int max_placements) {
              EnumConfig cfg;
              cfg.max_nodes = max_nodes;
              cfg.max_placements = max_placements;
              std::vector<TaskRecord> pool;
              {
                  py::gil_scoped_release release;
                  pool = generate_pool(gates::task_set(), n_qubits, cfg);
              }
              py::list out;
              for (const auto &r : pool) {
                  py::dict d;
                  d["id"] = r.id;
                  d["n_qubits"] = r.n_qubits;
                  d["unitary"] = to_numpy(r.unitary);
                  d["gate_count"] = r.gate_count;
                  d["source"] = from_circuit(r.source_circuit);
                  out.append(d);
              }
              return out;
          },
          py::arg("n_qubits"), py::arg("max_nodes") = 20000, py::arg("max_placements") = 6,
          "Distinct unitaries of the task gate set, shortest generator kept.");

    m.def("train",
          [](const std::string &config_json) {
              TrainConfig cfg;
              merge_from_json(cfg, Json::parse(config_json));
              TrainResult r;
              {
                  py::gil_scoped_release release;
                  r = run_training(cfg);
              }
              py::list rows;
              for (const auto &row : r.metrics) {
                  rows.append(metrics_dict(row));
              }
              return py::make_tuple(r.library, rows);
          },
          py::arg("config_json"), "Run the training loop; returns (library, metrics rows).");

    m.def("solved_fraction",
          [](const Library &lib, const std::vector<ComplexArray> &targets,
             std::uint64_t max_nodes, int max_placements, const std::string &constraint) {
              std::vector<Task> tasks;
              for (std::size_t i = 0; i < targets.size(); ++i) {
                  tasks.push_back({"t" + std::to_string(i), from_numpy(targets[i])});
              }
              auto cfg = search_config(max_nodes, 0.0, max_placements, 1, 1);
              cfg.stop_when_solved = true;
              py::gil_scoped_release release;
              return evaluate(lib, tasks, Connectivity::parse(constraint), cfg).solved_fraction;
          },
          py::arg("library"), py::arg("targets"), py::arg("max_nodes") = 500000,
          py::arg("max_placements") = 12, py::arg("constraint") = "full");

    m.attr("METRICS_HEADER") = kMetricsHeader;
}
