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
// Command-line front end: dataset generation, training, evaluation and
// one-off synthesis.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "gatesmith/gates.hpp"
#include "gatesmith/io.hpp"
#include "gatesmith/taskgen.hpp"
#include "gatesmith/trainer.hpp"

namespace fs = std::filesystem;
using namespace gatesmith;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

// Thrown for bad option values or config files.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Json load_config(const std::string &path) {
    if (path.empty()) {
        return Json::object();
    }
    std::string text;
    try {
        text = read_file(path);
    } catch (const IoError &e) {
        throw ConfigError(e.what());
    }
    try {
        Json j = Json::parse(text);
        if (!j.is_object()) {
            throw ConfigError(path + ": config must be a JSON object");
        }
        return j;
    } catch (const Json::parse_error &e) {
        throw ConfigError(path + ": " + e.what());
    }
}

Library library_or_default(const std::string &path) {
    return path.empty() ? Library::uniform(gates::elementary_set()) : read_library(path);
}

Connectivity parse_constraint(const std::string &text) {
    try {
        return Connectivity::parse(text);
    } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
    }
}

// Options shared by the search-driven subcommands.
struct SearchOptions {
    std::uint64_t max_nodes = 0;
    double timeout_s = 150.0;
    int k = 2;
    int workers = 1;
    int max_placements = 12;
    std::string constraint = "full";

    void add_to(CLI::App *app) {
        app->add_option("--max-nodes", max_nodes, "Visited-node budget (0: unbounded)");
        app->add_option("--timeout", timeout_s, "Wall-clock budget in seconds (0: none)");
        app->add_option("--k", k, "Solutions kept per task");
        app->add_option("--workers", workers, "Search threads");
        app->add_option("--max-placements", max_placements, "Depth cap");
        app->add_option("--constraint", constraint, "full | nearest | edges:0-1,1-2,...");
    }

    EnumConfig enum_config() const {
        EnumConfig e;
        e.max_nodes = max_nodes;
        e.timeout_s = timeout_s;
        e.k = k;
        e.workers = workers;
        e.max_placements = max_placements;
        try {
            e.check();
        } catch (const std::invalid_argument &err) {
            throw ConfigError(err.what());
        }
        return e;
    }
};

int run_gen_tasks(const std::string &config_path, const std::vector<int> &qubits_flag,
                  std::optional<std::uint64_t> nodes_flag, std::optional<std::size_t> n_train_flag,
                  std::optional<std::uint64_t> seed_flag, std::optional<int> depth_flag,
                  const std::string &out_dir) {
    const Json cfg = load_config(config_path);
    std::vector<int> qubits = qubits_flag;
    if (qubits.empty()) {
        qubits = cfg.contains("n_qubits") && cfg.at("n_qubits").is_array()
                     ? cfg.at("n_qubits").get<std::vector<int>>()
                     : std::vector<int>{cfg.value("n_qubits", 3)};
    }
    EnumConfig budget;
    budget.max_nodes = nodes_flag.value_or(cfg.value("pool_max_nodes", std::uint64_t{200000}));
    budget.max_placements = depth_flag.value_or(cfg.value("max_placements", 12));
    budget.timeout_s = 0.0;
    const auto n_train = n_train_flag.value_or(cfg.value("n_train", std::size_t{200}));
    const auto seed = seed_flag.value_or(cfg.value("seed", std::uint64_t{0}));

    std::vector<TaskRecord> pool;
    for (int n : qubits) {
        if (n < 1 || n > 8) {
            throw ConfigError("n_qubits must be between 1 and 8");
        }
        for (auto &r : generate_pool(gates::task_set(), n, budget)) {
            r.id = "q" + std::to_string(n) + "-" + r.id;
            pool.push_back(std::move(r));
        }
    }
    PoolSplit split;
    try {
        split = split_pool(pool, n_train, seed);
    } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
    }
    std::vector<TaskRecord> labelled = split.train;
    labelled.insert(labelled.end(), split.test.begin(), split.test.end());
    const fs::path dir(out_dir);
    write_records(dir / "pool.jsonl", labelled, false);
    write_records(dir / "train.jsonl", split.train, true);
    write_records(dir / "test.jsonl", split.test, true);
    std::printf("pool %zu tasks: %zu train, %zu test -> %s\n", pool.size(), split.train.size(),
                split.test.size(), dir.string().c_str());
    return 0;
}

void print_library(const Library &lib) {
    std::printf("library version %d, %zu gates, theta_end %.6f\n", lib.version(), lib.size(),
                lib.end_weight());
    for (std::size_t i = 0; i < lib.size(); ++i) {
        const auto &g = lib.gate(i);
        std::printf("\n%s  arity %d  theta %.6f\n", g->name().c_str(), g->arity(), lib.weight(i));
        if (g->is_elementary()) {
            std::printf("  elementary\n");
            continue;
        }
        std::printf("  program:   %s\n", g->body()->to_string().c_str());
        Circuit expanded{g->arity(), g->expansion()};
        std::printf("  expansion: %s\n", to_compact_string(expanded).c_str());
        std::istringstream diagram(render_text(expanded));
        for (std::string line; std::getline(diagram, line);) {
            std::printf("    %s\n", line.c_str());
        }
    }
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Library-learning synthesis of quantum circuits"};
    app.require_subcommand(1);
    std::string config_path;

    // gen-tasks
    auto *gen = app.add_subcommand("gen-tasks", "Enumerate a task pool and split it");
    std::vector<int> gen_qubits;
    std::uint64_t gen_nodes = 0;
    std::size_t gen_train = 0;
    std::uint64_t gen_seed = 0;
    int gen_depth = 0;
    std::string gen_out = "data";
    gen->add_option("--config", config_path, "JSON config file");
    auto *o_gq = gen->add_option("--n-qubits", gen_qubits, "Qubit counts, e.g. 2 3")->delimiter(',');
    auto *o_gn = gen->add_option("--pool-max-nodes", gen_nodes, "Enumeration node budget per qubit count");
    auto *o_gt = gen->add_option("--n-train", gen_train, "Training tasks to draw");
    auto *o_gs = gen->add_option("--seed", gen_seed, "Split seed");
    auto *o_gd = gen->add_option("--max-placements", gen_depth, "Depth cap");
    gen->add_option("--out-dir", gen_out, "Output directory");

    // train
    auto *train = app.add_subcommand("train", "Run the training loop");
    TrainConfig tc;
    train->add_option("--config", config_path, "JSON config file");
    auto *o_tr = train->add_option("--train", tc.train_path, "Training tasks (JSONL)");
    auto *o_te = train->add_option("--test", tc.test_path, "Test tasks (JSONL)");
    auto *o_rd = train->add_option("--run-dir", tc.run_dir, "Checkpoint directory");
    auto *o_il = train->add_option("--initial-library", tc.initial_library, "Starting library");
    auto *o_it = train->add_option("--iterations", tc.iterations, "Training iterations");
    auto *o_bs = train->add_option("--batch-size", tc.batch_size, "Tasks per batch");
    auto *o_k = train->add_option("--k", tc.k, "Solutions kept per task");
    auto *o_sd = train->add_option("--seed", tc.seed, "Batch sampling seed");
    auto *o_mn = train->add_option("--max-nodes", tc.max_nodes, "Node budget per search");
    auto *o_to = train->add_option("--timeout", tc.timeout_s, "Seconds per search (0: none)");
    auto *o_mp = train->add_option("--max-placements", tc.max_placements, "Depth cap");
    auto *o_wk = train->add_option("--workers", tc.workers, "Search threads");
    auto *o_cs = train->add_option("--constraint", tc.constraint, "full | nearest | edges:...");
    auto *o_ls = train->add_option("--lambda-struct", tc.learn.model.lambda_struct, "Nats per learned leaf");
    auto *o_al = train->add_option("--alpha", tc.learn.model.alpha, "Dirichlet concentration (> 1)");
    auto *o_fs = train->add_option("--max-fragment-size", tc.learn.max_fragment_size, "Longest fragment");
    auto *o_dt = train->add_flag("--deterministic", tc.deterministic, "Write elapsed_s as 0");
    auto *o_rs = train->add_flag("--resume", tc.resume, "Continue from the newest checkpoint");

    // eval
    auto *eval = app.add_subcommand("eval", "Solved fraction of a task file under a library");
    std::string eval_lib;
    std::string eval_tasks;
    std::string eval_out;
    SearchOptions eval_opts;
    eval->add_option("--library", eval_lib, "Library JSON (default: elementary set)");
    eval->add_option("--tasks", eval_tasks, "Task file (JSONL)")->required();
    eval->add_option("--out", eval_out, "Write the per-task report here");
    eval_opts.add_to(eval);

    // show-library
    auto *show = app.add_subcommand("show-library", "Print gates, programs and diagrams");
    std::string show_lib;
    show->add_option("library", show_lib, "Library JSON (default: elementary set)");

    // solve
    auto *solve = app.add_subcommand("solve", "Find a circuit for one unitary");
    std::string solve_file;
    std::string solve_lib;
    SearchOptions solve_opts;
    solve_opts.max_nodes = 2000000;
    solve_opts.timeout_s = 60.0;
    solve_opts.k = 1;
    solve->add_option("unitary-file", solve_file, "Matrix JSON {dim, entries}")->required();
    solve->add_option("--library", solve_lib, "Library JSON (default: elementary set)");
    solve_opts.add_to(solve);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (gen->parsed()) {
            auto opt = [](CLI::Option *o, auto v) {
                return o->count() ? std::optional(v) : std::nullopt;
            };
            return run_gen_tasks(config_path, o_gq->count() ? gen_qubits : std::vector<int>{},
                                 opt(o_gn, gen_nodes), opt(o_gt, gen_train),
                                 opt(o_gs, gen_seed), opt(o_gd, gen_depth), gen_out);
        }
        if (train->parsed()) {
            // Config file first, then explicit flags on top.
            TrainConfig flags = tc;
            tc = TrainConfig{};
            try {
                merge_from_json(tc, load_config(config_path));
            } catch (const std::invalid_argument &e) {
                throw ConfigError(e.what());
            }
            auto take = [](CLI::Option *o, auto &dst, const auto &src) {
                if (o->count()) {
                    dst = src;
                }
            };
            take(o_tr, tc.train_path, flags.train_path);
            take(o_te, tc.test_path, flags.test_path);
            take(o_rd, tc.run_dir, flags.run_dir);
            take(o_il, tc.initial_library, flags.initial_library);
            take(o_it, tc.iterations, flags.iterations);
            take(o_bs, tc.batch_size, flags.batch_size);
            take(o_k, tc.k, flags.k);
            take(o_sd, tc.seed, flags.seed);
            take(o_mn, tc.max_nodes, flags.max_nodes);
            take(o_to, tc.timeout_s, flags.timeout_s);
            take(o_mp, tc.max_placements, flags.max_placements);
            take(o_wk, tc.workers, flags.workers);
            take(o_cs, tc.constraint, flags.constraint);
            take(o_ls, tc.learn.model.lambda_struct, flags.learn.model.lambda_struct);
            take(o_al, tc.learn.model.alpha, flags.learn.model.alpha);
            take(o_fs, tc.learn.max_fragment_size, flags.learn.max_fragment_size);
            take(o_dt, tc.deterministic, flags.deterministic);
            take(o_rs, tc.resume, flags.resume);
            if (tc.train_path.empty()) {
                throw ConfigError("train: no training task file given (--train)");
            }
            try {
                tc.check();
            } catch (const std::invalid_argument &e) {
                throw ConfigError(e.what());
            }
            const auto result = run_training(tc, [](const std::string &line) {
                std::fprintf(stderr, "%s\n", line.c_str());
            });
            std::printf("final library: %zu gates (version %d); metrics in %s\n",
                        result.library.size(), result.library.version(),
                        (tc.run_dir / "metrics.csv").string().c_str());
            return 0;
        }
        if (eval->parsed()) {
            const auto cfg = eval_opts.enum_config();
            const auto constraint = parse_constraint(eval_opts.constraint);
            const Library lib = library_or_default(eval_lib);
            const auto tasks = read_tasks(eval_tasks);
            const auto result = evaluate(lib, tasks, constraint, cfg);
            std::printf("solved %.6f of %zu tasks (visited %llu nodes)\n", result.solved_fraction,
                        tasks.size(), static_cast<unsigned long long>(result.report.visited));
            if (!eval_out.empty()) {
                write_file_atomic(eval_out, to_json(result).dump(2) + "\n");
            }
            return 0;
        }
        if (show->parsed()) {
            print_library(library_or_default(show_lib));
            return 0;
        }
        if (solve->parsed()) {
            auto cfg = solve_opts.enum_config();
            const auto constraint = parse_constraint(solve_opts.constraint);
            const Library lib = library_or_default(solve_lib);
            const Matrix u = read_matrix(solve_file);
            if (!u.is_unitary()) {
                throw ConfigError(solve_file + ": matrix is not unitary");
            }
            const std::vector<Task> tasks{Task{"target", u}};
            cfg.stop_when_solved = true;
            const auto result = evaluate(lib, tasks, constraint, cfg);
            const auto &report = result.tasks.front();
            if (!report.best) {
                std::printf("no circuit found within the budget (visited %llu nodes)\n",
                            static_cast<unsigned long long>(result.report.visited));
                return 1;
            }
            const Circuit &c = report.best->circuit;
            std::printf("%s\nlog_prob %.6f\n%s", to_compact_string(c).c_str(),
                        report.best->log_prob, render_text(c).c_str());
            if (c.size() != expand(c).size()) {
                std::printf("expanded: %s\n", to_compact_string(expand(c)).c_str());
            }
            return 0;
        }
    } catch (const ConfigError &e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const IoError &e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return kExitIo;
    } catch (const FormatError &e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return kExitIo;
    } catch (const std::invalid_argument &e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
