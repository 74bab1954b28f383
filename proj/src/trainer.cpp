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
#include "gatesmith/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "gatesmith/gates.hpp"
#include "gatesmith/random.hpp"

namespace gatesmith {

namespace fs = std::filesystem;

void TrainConfig::check() const {
    if (iterations < 0) {
        throw std::invalid_argument("iterations must be >= 0");
    }
    if (batch_size < 1 || k < 1 || n_qubits < 1 || workers < 1) {
        throw std::invalid_argument("batch_size, k, n_qubits and workers must be positive");
    }
    if (timeout_s < 0.0) {
        throw std::invalid_argument("timeout must be >= 0");
    }
    if (max_placements < 0) {
        throw std::invalid_argument("max_placements must be >= 0");
    }
    if (!(learn.model.alpha > 1.0)) {
        throw std::invalid_argument("alpha must be > 1");
    }
    if (learn.model.lambda_struct < 0.0) {
        throw std::invalid_argument("lambda_struct must be >= 0");
    }
    if (learn.max_fragment_size < 2 || learn.min_support < 1) {
        throw std::invalid_argument("max_fragment_size must be >= 2 and min_support >= 1");
    }
    Connectivity::parse(constraint);
}

EnumConfig TrainConfig::enum_config() const {
    EnumConfig e;
    e.max_nodes = max_nodes;
    e.timeout_s = timeout_s;
    e.k = k;
    e.max_placements = max_placements;
    e.workers = workers;
    e.stop_when_solved = false;
    return e;
}

Json to_json(const TrainConfig &cfg) {
    return Json{{"train", cfg.train_path.string()},
                {"test", cfg.test_path.string()},
                {"run_dir", cfg.run_dir.string()},
                {"initial_library", cfg.initial_library.string()},
                {"iterations", cfg.iterations},
                {"batch_size", cfg.batch_size},
                {"k", cfg.k},
                {"n_qubits", cfg.n_qubits},
                {"constraint", cfg.constraint},
                {"seed", cfg.seed},
                {"max_nodes", cfg.max_nodes},
                {"timeout_s", cfg.timeout_s},
                {"max_placements", cfg.max_placements},
                {"workers", cfg.workers},
                {"lambda_struct", cfg.learn.model.lambda_struct},
                {"alpha", cfg.learn.model.alpha},
                {"max_fragment_size", cfg.learn.max_fragment_size},
                {"min_support", cfg.learn.min_support},
                {"max_candidates", cfg.learn.max_candidates},
                {"deterministic", cfg.deterministic}};
}

void merge_from_json(TrainConfig &cfg, const Json &j) {
    if (!j.is_object()) {
        throw std::invalid_argument("config must be a JSON object");
    }
    static const std::set<std::string> known = {
        "train",     "test",          "run_dir",       "initial_library", "iterations",
        "batch_size", "k",            "n_qubits",      "constraint",      "seed",
        "max_nodes", "timeout_s",     "max_placements", "workers",        "lambda_struct",
        "alpha",     "max_fragment_size", "min_support", "max_candidates", "deterministic",
        "resume",    "pool_max_nodes", "n_train",      "pool",            "eval_max_nodes"};
    for (const auto &[key, value] : j.items()) {
        if (!known.count(key)) {
            throw std::invalid_argument("unknown config key \"" + key + "\"");
        }
    }
    try {
        auto path = [&](const char *key, fs::path &out) {
            if (j.contains(key)) {
                out = j.at(key).get<std::string>();
            }
        };
        auto get = [&](const char *key, auto &out) {
            if (j.contains(key)) {
                out = j.at(key).get<std::decay_t<decltype(out)>>();
            }
        };
        path("train", cfg.train_path);
        path("test", cfg.test_path);
        path("run_dir", cfg.run_dir);
        path("initial_library", cfg.initial_library);
        get("iterations", cfg.iterations);
        get("batch_size", cfg.batch_size);
        get("k", cfg.k);
        get("n_qubits", cfg.n_qubits);
        get("constraint", cfg.constraint);
        get("seed", cfg.seed);
        get("max_nodes", cfg.max_nodes);
        get("timeout_s", cfg.timeout_s);
        get("max_placements", cfg.max_placements);
        get("workers", cfg.workers);
        get("lambda_struct", cfg.learn.model.lambda_struct);
        get("alpha", cfg.learn.model.alpha);
        get("max_fragment_size", cfg.learn.max_fragment_size);
        get("min_support", cfg.learn.min_support);
        get("max_candidates", cfg.learn.max_candidates);
        get("deterministic", cfg.deterministic);
        get("resume", cfg.resume);
    } catch (const Json::exception &e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
}

std::string format_metrics_row(const MetricsRow &row) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%d,%.6f,%.6f,%.6f,%zu,%.6f,%zu,%.3f", row.iteration,
                  row.seen_train_solved_frac, row.train_solved_frac, row.test_solved_frac,
                  row.library_size, row.mean_task_log_likelihood, row.new_gates_this_iter,
                  row.elapsed_s);
    return buf;
}

namespace {

using Clock = std::chrono::steady_clock;

std::string numbered(const char *stem, int iteration, const char *ext) {
    return std::string(stem) + "_" + std::to_string(iteration) + ext;
}

std::map<int, std::vector<std::size_t>> group_by_qubits(std::span<const Task> tasks) {
    std::map<int, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        groups[tasks[i].unitary.n_qubits()].push_back(i);
    }
    return groups;
}

struct IterationHits {
    std::vector<char> solved;                      // per task
    std::vector<std::vector<ScoredCircuit>> kept;  // per task, only where wanted
    EnumReport report;
};

// One search per qubit count. Every task gets a solved flag; tasks with
// want[i] also keep their first k hits.
IterationHits search_tasks(std::span<const Task> tasks, const std::vector<char> &want,
                           const Library &lib, const Connectivity &constraint,
                           const EnumConfig &cfg) {
    IterationHits out;
    out.solved.assign(tasks.size(), 0);
    out.kept.resize(tasks.size());
    const auto k = static_cast<std::size_t>(cfg.k);
    for (const auto &[n_qubits, members] : group_by_qubits(tasks)) {
        std::vector<Task> group;
        for (std::size_t i : members) {
            group.push_back(tasks[i]);
        }
        const SearchSpace space(lib, n_qubits, constraint);
        const TaskMatcher matcher(group, cfg.tolerance, cfg.key_quantum);
        struct ShardHits {
            std::vector<char> solved;
            std::vector<std::vector<ScoredCircuit>> kept;
        };
        std::vector<ShardHits> shards(static_cast<std::size_t>(cfg.workers));
        std::size_t wanted = 0;
        for (std::size_t i : members) {
            wanted += want[i] ? 1 : 0;
        }
        const auto report = search(space, cfg, [&](const ShardDescriptor &d) -> Visitor {
            auto &sh = shards[static_cast<std::size_t>(d.index)];
            sh.solved.assign(group.size(), 0);
            sh.kept.resize(group.size());
            return [&sh, &matcher, &members, &want, &cfg, k, wanted, full = std::size_t{0},
                    found = std::vector<std::size_t>{}](const Visit &v) mutable {
                matcher.match(v, found);
                for (std::size_t g : found) {
                    sh.solved[g] = 1;
                    if (want[members[g]] && sh.kept[g].size() < k) {
                        sh.kept[g].push_back(ScoredCircuit{v.circuit(), v.log_prob});
                        if (sh.kept[g].size() == k) {
                            ++full;
                        }
                    }
                }
                return !(cfg.stop_when_solved && full == wanted);
            };
        });
        out.report.visited += report.visited;
        out.report.pruned += report.pruned;
        out.report.emitted += report.emitted;
        out.report.elapsed_s += report.elapsed_s;
        out.report.per_shard.insert(out.report.per_shard.end(), report.per_shard.begin(),
                                    report.per_shard.end());
        for (std::size_t g = 0; g < group.size(); ++g) {
            for (auto &sh : shards) {
                out.solved[members[g]] |= sh.solved[g];
                for (auto &c : sh.kept[g]) {
                    out.kept[members[g]].push_back(std::move(c));
                }
            }
        }
    }
    return out;
}

// Drops stored circuits that no longer implement their task.
std::size_t revalidate(SolutionStore &store, const std::map<std::string, const Task *> &by_id,
                       const Library &lib, const Connectivity &constraint, int k) {
    std::size_t dropped = 0;
    for (auto &[id, set] : store) {
        const auto it = by_id.find(id);
        std::vector<ScoredCircuit> kept;
        for (auto &sc : set.circuits) {
            const bool ok = it != by_id.end() && validate(sc.circuit, constraint) &&
                            std::all_of(sc.circuit.placements.begin(),
                                        sc.circuit.placements.end(),
                                        [&](const Placement &p) {
                                            return lib.find(p.gate->name()) != nullptr;
                                        }) &&
                            equal_up_to_phase(eval_unitary(sc.circuit), it->second->unitary);
            if (ok) {
                kept.push_back(std::move(sc));
            } else {
                ++dropped;
            }
        }
        set.circuits = std::move(kept);
        normalize_solution_set(set, lib, constraint, std::max<int>(k, static_cast<int>(set.circuits.size())));
    }
    return dropped;
}

std::string rng_state(const Rng &rng) {
    std::ostringstream s;
    s << rng;
    return s.str();
}

Rng rng_from_state(const std::string &state) {
    Rng rng;
    std::istringstream s(state);
    s >> rng;
    if (!s) {
        throw FormatError("corrupt RNG state");
    }
    return rng;
}

std::string metrics_text(const std::vector<MetricsRow> &rows) {
    std::string out = kMetricsHeader;
    out += '\n';
    for (const auto &r : rows) {
        out += format_metrics_row(r);
        out += '\n';
    }
    return out;
}

std::vector<MetricsRow> read_metrics(const fs::path &path) {
    std::vector<MetricsRow> rows;
    std::istringstream in(read_file(path));
    std::string line;
    std::getline(in, line);
    if (line != kMetricsHeader) {
        throw FormatError(path.string() + ": unexpected header");
    }
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        MetricsRow r;
        if (std::sscanf(line.c_str(), "%d,%lf,%lf,%lf,%zu,%lf,%zu,%lf", &r.iteration,
                        &r.seen_train_solved_frac, &r.train_solved_frac, &r.test_solved_frac,
                        &r.library_size, &r.mean_task_log_likelihood, &r.new_gates_this_iter,
                        &r.elapsed_s) != 8) {
            throw FormatError(path.string() + ": malformed row \"" + line + "\"");
        }
        rows.push_back(r);
    }
    return rows;
}

int latest_checkpoint(const fs::path &dir) {
    int latest = -1;
    if (!fs::is_directory(dir)) {
        return latest;
    }
    for (const auto &entry : fs::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        int it = 0;
        char tail = 0;
        if (std::sscanf(name.c_str(), "state_%d.jso%c", &it, &tail) == 2 && tail == 'n') {
            latest = std::max(latest, it);
        }
    }
    return latest;
}

void clear_checkpoints(const fs::path &dir) {
    if (!fs::is_directory(dir)) {
        return;
    }
    std::vector<fs::path> stale;
    for (const auto &entry : fs::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        for (const char *stem : {"library_", "solutions_", "state_"}) {
            if (name.rfind(stem, 0) == 0) {
                stale.push_back(entry.path());
            }
        }
        if (name == "metrics.csv" || name == "learned_gates.jsonl") {
            stale.push_back(entry.path());
        }
    }
    for (const auto &p : stale) {
        fs::remove(p);
    }
}

double mean_log_likelihood(const SolutionStore &store, const Library &lib,
                           const Connectivity &constraint) {
    double total = 0.0;
    std::size_t n = 0;
    std::vector<double> lps;
    for (const auto &[id, set] : store) {
        if (set.circuits.empty()) {
            continue;
        }
        lps.clear();
        for (const auto &sc : set.circuits) {
            lps.push_back(circuit_log_prob(sc.circuit, lib, constraint));
        }
        total += log_sum_exp(lps);
        ++n;
    }
    return n == 0 ? std::nan("") : total / static_cast<double>(n);
}

} // namespace

TrainResult run_training(const TrainConfig &cfg, const LogSink &log) {
    cfg.check();
    auto say = [&](const std::string &msg) {
        if (log) {
            log(msg);
        }
    };
    const Connectivity constraint = Connectivity::parse(cfg.constraint);
    const std::vector<Task> train = read_tasks(cfg.train_path);
    const std::vector<Task> test =
        cfg.test_path.empty() ? std::vector<Task>{} : read_tasks(cfg.test_path);
    if (cfg.iterations > 0 && static_cast<std::size_t>(cfg.batch_size) > train.size()) {
        throw std::invalid_argument("batch_size " + std::to_string(cfg.batch_size) +
                                    " exceeds the " + std::to_string(train.size()) +
                                    " training tasks");
    }
    std::vector<Task> all = train;
    all.insert(all.end(), test.begin(), test.end());
    std::map<std::string, const Task *> by_id;
    for (const auto &t : all) {
        if (!by_id.emplace(t.id, &t).second) {
            throw FormatError("duplicate task id " + t.id);
        }
    }

    TrainResult result;
    Rng rng(cfg.seed);
    int start = 0;
    const int resume_from = cfg.resume ? latest_checkpoint(cfg.run_dir) : -1;
    if (resume_from >= 0) {
        start = resume_from;
        result.library = read_library(cfg.run_dir / numbered("library", start, ".json"));
        result.solutions =
            read_solutions(cfg.run_dir / numbered("solutions", start, ".jsonl"), result.library);
        const Json state =
            Json::parse(read_file(cfg.run_dir / numbered("state", start, ".json")));
        rng = rng_from_state(state.at("rng").get<std::string>());
        result.metrics = read_metrics(cfg.run_dir / "metrics.csv");
        result.metrics.resize(std::min<std::size_t>(result.metrics.size(),
                                                    static_cast<std::size_t>(start)));
        say("resuming from iteration " + std::to_string(start));
    } else {
        clear_checkpoints(cfg.run_dir);
        result.library = cfg.initial_library.empty() ? Library::uniform(gates::elementary_set())
                                                     : read_library(cfg.initial_library);
        write_file_atomic(cfg.run_dir / "config.json", to_json(cfg).dump(2) + "\n");
        write_library(cfg.run_dir / numbered("library", 0, ".json"), result.library);
        write_solutions(cfg.run_dir / numbered("solutions", 0, ".jsonl"), result.solutions);
        write_file_atomic(cfg.run_dir / numbered("state", 0, ".json"),
                          Json{{"iteration", 0}, {"rng", rng_state(rng)}}.dump() + "\n");
        write_file_atomic(cfg.run_dir / "metrics.csv", metrics_text(result.metrics));
        write_file_atomic(cfg.run_dir / "learned_gates.jsonl", "");
    }

    std::string learned_log;
    if (fs::exists(cfg.run_dir / "learned_gates.jsonl")) {
        for (const auto &row : parse_jsonl(read_file(cfg.run_dir / "learned_gates.jsonl"),
                                           "learned_gates.jsonl")) {
            if (row.value("iteration", 0) <= start) {
                learned_log += row.dump() + "\n";
            }
        }
    }

    const EnumConfig ecfg = cfg.enum_config();
    for (int iteration = start + 1; iteration <= cfg.iterations; ++iteration) {
        const auto t0 = Clock::now();

        // Batch without replacement (partial Fisher-Yates).
        std::vector<std::size_t> order(train.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        const auto b = static_cast<std::size_t>(cfg.batch_size);
        for (std::size_t i = 0; i < b; ++i) {
            const auto j = i + uniform_index(rng, order.size() - i);
            std::swap(order[i], order[j]);
        }
        std::vector<char> want(all.size(), 0);
        for (std::size_t i = 0; i < b; ++i) {
            want[order[i]] = 1;
        }

        auto hits = search_tasks(all, want, result.library, constraint, ecfg);
        std::size_t batch_hits = 0;
        for (std::size_t i = 0; i < all.size(); ++i) {
            if (!want[i] || hits.kept[i].empty()) {
                continue;
            }
            ++batch_hits;
            auto &set = result.solutions[all[i].id];
            set.task_id = all[i].id;
            for (auto &c : hits.kept[i]) {
                set.circuits.push_back(std::move(c));
            }
            normalize_solution_set(set, result.library, constraint, cfg.k);
        }
        if (batch_hits == 0) {
            say("warning: iteration " + std::to_string(iteration) +
                " found no solution for its batch; consider a larger search budget");
        }

        auto learned = learn_step(result.library, result.solutions, constraint, cfg.learn);
        result.library = std::move(learned.library);
        result.solutions = std::move(learned.solutions);
        const auto dropped =
            revalidate(result.solutions, by_id, result.library, constraint, cfg.k);
        if (dropped > 0) {
            say("warning: dropped " + std::to_string(dropped) + " stored circuits that failed "
                "re-validation");
        }

        MetricsRow row;
        row.iteration = iteration;
        std::size_t seen = 0;
        std::size_t train_solved = 0;
        for (std::size_t i = 0; i < train.size(); ++i) {
            const auto it = result.solutions.find(train[i].id);
            const bool stored = it != result.solutions.end() && !it->second.circuits.empty();
            seen += stored ? 1 : 0;
            train_solved += (stored || hits.solved[i]) ? 1 : 0;
        }
        std::size_t test_solved = 0;
        for (std::size_t i = train.size(); i < all.size(); ++i) {
            test_solved += hits.solved[i] ? 1 : 0;
        }
        auto frac = [](std::size_t a, std::size_t n) {
            return n == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(n);
        };
        row.seen_train_solved_frac = frac(seen, train.size());
        row.train_solved_frac = frac(train_solved, train.size());
        row.test_solved_frac = frac(test_solved, test.size());
        row.library_size = result.library.size();
        row.mean_task_log_likelihood =
            mean_log_likelihood(result.solutions, result.library, constraint);
        row.new_gates_this_iter = learned.adopted.size();
        row.elapsed_s =
            cfg.deterministic ? 0.0 : std::chrono::duration<double>(Clock::now() - t0).count();
        result.metrics.push_back(row);

        for (const auto &a : learned.adopted) {
            Json j = to_json(a);
            j["iteration"] = iteration;
            learned_log += j.dump() + "\n";
            say("iteration " + std::to_string(iteration) + ": adopted " + a.name + " = " +
                a.body);
        }
        write_library(cfg.run_dir / numbered("library", iteration, ".json"), result.library);
        write_solutions(cfg.run_dir / numbered("solutions", iteration, ".jsonl"),
                        result.solutions);
        write_file_atomic(cfg.run_dir / "learned_gates.jsonl", learned_log);
        write_file_atomic(cfg.run_dir / "metrics.csv", metrics_text(result.metrics));
        // The state file marks the checkpoint as complete, so it goes last.
        write_file_atomic(cfg.run_dir / numbered("state", iteration, ".json"),
                          Json{{"iteration", iteration}, {"rng", rng_state(rng)}}.dump() + "\n");
        say(format_metrics_row(row));
    }
    return result;
}

EvalResult evaluate(const Library &lib, std::span<const Task> tasks,
                    const Connectivity &constraint, const EnumConfig &cfg) {
    cfg.check();
    EvalResult result;
    std::vector<char> want(tasks.size(), 1);
    auto hits = search_tasks(tasks, want, lib, constraint, cfg);
    result.report = std::move(hits.report);
    std::size_t solved = 0;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        TaskReport r;
        r.id = tasks[i].id;
        r.solved = hits.solved[i] != 0;
        SolutionSet set{tasks[i].id, std::move(hits.kept[i])};
        normalize_solution_set(set, lib, constraint, cfg.k);
        if (!set.circuits.empty()) {
            r.best = set.circuits.front();
            std::vector<double> lps;
            for (const auto &sc : set.circuits) {
                lps.push_back(sc.log_prob);
            }
            r.log_likelihood = log_sum_exp(lps);
        }
        solved += r.solved ? 1 : 0;
        result.tasks.push_back(std::move(r));
    }
    result.solved_fraction =
        tasks.empty() ? 0.0 : static_cast<double>(solved) / static_cast<double>(tasks.size());
    return result;
}

Json to_json(const EvalResult &r) {
    Json tasks = Json::array();
    for (const auto &t : r.tasks) {
        Json j{{"id", t.id}, {"solved", t.solved}};
        if (t.best) {
            j["best_circuit"] = to_json(t.best->circuit);
            j["best_log_prob"] = t.best->log_prob;
            j["log_likelihood"] = t.log_likelihood;
        }
        tasks.push_back(std::move(j));
    }
    return Json{{"solved_fraction", r.solved_fraction},
                {"tasks", std::move(tasks)},
                {"search", to_json(r.report)}};
}

} // namespace gatesmith
