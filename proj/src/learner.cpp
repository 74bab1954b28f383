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
#include "gatesmith/learner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace gatesmith {

namespace {

// Placement counts of one solution circuit, enough to score it under any
// weights of a fixed gate list.
struct CircuitStats {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> counts; // (gate index, uses)
    double chi_log = 0.0;
};

struct Corpus {
    std::vector<std::vector<CircuitStats>> tasks; // nonempty solution sets only
};

class ChiTable {
  public:
    explicit ChiTable(const Connectivity &constraint) : constraint_(constraint) {}

    double log_chi(const Gate &g, int n_qubits) {
        const auto key = std::make_pair(g.name(), n_qubits);
        const auto it = cache_.find(key);
        if (it != cache_.end()) {
            return it->second;
        }
        const double v = std::log(chi(g, n_qubits, constraint_));
        cache_.emplace(key, v);
        return v;
    }

  private:
    const Connectivity &constraint_;
    std::map<std::pair<std::string, int>, double> cache_;
};

CircuitStats stats_of(const Circuit &c, const Library &lib, ChiTable &chis) {
    std::map<std::uint32_t, std::uint32_t> counts;
    CircuitStats s;
    for (const auto &p : c.placements) {
        const auto index = lib.index_of(p.gate->name());
        if (!index) {
            throw std::invalid_argument("gate " + p.gate->name() + " is not in the library");
        }
        ++counts[static_cast<std::uint32_t>(*index)];
        s.chi_log += chis.log_chi(*p.gate, c.n_qubits);
    }
    s.counts.assign(counts.begin(), counts.end());
    return s;
}

Corpus build_corpus(const Library &lib, const SolutionStore &store, ChiTable &chis) {
    Corpus corpus;
    for (const auto &[id, set] : store) {
        if (set.circuits.empty()) {
            continue;
        }
        auto &task = corpus.tasks.emplace_back();
        for (const auto &sc : set.circuits) {
            task.push_back(stats_of(sc.circuit, lib, chis));
        }
    }
    return corpus;
}

double stats_log_prob(const CircuitStats &s, std::span<const double> log_w, double log_end) {
    double lp = log_end + s.chi_log;
    for (const auto &[g, n] : s.counts) {
        lp += n * log_w[g];
    }
    return lp;
}

double corpus_log_likelihood(const Corpus &corpus, std::span<const double> weights,
                             double end_weight) {
    std::vector<double> log_w(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) {
        log_w[i] = std::log(weights[i]);
    }
    const double log_end = std::log(end_weight);
    double total = 0.0;
    std::vector<double> terms;
    for (const auto &task : corpus.tasks) {
        terms.clear();
        for (const auto &s : task) {
            terms.push_back(stats_log_prob(s, log_w, log_end));
        }
        total += log_sum_exp(terms);
    }
    return total;
}

double theta_prior(std::span<const double> weights, double end_weight, double alpha) {
    std::vector<double> point(weights.begin(), weights.end());
    point.push_back(end_weight);
    return dirichlet_log_density(point, alpha);
}

struct EmResult {
    std::vector<double> weights;
    double end_weight = 0.0;
    double objective = 0.0; // theta prior + log-likelihood
    std::vector<double> trace;
};

EmResult run_em(const Corpus &corpus, std::vector<double> weights, double end_weight,
                const LearnConfig &cfg) {
    const double alpha = cfg.model.alpha;
    if (!(alpha > 1.0)) {
        throw std::invalid_argument("EM needs a Dirichlet concentration alpha > 1");
    }
    const double pseudo = alpha - 1.0;
    const std::size_t n_gates = weights.size();
    EmResult r;
    if (corpus.tasks.empty()) {
        const double u = 1.0 / static_cast<double>(n_gates + 1);
        r.weights.assign(n_gates, u);
        r.end_weight = u;
        r.objective = theta_prior(r.weights, r.end_weight, alpha);
        r.trace.push_back(r.objective);
        return r;
    }
    auto objective = [&](const std::vector<double> &w, double e) {
        return theta_prior(w, e, alpha) + corpus_log_likelihood(corpus, w, e);
    };
    double current = objective(weights, end_weight);
    r.trace.push_back(current);

    std::vector<double> log_w(n_gates);
    std::vector<double> counts(n_gates);
    std::vector<double> lps;
    for (int it = 0; it < cfg.em_max_iterations; ++it) {
        for (std::size_t i = 0; i < n_gates; ++i) {
            log_w[i] = std::log(weights[i]);
        }
        const double log_end = std::log(end_weight);
        std::fill(counts.begin(), counts.end(), pseudo);
        double end_count = pseudo;
        for (const auto &task : corpus.tasks) {
            lps.clear();
            for (const auto &s : task) {
                lps.push_back(stats_log_prob(s, log_w, log_end));
            }
            const double norm = log_sum_exp(lps);
            for (std::size_t c = 0; c < task.size(); ++c) {
                const double resp = std::exp(lps[c] - norm);
                for (const auto &[g, n] : task[c].counts) {
                    counts[g] += resp * n;
                }
                end_count += resp;
            }
        }
        const double total = std::accumulate(counts.begin(), counts.end(), end_count);
        for (std::size_t i = 0; i < n_gates; ++i) {
            weights[i] = counts[i] / total;
        }
        end_weight = end_count / total;
        const double next = objective(weights, end_weight);
        r.trace.push_back(next);
        const double gain = next - current;
        current = next;
        if (gain < cfg.em_tolerance) {
            break;
        }
    }
    r.weights = std::move(weights);
    r.end_weight = end_weight;
    r.objective = current;
    return r;
}

// Pattern matching of a gate body (over parameters) against a circuit.
bool match_at(const std::vector<Placement> &pattern, int arity,
              const std::vector<Placement> &placements, std::size_t at, std::vector<int> &binding) {
    if (at + pattern.size() > placements.size()) {
        return false;
    }
    binding.assign(static_cast<std::size_t>(arity), -1);
    for (std::size_t j = 0; j < pattern.size(); ++j) {
        const auto &want = pattern[j];
        const auto &got = placements[at + j];
        if (want.gate->name() != got.gate->name() || want.qubits.size() != got.qubits.size()) {
            return false;
        }
        for (std::size_t i = 0; i < want.qubits.size(); ++i) {
            int &slot = binding[static_cast<std::size_t>(want.qubits[i])];
            if (slot == -1) {
                if (std::find(binding.begin(), binding.end(), got.qubits[i]) != binding.end()) {
                    return false; // two parameters on one qubit
                }
                slot = got.qubits[i];
            } else if (slot != got.qubits[i]) {
                return false;
            }
        }
    }
    return true;
}

std::size_t count_rewrites(const std::vector<Placement> &pattern, int arity,
                           const std::vector<Placement> &placements) {
    std::size_t count = 0;
    std::vector<int> binding;
    std::size_t i = 0;
    while (i < placements.size()) {
        if (match_at(pattern, arity, placements, i, binding)) {
            ++count;
            i += pattern.size();
        } else {
            ++i;
        }
    }
    return count;
}

std::string make_signature(const std::vector<Placement> &body) {
    std::string sig;
    for (const auto &p : body) {
        sig += p.gate->name();
        char sep = ':';
        for (int q : p.qubits) {
            sig += sep;
            sig += std::to_string(q);
            sep = ',';
        }
        sig += ';';
    }
    return sig;
}

SolutionStore rewrite_store(const SolutionStore &store, const GatePtr &g, const Library &lib,
                            const Connectivity &constraint) {
    SolutionStore out;
    for (const auto &[id, set] : store) {
        SolutionSet next{set.task_id, {}};
        for (const auto &sc : set.circuits) {
            next.circuits.push_back(ScoredCircuit{rewrite_with(g, sc.circuit), sc.log_prob});
        }
        normalize_solution_set(next, lib, constraint, static_cast<int>(next.circuits.size()));
        out.emplace(id, std::move(next));
    }
    return out;
}

double library_prior_of(const Library &lib, const ModelConfig &model) {
    return library_log_prior(lib, model);
}

} // namespace

std::string Fragment::signature() const { return make_signature(body); }

std::vector<Fragment> extract_fragments(const SolutionStore &solutions, int max_size,
                                        int min_support) {
    struct Accumulator {
        Fragment fragment;
        std::size_t last_circuit = static_cast<std::size_t>(-1);
        std::size_t last_end = 0;
    };
    std::map<std::string, Accumulator> found;
    std::size_t circuit_uid = 0;
    for (const auto &[id, set] : solutions) {
        for (std::size_t s = 0; s < set.circuits.size(); ++s, ++circuit_uid) {
            const auto &placements = set.circuits[s].circuit.placements;
            for (std::size_t start = 0; start < placements.size(); ++start) {
                std::vector<int> params;
                std::vector<Placement> body;
                for (std::size_t len = 1;
                     len <= static_cast<std::size_t>(max_size) && start + len <= placements.size();
                     ++len) {
                    const auto &p = placements[start + len - 1];
                    std::vector<int> abstract;
                    for (int q : p.qubits) {
                        auto it = std::find(params.begin(), params.end(), q);
                        if (it == params.end()) {
                            params.push_back(q);
                            it = params.end() - 1;
                        }
                        abstract.push_back(static_cast<int>(it - params.begin()));
                    }
                    body.push_back(Placement{p.gate, std::move(abstract)});
                    if (len < 2) {
                        continue;
                    }
                    auto &acc = found[make_signature(body)];
                    if (acc.fragment.body.empty()) {
                        acc.fragment.body = body;
                        acc.fragment.arity = static_cast<int>(params.size());
                    }
                    if (acc.last_circuit == circuit_uid && start < acc.last_end) {
                        continue; // overlaps the previous occurrence in this circuit
                    }
                    acc.last_circuit = circuit_uid;
                    acc.last_end = start + len;
                    ++acc.fragment.support;
                    acc.fragment.occurrences.push_back(FragmentOccurrence{id, s, start});
                }
            }
        }
    }
    std::vector<std::pair<std::string, Fragment>> kept;
    for (auto &[sig, acc] : found) {
        if (acc.fragment.support >= static_cast<std::size_t>(std::max(1, min_support))) {
            kept.emplace_back(sig, std::move(acc.fragment));
        }
    }
    std::sort(kept.begin(), kept.end(), [](const auto &a, const auto &b) {
        if (a.second.support != b.second.support) {
            return a.second.support > b.second.support;
        }
        if (a.second.size() != b.second.size()) {
            return a.second.size() > b.second.size();
        }
        return a.first < b.first;
    });
    std::vector<Fragment> out;
    out.reserve(kept.size());
    for (auto &[sig, f] : kept) {
        out.push_back(std::move(f));
    }
    return out;
}

Circuit rewrite_with(const GatePtr &g, const Circuit &c) {
    if (!g || g->is_elementary()) {
        throw std::invalid_argument("rewrite_with: needs a composite gate");
    }
    const auto pattern = g->body()->placements();
    Circuit out{c.n_qubits, {}};
    std::vector<int> binding;
    std::size_t i = 0;
    while (i < c.placements.size()) {
        if (!pattern.empty() && match_at(pattern, g->arity(), c.placements, i, binding)) {
            out.placements.push_back(Placement{g, binding});
            i += pattern.size();
        } else {
            out.placements.push_back(c.placements[i]);
            ++i;
        }
    }
    return out;
}

Library em_fit_theta(const Library &lib, const SolutionStore &solutions,
                     const Connectivity &constraint, const LearnConfig &cfg) {
    ChiTable chis(constraint);
    const Corpus corpus = build_corpus(lib, solutions, chis);
    auto r = run_em(corpus, {lib.weights().begin(), lib.weights().end()}, lib.end_weight(), cfg);
    return lib.with_weights(std::move(r.weights), r.end_weight);
}

std::vector<double> em_trace(const Library &lib, const SolutionStore &solutions,
                             const Connectivity &constraint, const LearnConfig &cfg) {
    ChiTable chis(constraint);
    const Corpus corpus = build_corpus(lib, solutions, chis);
    const double prior = library_prior_of(lib, cfg.model);
    auto r = run_em(corpus, {lib.weights().begin(), lib.weights().end()}, lib.end_weight(), cfg);
    for (double &v : r.trace) {
        v += prior;
    }
    return r.trace;
}

double score(const Library &lib, const SolutionStore &solutions, const Connectivity &constraint,
             const ModelConfig &cfg) {
    ChiTable chis(constraint);
    const Corpus corpus = build_corpus(lib, solutions, chis);
    return library_log_prior(lib, cfg) + theta_log_prior(lib, cfg.alpha) +
           corpus_log_likelihood(corpus, lib.weights(), lib.end_weight());
}

LearnResult learn_step(const Library &lib, const SolutionStore &solutions,
                       const Connectivity &constraint, const LearnConfig &cfg) {
    ChiTable chis(constraint);
    LearnResult result;
    result.solutions = solutions;

    Library current = em_fit_theta(lib, solutions, constraint, cfg);
    for (auto &[id, set] : result.solutions) {
        normalize_solution_set(set, current, constraint, static_cast<int>(set.circuits.size()));
    }
    double current_score = score(current, result.solutions, constraint, cfg.model);
    result.score_before = current_score;

    int next_index = current.next_fragment_index();
    while (cfg.max_adoptions == 0 || static_cast<int>(result.adopted.size()) < cfg.max_adoptions) {
        auto fragments = extract_fragments(result.solutions, cfg.max_fragment_size,
                                           cfg.min_support);
        if (fragments.size() > cfg.max_candidates) {
            fragments.resize(cfg.max_candidates);
        }
        if (fragments.empty()) {
            break;
        }

        // Stats of the current solutions; candidates only adjust counts.
        struct Flat {
            const std::vector<Placement> *placements;
            int n_qubits;
            CircuitStats stats;
        };
        std::vector<std::vector<Flat>> flat;
        for (const auto &[id, set] : result.solutions) {
            if (set.circuits.empty()) {
                continue;
            }
            auto &task = flat.emplace_back();
            for (const auto &sc : set.circuits) {
                task.push_back(Flat{&sc.circuit.placements, sc.circuit.n_qubits,
                                    stats_of(sc.circuit, current, chis)});
            }
        }
        const auto new_index = static_cast<std::uint32_t>(current.size());
        const double mean_weight = (1.0 - current.end_weight()) / static_cast<double>(current.size());

        double best_score = kNegInf;
        GatePtr best_gate;
        Library best_lib;
        std::size_t best_support = 0;
        for (const auto &f : fragments) {
            GatePtr g = Gate::composite("f" + std::to_string(next_index),
                                        Program::from_placements(f.arity, f.body));
            Library candidate = current.with_gate(g, mean_weight);
            // Every candidate of a round shares its name, so its chi stays out of the cache.
            std::map<int, double> candidate_chi;
            Corpus corpus;
            for (const auto &task : flat) {
                auto &out = corpus.tasks.emplace_back();
                for (const auto &fc : task) {
                    const auto hits = count_rewrites(f.body, f.arity, *fc.placements);
                    CircuitStats s = fc.stats;
                    if (hits > 0) {
                        std::map<std::uint32_t, std::int64_t> counts(s.counts.begin(),
                                                                      s.counts.end());
                        auto [it, fresh] = candidate_chi.try_emplace(fc.n_qubits, 0.0);
                        if (fresh) {
                            it->second = std::log(chi(*g, fc.n_qubits, constraint));
                        }
                        double chi_delta = it->second;
                        for (const auto &p : f.body) {
                            const auto idx = static_cast<std::uint32_t>(
                                *current.index_of(p.gate->name()));
                            counts[idx] -= 1 * static_cast<std::int64_t>(hits);
                            chi_delta -= chis.log_chi(*p.gate, fc.n_qubits);
                        }
                        counts[new_index] += static_cast<std::int64_t>(hits);
                        s.counts.clear();
                        for (const auto &[gi, n] : counts) {
                            if (n > 0) {
                                s.counts.emplace_back(gi, static_cast<std::uint32_t>(n));
                            }
                        }
                        s.chi_log += static_cast<double>(hits) * chi_delta;
                    }
                    out.push_back(std::move(s));
                }
            }
            const auto em = run_em(corpus, {candidate.weights().begin(), candidate.weights().end()},
                                   candidate.end_weight(), cfg);
            const double s = library_log_prior(candidate, cfg.model) + em.objective;
            if (s > best_score) {
                best_score = s;
                best_gate = g;
                best_lib = candidate.with_weights(em.weights, em.end_weight);
                best_support = f.support;
            }
        }
        if (!best_gate || !(best_score > current_score + cfg.adopt_margin)) {
            break;
        }
        AdoptionReport report;
        report.name = best_gate->name();
        report.body = best_gate->body()->to_string();
        report.arity = best_gate->arity();
        report.support = best_support;
        report.score_before = current_score;
        current = best_lib;
        result.solutions = rewrite_store(result.solutions, best_gate, current, constraint);
        current_score = score(current, result.solutions, constraint, cfg.model);
        report.score_after = current_score;
        result.adopted.push_back(std::move(report));
        ++next_index;
    }
    result.library = current.with_version(lib.version() + 1);
    result.score_after = current_score;
    return result;
}

} // namespace gatesmith
