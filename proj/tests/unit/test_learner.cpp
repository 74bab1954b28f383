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

#include <cmath>
#include <random>

#include "gatesmith/gates.hpp"
#include "gatesmith/learner.hpp"
#include "helpers.hpp"
#include "oracles.hpp"
#include "toy_sets.hpp"

using namespace gatesmith;
using testing::circuit;
using testing::random_set;
using testing::random_store;

namespace {

Library g0() { return Library::uniform(gates::elementary_set()); }

SolutionStore store_of(const std::vector<Circuit> &circuits) {
    SolutionStore store;
    for (std::size_t i = 0; i < circuits.size(); ++i) {
        const std::string id = "u" + std::to_string(i);
        store[id] = SolutionSet{id, {{circuits[i], 0.0}}};
    }
    return store;
}

// Twelve 2-qubit solutions; T;T on one wire appears in ten of them.
std::vector<Circuit> toy_tt() {
    using namespace gates;
    return {
        circuit(2, {{t(), {0}}, {t(), {0}}}),
        circuit(2, {{h(), {0}}, {t(), {0}}, {t(), {0}}}),
        circuit(2, {{t(), {0}}, {t(), {0}}, {h(), {0}}}),
        circuit(2, {{h(), {1}}, {t(), {0}}, {t(), {0}}}),
        circuit(2, {{t(), {1}}, {t(), {1}}, {cnot(), {0, 1}}}),
        circuit(2, {{cnot(), {0, 1}}, {t(), {0}}, {t(), {0}}}),
        circuit(2, {{tdg(), {0}}, {t(), {1}}, {t(), {1}}}),
        circuit(2, {{t(), {1}}, {t(), {1}}, {tdg(), {0}}}),
        circuit(2, {{h(), {0}}, {cnot(), {1, 0}}, {t(), {0}}, {t(), {0}}}),
        circuit(2, {{t(), {1}}, {t(), {1}}, {h(), {0}}}),
        circuit(2, {{h(), {0}}, {cnot(), {0, 1}}}),
        circuit(2, {{tdg(), {1}}, {h(), {1}}}),
    };
}

// Score of a library over single-solution tasks, computed directly: with one
// circuit per task the EM fixed point is the smoothed count ratio.
struct ToyScore {
    double value;
    std::vector<double> theta; // gates in order, then end
};

ToyScore toy_score(const std::vector<std::vector<int>> &uses, int n_gates,
                   const std::vector<double> &log_chi, double leaves_of_learned) {
    const double alpha = 1.5;
    const int outcomes = n_gates + 1;
    std::vector<double> counts(static_cast<std::size_t>(outcomes), alpha - 1.0);
    for (const auto &c : uses) {
        for (int g : c) {
            counts[static_cast<std::size_t>(g)] += 1.0;
        }
        counts.back() += 1.0;
    }
    double total = 0.0;
    for (double v : counts) {
        total += v;
    }
    std::vector<double> theta;
    for (double v : counts) {
        theta.push_back(v / total);
    }
    double ll = 0.0;
    for (const auto &c : uses) {
        ll += std::log(theta.back());
        for (int g : c) {
            ll += std::log(theta[static_cast<std::size_t>(g)]) + log_chi[static_cast<std::size_t>(g)];
        }
    }
    double prior = std::lgamma(alpha * outcomes) - outcomes * std::lgamma(alpha);
    for (double v : theta) {
        prior += (alpha - 1.0) * std::log(v);
    }
    return {ll + prior - 1.5 * leaves_of_learned, theta};
}

} // namespace

TEST_SUITE("library learner") {

TEST_CASE("fragments") {
    using namespace gates;
    SUBCASE("T;T in two tasks") {
        const auto store = store_of({circuit(3, {{t(), {2}}, {t(), {2}}}),
                                     circuit(2, {{h(), {1}}, {t(), {0}}, {t(), {0}}})});
        const auto frags = extract_fragments(store, 4);
        REQUIRE(!frags.empty());
        CHECK(frags[0].arity == 1);
        CHECK(frags[0].support == 2);
        CHECK(Program::from_placements(1, frags[0].body).to_string() ==
              "(lambda (lambda (t (t $0 $1) $1)))");
        CHECK(frags[0].occurrences.size() == 2);
    }
    SUBCASE("a pattern seen once is dropped") {
        const auto store = store_of({circuit(2, {{h(), {0}}, {t(), {1}}}),
                                     circuit(2, {{cnot(), {0, 1}}})});
        CHECK(extract_fragments(store, 4).empty());
    }
    SUBCASE("CNOT pair with swapped roles") {
        const auto store = store_of({circuit(2, {{cnot(), {0, 1}}, {cnot(), {1, 0}}}),
                                     circuit(3, {{cnot(), {2, 0}}, {cnot(), {0, 2}}, {h(), {1}}})});
        const auto frags = extract_fragments(store, 4);
        REQUIRE(frags.size() == 1);
        CHECK(frags[0].arity == 2);
        CHECK(Program::from_placements(2, frags[0].body).to_string() ==
              "(lambda (lambda (lambda (cnot (cnot $0 $1 $2) $2 $1))))");
    }
    SUBCASE("qubit equality pattern separates fragments") {
        // T(0);T(0) and T(0);T(1) are different fragments.
        const auto store = store_of({circuit(2, {{t(), {0}}, {t(), {1}}}),
                                     circuit(2, {{t(), {1}}, {t(), {0}}}),
                                     circuit(2, {{t(), {0}}, {t(), {0}}})});
        const auto frags = extract_fragments(store, 4);
        REQUIRE(frags.size() == 1);
        CHECK(frags[0].arity == 2);
        CHECK(frags[0].support == 2);
    }
    SUBCASE("sizes stay within bounds and order is by support") {
        const auto store = random_store(7);
        for (int max_size : {2, 3, 4}) {
            const auto frags = extract_fragments(store, max_size);
            for (std::size_t i = 0; i < frags.size(); ++i) {
                CHECK(frags[i].size() >= 2);
                CHECK(static_cast<int>(frags[i].size()) <= max_size);
                CHECK(frags[i].support >= 2);
                if (i > 0) {
                    CHECK(frags[i - 1].support >= frags[i].support);
                }
            }
        }
    }
}

TEST_CASE("rewriting") {
    using namespace gates;
    const GatePtr f0 = Gate::composite(
        "f0", Program::from_placements(1, {{t(), {0}}, {t(), {0}}}));
    SUBCASE("single occurrence") {
        const auto out = rewrite_with(f0, circuit(3, {{t(), {2}}, {t(), {2}}}));
        REQUIRE(out.size() == 1);
        CHECK(out.placements[0].gate->name() == "f0");
        CHECK(out.placements[0].qubits == std::vector<int>{2});
    }
    SUBCASE("no occurrence") {
        const auto c = circuit(2, {{t(), {0}}, {h(), {0}}, {t(), {0}}, {t(), {1}}});
        CHECK(same_circuit(rewrite_with(f0, c), c));
    }
    SUBCASE("leftmost without overlap") {
        const auto c = circuit(1, {{t(), {0}}, {t(), {0}}, {t(), {0}}});
        const auto out = rewrite_with(f0, c);
        REQUIRE(out.size() == 2);
        CHECK(out.placements[0].gate->name() == "f0");
        CHECK(out.placements[1].gate->name() == "t");
        // T^3 computed from the hand-typed matrix.
        const auto t3 = oracle::mul(oracle::T(), oracle::mul(oracle::T(), oracle::T()));
        CHECK(frobenius_distance(eval_unitary(out), oracle::to_matrix(t3)) <= 1e-10);
        CHECK(same_circuit(rewrite_with(f0, out), out));
    }
    SUBCASE("unitary is preserved without phase freedom") {
        const GatePtr f5 = Gate::composite(
            "f5", Program::from_placements(2, {{cnot(), {0, 1}}, {cnot(), {1, 0}}}));
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            std::mt19937_64 rng(seed);
            for (const auto &sc : random_set(rng, "x").circuits) {
                for (const auto &g : {f0, f5}) {
                    const auto out = rewrite_with(g, sc.circuit);
                    CHECK(frobenius_distance(eval_unitary(out), eval_unitary(sc.circuit)) <=
                          1e-10);
                    CHECK(same_circuit(rewrite_with(g, out), out));
                }
            }
        }
    }
}

TEST_CASE("expectation maximization") {
    using namespace gates;
    LearnConfig cfg;
    const auto full = Connectivity::full();
    SUBCASE("one solution of H;H") {
        const auto fit =
            em_fit_theta(g0(), store_of({circuit(1, {{h(), {0}}, {h(), {0}}})}), full, cfg);
        CHECK(fit.weight(0) == doctest::Approx(2.5 / 5.5).epsilon(1e-9));
        CHECK(fit.end_weight() == doctest::Approx(1.5 / 5.5).epsilon(1e-9));
        for (std::size_t i = 1; i < 4; ++i) {
            CHECK(fit.weight(i) == doctest::Approx(0.5 / 5.5).epsilon(1e-9));
        }
    }
    SUBCASE("the only used gate dominates") {
        const auto fit = em_fit_theta(g0(), store_of({circuit(1, {{h(), {0}}})}), full, cfg);
        for (std::size_t i = 1; i < 4; ++i) {
            CHECK(fit.weight(0) > fit.weight(i));
        }
    }
    SUBCASE("equally likely circuits share responsibility") {
        // H(0) vs H(1): same probability, so counts split evenly between them
        // and the fit matches a store holding each once with weight 1/2.
        SolutionStore store;
        store["a"] = SolutionSet{"a", {{circuit(2, {{h(), {0}}}), 0.0},
                                       {circuit(2, {{t(), {0}}}), 0.0}}};
        const auto fit = em_fit_theta(g0(), store, full, cfg);
        // Counts: h 0.5, t 0.5, end 1, plus 0.5 each -> total 4.5.
        CHECK(fit.weight(0) == doctest::Approx(1.0 / 4.5).epsilon(1e-9));
        CHECK(fit.weight(1) == doctest::Approx(1.0 / 4.5).epsilon(1e-9));
        CHECK(fit.end_weight() == doctest::Approx(1.5 / 4.5).epsilon(1e-9));
    }
    SUBCASE("empty store gives uniform weights") {
        SolutionStore store;
        store["a"] = SolutionSet{"a", {}};
        const Library skewed(gates::elementary_set(), {0.7, 0.1, 0.05, 0.05}, 0.1);
        const auto fit = em_fit_theta(skewed, store, full, cfg);
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(fit.weight(i) == doctest::Approx(0.2));
        }
        CHECK(fit.end_weight() == doctest::Approx(0.2));
    }
    SUBCASE("alpha of one or less is rejected") {
        cfg.model.alpha = 1.0;
        CHECK_THROWS_AS(em_fit_theta(g0(), store_of({circuit(1, {{h(), {0}}})}), full, cfg),
                        std::invalid_argument);
    }
    SUBCASE("objective never decreases") {
        int multi_step = 0;
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const auto trace = em_trace(g0(), random_store(seed), full, cfg);
            REQUIRE(!trace.empty());
            for (std::size_t i = 1; i < trace.size(); ++i) {
                CHECK(trace[i] >= trace[i - 1] - 1e-9);
            }
            multi_step += trace.size() > 2 ? 1 : 0;
        }
        CHECK(multi_step > 0);
    }
    SUBCASE("the final trace value is the score of the fit") {
        const auto store = random_store(3);
        const auto trace = em_trace(g0(), store, full, cfg);
        const auto fit = em_fit_theta(g0(), store, full, cfg);
        CHECK(trace.back() == doctest::Approx(score(fit, store, full, cfg.model)).epsilon(1e-12));
    }
}

TEST_CASE("scoring") {
    using namespace gates;
    const auto full = Connectivity::full();
    const LearnConfig cfg;
    const auto toy = toy_tt();
    const auto store = store_of(toy);

    SUBCASE("base library has no structure penalty") {
        const auto fit = em_fit_theta(g0(), store, full, cfg);
        double ll = 0.0;
        for (const auto &[id, set] : store) {
            std::vector<Circuit> cs{set.circuits[0].circuit};
            ll += task_log_likelihood(eval_unitary(cs[0]), cs, fit, full);
        }
        CHECK(score(fit, store, full) ==
              doctest::Approx(theta_log_prior(fit, 1.5) + ll).epsilon(1e-12));
    }
    SUBCASE("an unused gate lowers the score") {
        const auto fit = em_fit_theta(g0(), store, full, cfg);
        const GatePtr unused = Gate::composite(
            "f0", Program::from_placements(1, {{h(), {0}}, {tdg(), {0}}, {h(), {0}}}));
        const auto bigger = em_fit_theta(fit.with_gate(unused, 0.1), store, full, cfg);
        CHECK(score(bigger, store, full) < score(fit, store, full));
    }
    SUBCASE("T;T pays for itself on the toy set") {
        // Gate indices: h 0, t 1, tdg 2, cnot 3, f0 4. On two qubits every
        // one-qubit gate has two placements and CNOT has two ordered pairs.
        const std::vector<double> log_chi(5, std::log(0.5));
        std::vector<std::vector<int>> base_uses;
        std::vector<std::vector<int>> f0_uses;
        const std::map<std::string, int> index{{"h", 0}, {"t", 1}, {"tdg", 2}, {"cnot", 3}};
        const GatePtr f0 = Gate::composite(
            "f0", Program::from_placements(1, {{t(), {0}}, {t(), {0}}}));
        SolutionStore rewritten;
        for (const auto &[id, set] : store) {
            auto &b = base_uses.emplace_back();
            for (const auto &p : set.circuits[0].circuit.placements) {
                b.push_back(index.at(p.gate->name()));
            }
            const auto r = rewrite_with(f0, set.circuits[0].circuit);
            rewritten[id] = SolutionSet{id, {{r, 0.0}}};
            auto &u = f0_uses.emplace_back();
            for (const auto &p : r.placements) {
                u.push_back(p.gate->name() == "f0" ? 4 : index.at(p.gate->name()));
            }
        }
        const auto expect_base = toy_score(base_uses, 4, log_chi, 0.0);
        const auto expect_f0 = toy_score(f0_uses, 5, log_chi, 2.0);

        const auto base = em_fit_theta(g0(), store, full, cfg);
        const auto with_f0 = em_fit_theta(g0().with_gate(f0, 0.1), rewritten, full, cfg);
        CHECK(score(base, store, full) == doctest::Approx(expect_base.value).epsilon(1e-9));
        CHECK(score(with_f0, rewritten, full) == doctest::Approx(expect_f0.value).epsilon(1e-9));
        CHECK(with_f0.weight(4) == doctest::Approx(expect_f0.theta[4]).epsilon(1e-9));
        CHECK(expect_f0.value > expect_base.value);
    }
}

TEST_CASE("greedy library growth") {
    using namespace gates;
    const auto full = Connectivity::full();
    const LearnConfig cfg;

    SUBCASE("nothing repeated leaves the gates alone") {
        const auto store = store_of({circuit(2, {{h(), {0}}, {t(), {1}}}),
                                     circuit(2, {{cnot(), {0, 1}}, {tdg(), {0}}})});
        const auto r = learn_step(g0(), store, full, cfg);
        CHECK(r.adopted.empty());
        CHECK(r.library.size() == 4);
        CHECK(r.library.version() == 1);
        CHECK(r.library.weight(0) != doctest::Approx(0.2));
    }
    SUBCASE("the toy set adopts exactly T;T") {
        const auto r = learn_step(g0(), store_of(toy_tt()), full, cfg);
        REQUIRE(r.adopted.size() == 1);
        CHECK(r.adopted[0].name == "f0");
        CHECK(r.adopted[0].body == "(lambda (lambda (t (t $0 $1) $1)))");
        CHECK(r.adopted[0].support == 10);
        CHECK(r.adopted[0].score_after > r.adopted[0].score_before);
        CHECK(r.library.size() == 5);
        CHECK(r.library.next_fragment_index() == 1);
        CHECK(r.library.find("f0") != nullptr);
        // Solutions come back rewritten.
        std::size_t uses = 0;
        for (const auto &[id, set] : r.solutions) {
            for (const auto &p : set.circuits[0].circuit.placements) {
                uses += p.gate->name() == "f0" ? 1 : 0;
            }
        }
        CHECK(uses == 10);
    }
    SUBCASE("ascent, extension and compression on random stores") {
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            SolutionStore store = random_store(seed);
            // Duplicate tasks so that fragments have support.
            const SolutionStore copy = store;
            for (const auto &[id, set] : copy) {
                store[id + "b"] = SolutionSet{id + "b", set.circuits};
            }
            const auto r = learn_step(g0(), store, full, cfg);
            CHECK(r.score_after >= r.score_before);
            CHECK(score(r.library, r.solutions, full) >= score(g0(), store, full) - 1e-9);
            CHECK(r.score_after == doctest::Approx(score(r.library, r.solutions, full)));
            for (std::size_t i = 0; i < 4; ++i) {
                CHECK(r.library.gate(i) == g0().gate(i));
            }
            Library running = g0();
            SolutionStore rewritten = store;
            for (const auto &a : r.adopted) {
                CHECK(a.score_after > a.score_before);
                const GatePtr g = r.library.find(a.name);
                REQUIRE(g != nullptr);
                bool shrank = false;
                for (auto &[id, set] : rewritten) {
                    for (auto &sc : set.circuits) {
                        const auto out = rewrite_with(g, sc.circuit);
                        shrank = shrank || out.size() < sc.circuit.size();
                        sc.circuit = out;
                    }
                }
                CHECK(shrank);
            }
        }
    }
    SUBCASE("a one-off whole solution loses to a common pair") {
        // One task solved by a distinctive five-gate circuit; three tasks
        // share H;T on a single wire.
        const auto store = store_of({
            circuit(2, {{h(), {0}}, {cnot(), {0, 1}}, {tdg(), {1}}, {cnot(), {1, 0}}, {h(), {1}}}),
            circuit(2, {{h(), {1}}, {t(), {1}}, {cnot(), {1, 0}}}),
            circuit(2, {{tdg(), {0}}, {h(), {0}}, {t(), {0}}}),
            circuit(2, {{h(), {0}}, {t(), {0}}}),
        });
        const auto base = em_fit_theta(g0(), store, full, cfg);
        const auto try_gate = [&](std::vector<Placement> body, int arity) {
            const GatePtr g = Gate::composite("f0", Program::from_placements(arity, body));
            SolutionStore rewritten;
            for (const auto &[id, set] : store) {
                rewritten[id] = SolutionSet{id, {{rewrite_with(g, set.circuits[0].circuit), 0.0}}};
            }
            return score(em_fit_theta(base.with_gate(g, 0.1), rewritten, full, cfg), rewritten,
                         full);
        };
        const double whole = try_gate({{h(), {0}}, {cnot(), {0, 1}}, {tdg(), {1}},
                                       {cnot(), {1, 0}}, {h(), {1}}},
                                      2);
        const double pair = try_gate({{h(), {0}}, {t(), {0}}}, 1);
        CHECK(pair > whole);
        // The whole solution is never even proposed.
        for (const auto &f : extract_fragments(store, 5)) {
            CHECK(f.size() < 5);
        }
        const auto r = learn_step(g0(), store, full, cfg);
        for (const auto &a : r.adopted) {
            CHECK(a.support >= 2);
        }
    }
}

} // TEST_SUITE
