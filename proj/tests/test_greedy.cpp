#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "skp/bounds.hpp"
#include "skp/greedy.hpp"
#include "skp/solver.hpp"
#include "support.hpp"

using namespace skp;

namespace {

struct NodeSetup {
    std::vector<ElementId> candidates;
    std::vector<double> gains;
    std::vector<std::int32_t> prefixes;
};

// Fresh gains for `candidates` against the oracle's current anchor.
NodeSetup fresh_setup(SubmodularOracle& oracle, std::vector<ElementId> candidates) {
    NodeSetup setup;
    setup.candidates = std::move(candidates);
    for (ElementId e : setup.candidates) {
        setup.gains.push_back(oracle.anchor_gain(e));
        setup.prefixes.push_back(0);
    }
    return setup;
}

// Plain Alg.-2 replay recomputing every gain each iteration; the reference
// the lazy pool must match step for step.
GreedyTrace eager_greedy(SubmodularOracle& oracle, std::span<const ElementId> candidates,
                         std::span<const double> weights_by_id, double budget) {
    GreedyTrace trace;
    trace.selected_cum_gain.push_back(0.0);
    trace.selected_cum_weight.push_back(0.0);
    std::vector<ElementId> pool(candidates.begin(), candidates.end());
    double cum_gain = 0.0;
    double cum_weight = 0.0;
    bool all_added = true;
    while (!pool.empty()) {
        std::size_t best = 0;
        double best_gain = -1.0;
        double best_unit = -1.0;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            const double gain = clamp_gain(oracle.anchor_gain(pool[i]));
            const double unit = gain / weights_by_id[pool[i]];
            if (unit > best_unit || (unit == best_unit && pool[i] < pool[best])) {
                best = i;
                best_gain = gain;
                best_unit = unit;
            }
        }
        const ElementId e = pool[best];
        const bool fits = cum_weight + weights_by_id[e] <= budget;
        if (fits) {
            oracle.anchor_push(e);
            cum_gain += best_gain;
            cum_weight += weights_by_id[e];
            trace.selected.push_back(e);
            trace.selected_cum_gain.push_back(cum_gain);
            trace.selected_cum_weight.push_back(cum_weight);
        } else {
            all_added = false;
        }
        trace.steps.push_back({e, best_gain, fits, cum_gain, cum_weight, all_added});
        if (all_added) trace.consecutive_prefix = trace.steps.size();
        pool.erase(pool.begin() + best);
    }
    for (std::size_t i = 0; i < trace.selected.size(); ++i) oracle.anchor_pop();
    return trace;
}

bool traces_equal(const GreedyTrace& a, const GreedyTrace& b) {
    if (a.steps.size() != b.steps.size()) return false;
    for (std::size_t i = 0; i < a.steps.size(); ++i) {
        const GreedyStep& x = a.steps[i];
        const GreedyStep& y = b.steps[i];
        if (x.element != y.element || x.added != y.added || x.gain != y.gain ||
            x.cum_gain != y.cum_gain || x.cum_weight != y.cum_weight ||
            x.consecutive != y.consecutive) {
            return false;
        }
    }
    return a.selected == b.selected && a.consecutive_prefix == b.consecutive_prefix;
}

}  // namespace

TEST_CASE("greedy trace on the modular example") {
    Instance e1 = testsupport::make_e1();
    e1.oracle->anchor_clear();
    NodeSetup setup = fresh_setup(*e1.oracle, {0, 1, 2});
    const auto result = greedy_add(*e1.oracle, setup.candidates, setup.gains,
                                   setup.prefixes, e1.weights, e1.budget, false);
    const GreedyTrace& trace = result.trace;

    // a added, c examined second but too heavy, b added
    REQUIRE(trace.steps.size() == 3);
    CHECK(trace.steps[0].element == 0);
    CHECK(trace.steps[0].added);
    CHECK(trace.steps[1].element == 2);
    CHECK_FALSE(trace.steps[1].added);
    CHECK(trace.steps[2].element == 1);
    CHECK(trace.steps[2].added);
    CHECK(trace.selected == std::vector<ElementId>{0, 1});
    CHECK(trace.total_gain() == 4.0);
    CHECK(trace.consecutive_prefix == 1);
    CHECK(e1.oracle->anchor_depth() == 0);  // anchor restored
}

TEST_CASE("greedy trace on the coverage triangle") {
    Instance e2 = testsupport::make_e2();
    e2.oracle->anchor_clear();
    NodeSetup setup = fresh_setup(*e2.oracle, {0, 1, 2});
    const auto result = greedy_add(*e2.oracle, setup.candidates, setup.gains,
                                   setup.prefixes, e2.weights, e2.budget, true);
    const GreedyTrace& trace = result.trace;

    CHECK(trace.selected == std::vector<ElementId>{0, 1});  // ties break low id
    CHECK(trace.selected_cum_gain == std::vector<double>{0.0, 2.0, 3.0});
    CHECK(trace.consecutive_prefix == 2);
    CHECK(result.rs_bound_gain == doctest::Approx(3.0));  // min term, X_2
}

TEST_CASE("greedy with empty candidates") {
    Instance e2 = testsupport::make_e2();
    e2.oracle->anchor_clear();
    NodeSetup setup;
    const auto result = greedy_add(*e2.oracle, setup.candidates, setup.gains,
                                   setup.prefixes, e2.weights, e2.budget, true);
    CHECK(result.trace.steps.empty());
    CHECK(result.trace.total_gain() == 0.0);
    CHECK(result.rs_bound_gain == 0.0);
}

TEST_CASE("greedy follows the figure-style selection order") {
    // base element s1 plus three candidates with marginal values 3, 1, 2
    CovData cov;
    cov.item_count = 4;
    cov.values = {1.0, 3.0, 1.0, 2.0};
    cov.sets = {{0}, {1}, {2}, {3}};
    Instance instance =
        build_instance(ProblemKind::cov, 4, std::move(cov),
                       WeightScheme::explicit_weights, 0, {1, 1, 1, 1}, 4.0);
    SubmodularOracle& oracle = *instance.oracle;
    oracle.anchor_clear();
    oracle.anchor_push(0);  // s1 already selected

    NodeSetup setup = fresh_setup(oracle, {1, 2, 3});
    const auto result = greedy_add(oracle, setup.candidates, setup.gains,
                                   setup.prefixes, instance.weights, 3.0, false);
    CHECK(result.trace.selected == std::vector<ElementId>{1, 3, 2});  // c1, c3, c2
    CHECK(result.trace.consecutive_prefix == 3);
}

TEST_CASE("lazy pool resolves the true argmax with minimal recomputation") {
    Instance e2 = testsupport::make_e2();
    SubmodularOracle& oracle = *e2.oracle;

    SUBCASE("all keys fresh: zero recomputations") {
        oracle.anchor_clear();
        NodeSetup setup = fresh_setup(oracle, {0, 1, 2});
        LazyPool pool;
        pool.build(setup.candidates, setup.gains, setup.prefixes, e2.weights);
        const auto best = pool.pop_best(oracle, 0, setup.gains, setup.prefixes);
        REQUIRE(best.has_value());
        CHECK(best->id == 0);
        CHECK(best->gain == 2.0);
        CHECK(pool.recompute_count() == 0);
    }

    SUBCASE("stale keys after selecting C1 both refresh, lowest id wins") {
        oracle.anchor_clear();
        NodeSetup setup = fresh_setup(oracle, {1, 2});  // stale gains 2, 2
        oracle.anchor_push(0);
        LazyPool pool;
        pool.build(setup.candidates, setup.gains, setup.prefixes, e2.weights);
        const auto best = pool.pop_best(oracle, 1, setup.gains, setup.prefixes);
        REQUIRE(best.has_value());
        CHECK(best->id == 1);
        CHECK(best->gain == 1.0);
        CHECK(pool.recompute_count() == 2);
        CHECK(setup.gains == std::vector<double>{1.0, 1.0});  // written back
        oracle.anchor_pop();
    }

    SUBCASE("single stale element recomputes once") {
        oracle.anchor_clear();
        NodeSetup setup = fresh_setup(oracle, {2});
        setup.prefixes[0] = -1;
        LazyPool pool;
        pool.build(setup.candidates, setup.gains, setup.prefixes, e2.weights);
        const auto best = pool.pop_best(oracle, 0, setup.gains, setup.prefixes);
        REQUIRE(best.has_value());
        CHECK(best->id == 2);
        CHECK(pool.recompute_count() == 1);
        CHECK_FALSE(pool.pop_best(oracle, 0, {}, {}).has_value());  // empty pool
    }
}

TEST_CASE("lazy and eager greedy produce identical traces") {
    auto suite = testsupport::small_random_suite(6, 91);
    for (Instance& instance : suite) {
        SubmodularOracle& oracle = *instance.oracle;
        std::vector<ElementId> all;
        for (std::size_t i = 0; i < instance.n; ++i) {
            all.push_back(static_cast<ElementId>(i));
        }
        oracle.anchor_clear();
        const GreedyTrace eager =
            eager_greedy(oracle, all, instance.weights, instance.budget);

        oracle.anchor_clear();
        NodeSetup setup = fresh_setup(oracle, all);
        const auto lazy = greedy_add(oracle, setup.candidates, setup.gains,
                                     setup.prefixes, instance.weights,
                                     instance.budget, false);
        CAPTURE(to_string(instance.kind));
        CHECK(traces_equal(eager, lazy.trace));
        CHECK(lazy.trace.total_weight() <= instance.budget);  // feasibility
    }
}

TEST_CASE("greedy plus best singleton meets the approximation guarantee") {
    auto suite = testsupport::small_random_suite(6, 17);
    const double alpha = greedy_approximation_ratio();
    for (Instance& instance : suite) {
        SubmodularOracle& oracle = *instance.oracle;
        oracle.anchor_clear();
        std::vector<ElementId> all;
        for (std::size_t i = 0; i < instance.n; ++i) {
            all.push_back(static_cast<ElementId>(i));
        }
        NodeSetup setup = fresh_setup(oracle, all);
        double best_singleton = 0.0;
        for (std::size_t i = 0; i < all.size(); ++i) {
            if (instance.weights[i] <= instance.budget) {
                best_singleton = std::max(best_singleton, setup.gains[i]);
            }
        }
        const auto greedy = greedy_add(oracle, setup.candidates, setup.gains,
                                       setup.prefixes, instance.weights,
                                       instance.budget, false);
        const auto [opt, set] = brute_force(oracle, instance.weights, instance.budget);
        const double achieved = std::max(greedy.trace.total_gain(), best_singleton);
        CAPTURE(to_string(instance.kind));
        CHECK(achieved >= alpha * opt - 1e-9);
    }
}
