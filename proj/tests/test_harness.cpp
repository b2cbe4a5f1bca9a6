#include <cmath>
#include <vector>

#include "doctest.h"
#include "ocsmatch/enumeration.hpp"
#include "ocsmatch/experiment.hpp"
#include "ocsmatch/instance.hpp"
#include "ocsmatch/lp.hpp"
#include "ocsmatch/random.hpp"
#include "test_util.hpp"

using namespace ocsmatch;
using ocsmatch_test::table1_params;
using ocsmatch_test::table2_params;

namespace {

// The textbook marginal-gain greedy, used as a floor oracle.
double greedy_value(const Instance& inst) {
    std::vector<double> kept(static_cast<std::size_t>(inst.n_offline), 0.0);
    for (const auto& arrival : inst.arrivals) {
        int best = -1;
        double best_gain = 0;
        for (const auto& [i, w] : arrival) {
            const double gain = w - kept[static_cast<std::size_t>(i)];
            if (gain > best_gain) {
                best_gain = gain;
                best = i;
            }
        }
        if (best >= 0) kept[static_cast<std::size_t>(best)] += best_gain;
    }
    double total = 0;
    for (double w : kept) total += w;
    return total;
}

}  // namespace

TEST_CASE("upper triangular generator") {
    const auto one = gen_upper_triangular(1, 0);
    CHECK(one.n_arrivals() == 1);
    CHECK(offline_opt(one) == 1.0);

    const auto three = gen_upper_triangular(3, 0);
    CHECK(offline_opt(three) == 3.0);
    CHECK(offline_opt_brute_force(three) == 3.0);

    CHECK(greedy_value(gen_upper_triangular(2, 0)) >= 1.0);
    CHECK_THROWS_AS(gen_upper_triangular(0, 0), std::invalid_argument);
}

TEST_CASE("weighted layer generator") {
    const double two_levels[] = {1.0, 2.0};
    const auto single = gen_weighted_layers(1, two_levels, 0);
    CHECK(single.n_arrivals() == 2);
    CHECK(single.arrivals[0][0].second == 1.0);
    CHECK(single.arrivals[1][0].second == 2.0);
    CHECK(offline_opt(single) == 2.0);

    const double one_level[] = {1.0};
    const auto flat = gen_weighted_layers(3, one_level, 0);
    for (const auto& arrival : flat.arrivals)
        for (const auto& [i, w] : arrival) CHECK(w == 1.0);

    const double spread[] = {1.0, 3.0};
    const auto wide = gen_weighted_layers(2, spread, 0);
    CHECK(offline_opt(wide) == 6.0);
    CHECK(offline_opt_brute_force(wide) == 6.0);

    const double bad[] = {1.0, 1.0};
    CHECK_THROWS_AS(gen_weighted_layers(2, bad, 0), std::invalid_argument);
}

TEST_CASE("offline optimum oracle") {
    Instance diag;
    diag.n_offline = 2;
    diag.arrivals = {{{0, 1.0}}, {{1, 1.0}}};
    CHECK(offline_opt(diag) == 2.0);

    Instance disposal;
    disposal.n_offline = 1;
    disposal.arrivals = {{{0, 1.0}}, {{0, 2.0}}};
    CHECK(offline_opt(disposal) == 2.0);

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto inst = gen_random(5, 5, seed);
        CHECK(offline_opt(inst) == doctest::Approx(offline_opt_brute_force(inst)).epsilon(1e-12));
    }
    // rectangular shapes too
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
        const auto inst = gen_random(3, 6, seed);
        CHECK(offline_opt(inst) == doctest::Approx(offline_opt_brute_force(inst)).epsilon(1e-12));
    }
}

TEST_CASE("instance json round trip keeps weights bit-exact") {
    const auto inst = gen_random(4, 6, 12345);
    const auto back = instance_from_json(instance_to_json(inst));
    CHECK(back == inst);
}

TEST_CASE("enumerate_ocs dispatcher and limits") {
    const std::vector<CandidatePair> one = {{0, 4, 9}};
    for (auto variant : {OcsVariant::original, OcsVariant::improved, OcsVariant::independent}) {
        const auto report = enumerate_ocs(variant, one);
        CHECK(report.path_total == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(report.marginals[0][0] == doctest::Approx(0.5).epsilon(1e-12));
        for (const auto& row : report.candidates) {
            CHECK(row.never_chosen == doctest::Approx(0.5).epsilon(1e-12));
            CHECK(row.bound == doctest::Approx(0.5).epsilon(1e-12));
        }
    }

    const std::vector<CandidatePair> twice = {{0, 0, 1}, {1, 0, 2}};
    const auto orig = enumerate_ocs(OcsVariant::original, twice);
    for (const auto& row : orig.candidates)
        CHECK(row.never_chosen <= row.bound + 1e-12);
    const auto improved = enumerate_ocs(OcsVariant::improved, twice);
    for (const auto& row : improved.candidates)
        CHECK(row.never_chosen <= row.bound + 1e-9);

    std::vector<CandidatePair> too_long;
    for (int t = 0; t < 13; ++t) too_long.push_back({t, 0, 1});
    CHECK_THROWS_AS(enumerate_ocs(OcsVariant::original, too_long), std::invalid_argument);
    too_long.resize(8);
    CHECK_THROWS_AS(enumerate_ocs(OcsVariant::improved, too_long), std::invalid_argument);
}

TEST_CASE("experiment on a single offline vertex is deterministic") {
    Instance inst;
    inst.n_offline = 1;
    inst.arrivals = {{{0, 1.0}}, {{0, 3.0}}};
    inst.meta = {"manual", 0, ""};
    const auto report = run_experiment(inst, table1_params(), OcsVariant::original, 1, 5);
    CHECK(report.mean_value == 3.0);
    CHECK(report.stderr_value == 0.0);
    CHECK(report.opt == 3.0);
    CHECK(report.deterministic_rounds == 2);
    CHECK(report.feasibility_violations == 0);
    CHECK(report.invariant_violations == 0);
}

TEST_CASE("experiment ledger bounds on the corpus") {
    const double levels[] = {0.5, 1.0, 2.0};
    const std::vector<Instance> corpus = {
        gen_upper_triangular(5, 0),
        gen_weighted_layers(3, levels, 0),
        gen_random(4, 8, 7),
    };
    for (const auto& inst : corpus) {
        for (auto variant : {OcsVariant::original, OcsVariant::improved}) {
            // solver-certified parameters: feasible to 1e-9, so the per-round
            // ledger inequality holds at the same tolerance
            const auto sol = solve_lp(build_lp(ocs_gamma(variant), 1.5, 7));
            REQUIRE(sol.status == LpStatus::optimal);
            const auto report = run_experiment(inst, sol.params, variant, 2000, 11);
            CHECK(report.feasibility_violations == 0);
            CHECK(report.invariant_violations == 0);
            CHECK(report.surrogate >= report.dual - 1e-9);
            // weak duality: D >= Gamma * OPT, so the ratio floor transfers
            CHECK(report.dual >= sol.params.Gamma * report.opt - 1e-6);
            CHECK(report.mean_value >= report.surrogate - 3 * report.stderr_value - 1e-9);
            CHECK(report.mean_value >= sol.params.Gamma * report.opt - 3 * report.stderr_value - 1e-6);
            CHECK(report.dual <= report.mean_value + 3 * report.stderr_value + 1e-6);
        }
    }
}

TEST_CASE("published tables run clean up to their own rounding") {
    // 8-digit rounding can overshoot tight constraints by ~5e-9, which shows
    // up as ledger slack of the same order; it must stay within 1e-7.
    const double levels[] = {0.5, 1.0, 2.0};
    const auto inst = gen_weighted_layers(3, levels, 0);
    for (auto variant : {OcsVariant::original, OcsVariant::improved}) {
        const auto params = variant == OcsVariant::original ? table1_params() : table2_params();
        const auto report = run_experiment(inst, params, variant, 100, 11);
        CHECK(report.worst_invariant_slack >= -1e-7);
        CHECK(report.feasibility_violations == 0);
    }
}

TEST_CASE("randomized stress: audits stay clean across seeds") {
    for (auto variant : {OcsVariant::original, OcsVariant::improved}) {
        const auto sol = solve_lp(build_lp(ocs_gamma(variant), 1.5, 7));
        REQUIRE(sol.status == LpStatus::optimal);
        for (std::uint64_t seed = 50; seed < 70; ++seed) {
            const auto inst = gen_random(5, 12, seed);
            Matcher m(inst.n_offline, sol.params, variant, seed);
            for (int j = 0; j < inst.n_arrivals(); ++j)
                m.arrive(inst.dense_row(static_cast<std::size_t>(j)));
            CHECK(m.invariant_violations() == 0);
            CHECK(m.audit_dual_feasibility(sol.params.Gamma).feasible());
            CHECK(m.surrogate_objective() >= m.dual_objective() - 1e-9);
            CHECK(m.realized_value() <= offline_opt(inst) + 1e-12);
        }
    }
}

TEST_CASE("report json round trip") {
    const auto inst = gen_upper_triangular(4, 3);
    const auto report = run_experiment(inst, table2_params(), OcsVariant::improved, 50, 17);
    const auto back = report_from_json(report_to_json(report));
    CHECK(back == report);
}

TEST_CASE("params json round trip and feasibility gate") {
    const auto p = table1_params();
    const auto text = params_to_json(p, 0.0);
    const auto back = params_from_json(text);
    CHECK(back.Gamma == p.Gamma);
    CHECK(back.a == p.a);
    CHECK(back.b == p.b);

    auto broken = p;
    broken.b[0] = 0.5;  // blows the a(0)+b(0) <= 1/2 cap
    CHECK_THROWS_AS(params_from_json(params_to_json(broken, 0.0)), std::invalid_argument);
}

TEST_CASE("split_seed is a stable pure function") {
    CHECK(split_seed(42, 0) == split_seed(42, 0));
    CHECK(split_seed(42, 0) != split_seed(42, 1));
    CHECK(split_seed(42, 5) != split_seed(43, 5));
}

TEST_CASE("round log emits one json line per arrival") {
    Instance inst = gen_upper_triangular(3, 0);
    Matcher m(inst.n_offline, table1_params(), OcsVariant::original, 1);
    for (int j = 0; j < inst.n_arrivals(); ++j) m.arrive(inst.dense_row(static_cast<std::size_t>(j)));
    const auto log = round_log_json(m);
    CHECK(std::count(log.begin(), log.end(), '\n') == 3);
    CHECK(log.find("\"kind\"") != std::string::npos);
    CHECK(log.find("\"beta\"") != std::string::npos);
}
