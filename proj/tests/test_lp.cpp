#include <chrono>
#include <cmath>

#include "doctest.h"
#include "ocsmatch/lp.hpp"
#include "test_util.hpp"

using namespace ocsmatch;

namespace {
const double kGamma1 = 1.0 / 16.0;
const double kGamma2 = 1.0 / (3.0 * std::sqrt(3.0));
}  // namespace

TEST_CASE("simplex on toy problems") {
    LpInstance lp;
    lp.objective = {1, 1};
    lp.rows.push_back({{1, 0}, LpInstance::Sense::le, 1, "x"});
    lp.rows.push_back({{0, 1}, LpInstance::Sense::le, 2, "y"});
    auto res = simplex_maximize(lp);
    REQUIRE(res.status == LpStatus::optimal);
    CHECK(res.objective == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(res.x[0] == doctest::Approx(1.0));
    CHECK(res.x[1] == doctest::Approx(2.0));

    // >= rows force phase 1
    LpInstance lp2;
    lp2.objective = {-1};
    lp2.rows.push_back({{1}, LpInstance::Sense::ge, 2, "floor"});
    res = simplex_maximize(lp2);
    REQUIRE(res.status == LpStatus::optimal);
    CHECK(res.x[0] == doctest::Approx(2.0));

    LpInstance infeasible;
    infeasible.objective = {1};
    infeasible.rows.push_back({{1}, LpInstance::Sense::le, 1, "cap"});
    infeasible.rows.push_back({{1}, LpInstance::Sense::ge, 2, "floor"});
    CHECK(simplex_maximize(infeasible).status == LpStatus::infeasible);

    LpInstance unbounded;
    unbounded.objective = {1};
    unbounded.rows.push_back({{-1}, LpInstance::Sense::le, 0, "sign"});
    CHECK(simplex_maximize(unbounded).status == LpStatus::unbounded);
}

TEST_CASE("build_lp shape") {
    const auto lp = build_lp(kGamma1, 1.5, 7);
    CHECK(lp.variable_count() == 17);  // Gamma + a(0..7) + b(0..7)
    CHECK(lp.rows.size() == 34);       // 8 + 1 + 7 + 1 + 1 + 8 + 8

    int det = 0, rand = 0, floors = 0;
    for (const auto& row : lp.rows) {
        if (row.label.starts_with("det-cap")) ++det;
        if (row.label.starts_with("rand-cap")) ++rand;
        if (row.sense == LpInstance::Sense::ge) ++floors;
    }
    CHECK(det == 8);
    CHECK(rand == 8);
    CHECK(floors == 18);  // prepay + total + 8 bystander + 8 candidate

    const auto smallest = build_lp(kGamma1, 1.5, 1);
    CHECK(smallest.variable_count() == 5);
    CHECK(smallest.rows.size() == 10);

    // gamma = 0 collapses the deterministic caps to plain powers of two
    const auto flat = build_lp(0.0, 1.5, 3);
    for (const auto& row : flat.rows)
        if (row.label.starts_with("det-cap k=2")) CHECK(row.rhs == 0.25);

    CHECK_THROWS_AS(build_lp(-0.1, 1.5, 7), std::invalid_argument);
    CHECK_THROWS_AS(build_lp(kGamma1, 2.5, 7), std::invalid_argument);
    CHECK_THROWS_AS(build_lp(kGamma1, 1.5, 0), std::invalid_argument);
}

TEST_CASE("ratio LP reproduces the gamma=1/16 optimum") {
    const auto t0 = std::chrono::steady_clock::now();
    const auto sol = solve_lp(build_lp(kGamma1, 1.5, 7));
    const auto elapsed = std::chrono::steady_clock::now() - t0;
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(std::abs(sol.params.Gamma - 0.50500053) < 1e-6);
    CHECK(std::abs(sol.params.a[0] - 0.24749974) < 1e-6);
    CHECK(std::abs(sol.params.b[0] - 0.25250026) < 1e-6);
    CHECK(sol.max_violation <= 1e-9);
    CHECK(sol.duality_gap <= 1e-9);
    CHECK(std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count() < 1000);
}

TEST_CASE("ratio LP reproduces the improved-gamma optimum") {
    const auto sol = solve_lp(build_lp(kGamma2, 1.5, 7));
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(std::abs(sol.params.Gamma - 0.51461) < 1e-4);
    CHECK(std::abs(sol.params.a[0] - 0.24269440) < 1e-6);
    CHECK(sol.max_violation <= 1e-9);
}

TEST_CASE("published parameter tables are feasible up to rounding") {
    CHECK(max_constraint_violation(ocsmatch_test::table1_params()) <= 1e-7);
    CHECK(max_constraint_violation(ocsmatch_test::table2_params()) <= 1e-7);
}

TEST_CASE("kappa endpoints collapse to one half") {
    // The analysis needs 1 < kappa < 2; at the closures of that interval the
    // optimum falls back to the greedy ratio.
    for (double kappa : {1.0, 2.0}) {
        const auto sol = solve_lp(build_lp(kGamma1, kappa, 7));
        REQUIRE(sol.status == LpStatus::optimal);
        CHECK(std::abs(sol.params.Gamma - 0.5) < 1e-6);
    }
}

TEST_CASE("kappa sweep in sixteenth steps above one") {
    std::vector<double> kappas;
    for (int l = 0; l <= 16; ++l) kappas.push_back(1.0 + l / 16.0);
    const auto sweep = kappa_sweep(kGamma1, 7, kappas);
    REQUIRE(sweep.size() == 17);
    CHECK(std::abs(sweep.front().Gamma - 0.5) < 1e-6);
    CHECK(std::abs(sweep.back().Gamma - 0.5) < 1e-6);
    CHECK(std::abs(sweep[15].Gamma - 0.5026) < 1e-3);  // kappa = 1 + 15/16
    for (int l = 2; l <= 14; ++l) CHECK(sweep[static_cast<std::size_t>(l)].Gamma > 0.505);
}

TEST_CASE("Gamma grows with the correlation strength") {
    const double g0 = solve_lp(build_lp(0.0, 1.5, 7)).params.Gamma;
    const double g1 = solve_lp(build_lp(kGamma1, 1.5, 7)).params.Gamma;
    const double g2 = solve_lp(build_lp(kGamma2, 1.5, 7)).params.Gamma;
    // at k_max = 7 the gamma = 0 optimum sits a truncation hair below 1/2
    CHECK(std::abs(g0 - 0.5) < 1e-3);
    CHECK(g0 <= 0.5 + 1e-9);
    CHECK(g1 > g0);
    CHECK(g2 > g1);
}

TEST_CASE("k_max has saturated by 7") {
    for (double gamma : {kGamma1, kGamma2}) {
        const double g7 = solve_lp(build_lp(gamma, 1.5, 7)).params.Gamma;
        const double g8 = solve_lp(build_lp(gamma, 1.5, 8)).params.Gamma;
        CHECK(g8 >= g7 - 1e-9);
        CHECK(g8 - g7 < 1e-3);
    }
}
