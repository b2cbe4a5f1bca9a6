#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "ocsmatch/step_function.hpp"

using ocsmatch::CandidateCount;
using ocsmatch::StepFunction;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

StepFunction<double> two_piece() {
    // 1 on (0,1], 0.5 on (1,3], 0 above
    return StepFunction<double>({1.0, 3.0}, {1.0, 0.5}, 0.0);
}

StepFunction<double> random_fn(std::mt19937& gen, int max_pieces = 5) {
    std::uniform_int_distribution<int> n_pieces(0, max_pieces);
    std::uniform_real_distribution<double> val(0.0, 1.0);
    const int n = n_pieces(gen);
    std::vector<double> breaks, values;
    double w = 0;
    for (int t = 0; t < n; ++t) {
        w += 0.25 * (1 + static_cast<double>(gen() % 8));
        breaks.push_back(w);
        values.push_back(val(gen));
    }
    return StepFunction<double>(std::move(breaks), std::move(values), 0.0);
}

}  // namespace

TEST_CASE("integrate on basic shapes") {
    CHECK(StepFunction<double>{}.integrate() == 0.0);
    CHECK(StepFunction<double>::box(1.0, 1.0).integrate() == 1.0);
    CHECK(two_piece().integrate() == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("integrate_range slices") {
    const auto box = StepFunction<double>::box(1.0, 1.0);
    CHECK(box.integrate_range(0.0, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(box.integrate_range(1.0, kInf) == 0.0);
    CHECK(two_piece().integrate_range(1.0, 3.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("integrate errors") {
    const StepFunction<double> nonzero_tail({1.0}, {0.5}, 1.0);
    CHECK_THROWS_WITH_AS(nonzero_tail.integrate(), "unbounded integral", std::domain_error);
    const StepFunction<double> with_inf({1.0}, {kInf}, 0.0);
    CHECK_THROWS_WITH_AS(with_inf.integrate(), "non-numeric function", std::domain_error);
    CHECK_THROWS_AS(two_piece().integrate_range(2.0, 1.0), std::invalid_argument);
}

TEST_CASE("integrate equals full range and is additive") {
    std::mt19937 gen(7);
    for (int rep = 0; rep < 200; ++rep) {
        const auto f = random_fn(gen);
        CHECK(f.integrate() == doctest::Approx(f.integrate_range(0.0, kInf)).epsilon(1e-13));
        const double mid = 0.25 * (1 + static_cast<double>(gen() % 16));
        const double hi = mid + 0.25 * (static_cast<double>(gen() % 16));
        const double split = f.integrate_range(0.0, mid) + f.integrate_range(mid, hi);
        CHECK(split == doctest::Approx(f.integrate_range(0.0, hi)).epsilon(1e-12));
    }
}

TEST_CASE("transform_below") {
    const auto bumped = StepFunction<double>{}.transform_below(2.0, [](double v) { return v + 1; });
    CHECK(bumped == StepFunction<double>::box(2.0, 1.0));

    const auto same = two_piece().transform_below(1.5, [](double v) { return v; });
    CHECK(same == two_piece());

    // k-style function: 1 on (0,3]; +1 below 2 inserts a breakpoint.
    const StepFunction<CandidateCount> k({3.0}, {CandidateCount(1)}, CandidateCount(0));
    const auto k2 = k.transform_below(2.0, [](CandidateCount c) { return c.incremented(); });
    const StepFunction<CandidateCount> expected({2.0, 3.0}, {CandidateCount(2), CandidateCount(1)},
                                                CandidateCount(0));
    CHECK(k2 == expected);
}

TEST_CASE("transform_below keeps non-increasing for inflating monotone maps") {
    std::mt19937 gen(11);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> breaks, values;
        double w = 0;
        const int n = static_cast<int>(gen() % 5);
        for (int t = 0; t < n; ++t) {
            w += 0.5 * (1 + static_cast<double>(gen() % 4));
            breaks.push_back(w);
        }
        double v = 1.0;
        for (int t = 0; t < n; ++t) {
            values.push_back(v);
            v *= 0.5;
        }
        StepFunction<double> f(std::move(breaks), std::move(values), 0.0);
        REQUIRE(f.non_increasing());
        const double at = 0.5 * (1 + static_cast<double>(gen() % 10));
        const auto g = f.transform_below(at, [](double x) { return 0.5 * (1 + x); });  // monotone, >= x on [0,1]
        CHECK(g.non_increasing());
    }
}

TEST_CASE("canonical form makes equal functions equal as data") {
    const StepFunction<double> a({1.0, 2.0, 3.0}, {1.0, 1.0, 0.5}, 0.0);
    const StepFunction<double> b({2.0, 3.0}, {1.0, 0.5}, 0.0);
    CHECK(a == b);

    const StepFunction<double> c({1.0, 2.0}, {0.5, 0.0}, 0.0);  // trailing piece equals tail
    const StepFunction<double> d({1.0}, {0.5}, 0.0);
    CHECK(c == d);

    const StepFunction<double> e({0.0, 1.0}, {3.0, 1.0}, 0.0);  // empty (0,0] piece
    CHECK(e == StepFunction<double>::box(1.0, 1.0));
}

TEST_CASE("constructor rejects malformed input") {
    CHECK_THROWS_AS(StepFunction<double>({2.0, 1.0}, {1.0, 1.0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(StepFunction<double>({-1.0}, {1.0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(StepFunction<double>({1.0}, {1.0, 2.0}, 0.0), std::invalid_argument);
}

TEST_CASE("at() lookup and piece count bound") {
    const auto f = two_piece();
    CHECK(f.at(0.5) == 1.0);
    CHECK(f.at(1.0) == 1.0);
    CHECK(f.at(1.0000001) == 0.5);
    CHECK(f.at(3.0) == 0.5);
    CHECK(f.at(3.5) == 0.0);
    CHECK(f.piece_count() == 2);
}

TEST_CASE("zip_map classifies pieces by upper endpoint") {
    const auto f = two_piece();
    const StepFunction<CandidateCount> k({2.0}, {CandidateCount(1)}, CandidateCount(0));
    const double threshold[] = {2.0};
    const auto sum = ocsmatch::zip_map(f, k, threshold, [](double hi, double v, CandidateCount c) {
        return hi <= 2.0 ? v + static_cast<double>(c.count()) : v;
    });
    CHECK(sum.at(0.5) == 2.0);
    CHECK(sum.at(1.5) == 1.5);
    CHECK(sum.at(2.5) == 0.5);
    CHECK(sum.tail() == 0.0);
}

TEST_CASE("CandidateCount ordering and saturation") {
    CHECK(CandidateCount(0) < CandidateCount(3));
    CHECK(CandidateCount(3) < CandidateCount::infinity());
    CHECK_FALSE(CandidateCount::infinity() < CandidateCount::infinity());
    CHECK(CandidateCount::infinity().incremented() == CandidateCount::infinity());
    CHECK(CandidateCount(1).incremented() == CandidateCount(2));
    CHECK_THROWS_AS(CandidateCount::infinity().count(), std::logic_error);
}
