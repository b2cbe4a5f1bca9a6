#include "ocsmatch/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ocsmatch {

namespace {

constexpr long double kPivotEps = 1e-11L;

struct Tableau {
    // rows 0..m-1 are constraints, row m is (z_j - c_j); last column is rhs.
    std::vector<std::vector<long double>> t;
    std::vector<int> basis;
    std::size_t m = 0;
    std::size_t cols = 0;

    long double& at(std::size_t r, std::size_t c) { return t[r][c]; }

    void pivot(std::size_t row, std::size_t col) {
        const long double p = t[row][col];
        for (auto& v : t[row]) v /= p;
        for (std::size_t r = 0; r <= m; ++r) {
            if (r == row) continue;
            const long double f = t[r][col];
            if (f == 0) continue;
            for (std::size_t c = 0; c < cols; ++c) t[r][c] -= f * t[row][c];
        }
        basis[row] = static_cast<int>(col);
    }

    // Bland's rule; `allowed(j)` filters entering candidates.
    template <typename Allowed>
    bool run(Allowed&& allowed) {
        for (;;) {
            std::size_t enter = cols;
            for (std::size_t j = 0; j + 1 < cols; ++j) {
                if (!allowed(j)) continue;
                if (t[m][j] < -kPivotEps) {
                    enter = j;
                    break;
                }
            }
            if (enter == cols) return true;  // optimal
            std::size_t leave = m;
            long double best_ratio = 0;
            for (std::size_t r = 0; r < m; ++r) {
                if (t[r][enter] <= kPivotEps) continue;
                const long double ratio = t[r][cols - 1] / t[r][enter];
                if (leave == m || ratio < best_ratio ||
                    (ratio == best_ratio && basis[r] < basis[leave])) {
                    leave = r;
                    best_ratio = ratio;
                }
            }
            if (leave == m) return false;  // unbounded direction
            pivot(leave, enter);
        }
    }
};

}  // namespace

SimplexResult simplex_maximize(const LpInstance& lp) {
    const std::size_t n = lp.variable_count();
    const std::size_t m = lp.rows.size();

    // Standardize to a x + s = b with b >= 0; flipped rows get an artificial.
    std::vector<std::vector<long double>> a(m, std::vector<long double>(n, 0));
    std::vector<long double> b(m);
    std::vector<int> flipped(m, 0);
    for (std::size_t r = 0; r < m; ++r) {
        const auto& row = lp.rows[r];
        if (row.coeffs.size() != n) throw std::invalid_argument("simplex: row width mismatch");
        const long double sign = row.sense == LpInstance::Sense::le ? 1 : -1;
        for (std::size_t j = 0; j < n; ++j) a[r][j] = sign * row.coeffs[j];
        b[r] = sign * row.rhs;
        if (b[r] < 0) {
            for (auto& v : a[r]) v = -v;
            b[r] = -b[r];
            flipped[r] = 1;
        }
    }

    std::vector<std::size_t> artificial_rows;
    for (std::size_t r = 0; r < m; ++r)
        if (flipped[r]) artificial_rows.push_back(r);
    const std::size_t n_art = artificial_rows.size();

    Tableau tab;
    tab.m = m;
    tab.cols = n + m + n_art + 1;
    tab.t.assign(m + 1, std::vector<long double>(tab.cols, 0));
    tab.basis.assign(m, -1);

    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t j = 0; j < n; ++j) tab.at(r, j) = a[r][j];
        tab.at(r, n + r) = flipped[r] ? -1 : 1;  // slack
        tab.at(r, tab.cols - 1) = b[r];
    }
    for (std::size_t i = 0; i < n_art; ++i) {
        tab.at(artificial_rows[i], n + m + i) = 1;
        tab.basis[artificial_rows[i]] = static_cast<int>(n + m + i);
    }
    for (std::size_t r = 0; r < m; ++r)
        if (tab.basis[r] < 0) tab.basis[r] = static_cast<int>(n + r);

    const auto structural_or_slack = [&](std::size_t j) { return j < n + m; };

    SimplexResult result;
    if (n_art > 0) {
        // Phase 1: maximize -sum(artificials); infeasible if the optimum < 0.
        for (std::size_t i = 0; i < n_art; ++i) tab.at(m, n + m + i) = 1;  // -c_j with c = -1
        for (std::size_t r : artificial_rows)
            for (std::size_t c = 0; c < tab.cols; ++c) tab.at(m, c) -= tab.t[r][c];

        if (!tab.run([](std::size_t) { return true; }))
            throw std::logic_error("simplex: phase 1 unbounded");
        if (tab.at(m, tab.cols - 1) < -1e-9L) {
            result.status = LpStatus::infeasible;
            return result;
        }
        // Drive leftover artificials out of the basis where possible.
        for (std::size_t r = 0; r < m; ++r) {
            if (tab.basis[r] < static_cast<int>(n + m)) continue;
            for (std::size_t j = 0; j < n + m; ++j) {
                if (std::abs(static_cast<double>(tab.t[r][j])) > static_cast<double>(kPivotEps)) {
                    tab.pivot(r, j);
                    break;
                }
            }
        }
    }

    // Phase 2 objective row: z_j - c_j from the current basis.
    for (std::size_t c = 0; c < tab.cols; ++c) tab.at(m, c) = 0;
    for (std::size_t j = 0; j < n; ++j) tab.at(m, j) = -static_cast<long double>(lp.objective[j]);
    for (std::size_t r = 0; r < m; ++r) {
        const int bj = tab.basis[r];
        if (bj < static_cast<int>(n)) {
            const long double cb = lp.objective[static_cast<std::size_t>(bj)];
            if (cb != 0)
                for (std::size_t c = 0; c < tab.cols; ++c) tab.at(m, c) += cb * tab.t[r][c];
        }
    }

    if (!tab.run(structural_or_slack)) {
        result.status = LpStatus::unbounded;
        return result;
    }

    result.status = LpStatus::optimal;
    result.x.assign(n, 0);
    for (std::size_t r = 0; r < m; ++r)
        if (tab.basis[r] >= 0 && tab.basis[r] < static_cast<int>(n))
            result.x[static_cast<std::size_t>(tab.basis[r])] =
                static_cast<double>(tab.t[r][tab.cols - 1]);
    result.objective = static_cast<double>(tab.at(m, tab.cols - 1));

    // Duals read off the slack columns; flip back the sign of flipped rows and
    // of >= rows so they refer to the instance as given.
    result.duals.assign(m, 0);
    for (std::size_t r = 0; r < m; ++r) {
        long double y = tab.at(m, n + r);
        if (flipped[r]) y = -y;
        if (lp.rows[r].sense == LpInstance::Sense::ge) y = -y;
        result.duals[r] = static_cast<double>(y);
    }
    return result;
}

LpInstance build_lp(double gamma, double kappa, int k_max) {
    if (!(gamma >= 0 && gamma <= 1)) throw std::invalid_argument("build_lp: gamma outside [0,1]");
    if (!(kappa >= 0 && kappa <= 2)) throw std::invalid_argument("build_lp: kappa outside [0,2]");
    if (k_max < 1) throw std::invalid_argument("build_lp: k_max must be >= 1");

    LpInstance lp;
    lp.gamma = gamma;
    lp.kappa = kappa;
    lp.k_max = k_max;

    const std::size_t n = 1 + 2 * (static_cast<std::size_t>(k_max) + 1);
    const std::size_t var_Gamma = 0;
    const auto var_a = [&](int k) { return 1 + static_cast<std::size_t>(k); };
    const auto var_b = [&](int k) { return 1 + static_cast<std::size_t>(k_max) + 1 + static_cast<std::size_t>(k); };

    lp.objective.assign(n, 0);
    lp.objective[var_Gamma] = 1;

    const auto fresh_row = [&](LpInstance::Sense sense, double rhs, std::string label) {
        LpInstance::Row row;
        row.coeffs.assign(n, 0);
        row.sense = sense;
        row.rhs = rhs;
        row.label = std::move(label);
        return row;
    };

    // Deterministic-round cap: sum_{l=k}^{k_max} a(l) + kappa b(k) <= 2^{-k}(1-gamma)^{max(k-1,0)}.
    for (int k = 0; k <= k_max; ++k) {
        auto row = fresh_row(LpInstance::Sense::le,
                             std::pow(0.5, k) * std::pow(1.0 - gamma, std::max(k - 1, 0)),
                             "det-cap k=" + std::to_string(k));
        for (int l = k; l <= k_max; ++l) row.coeffs[var_a(l)] = 1;
        row.coeffs[var_b(k)] = kappa;
        lp.rows.push_back(std::move(row));
    }

    // Randomized-round split caps.
    {
        auto row = fresh_row(LpInstance::Sense::le, 0.5, "rand-cap k=0");
        row.coeffs[var_a(0)] = 1;
        row.coeffs[var_b(0)] = 1;
        lp.rows.push_back(std::move(row));
    }
    for (int k = 1; k <= k_max; ++k) {
        auto row = fresh_row(LpInstance::Sense::le,
                             std::pow(0.5, k + 1) * std::pow(1.0 - gamma, k - 1) * (1.0 + gamma),
                             "rand-cap k=" + std::to_string(k));
        row.coeffs[var_a(k)] = 1;
        row.coeffs[var_b(k)] = 1;
        lp.rows.push_back(std::move(row));
    }

    // Prepay floor.
    {
        auto row = fresh_row(LpInstance::Sense::ge, gamma / 2.0, "prepay-floor");
        row.coeffs[var_a(0)] = 1;
        lp.rows.push_back(std::move(row));
    }

    // Exhausted-vertex floor: sum of all a(l) >= Gamma.
    {
        auto row = fresh_row(LpInstance::Sense::ge, 0, "alpha-total-floor");
        for (int l = 0; l <= k_max; ++l) row.coeffs[var_a(l)] = 1;
        row.coeffs[var_Gamma] = -1;
        lp.rows.push_back(std::move(row));
    }

    // Feasibility floors for a bystander / candidate vertex.
    for (int k = 0; k <= k_max; ++k) {
        auto row = fresh_row(LpInstance::Sense::ge, 0, "bystander-floor k=" + std::to_string(k));
        for (int l = 0; l < k; ++l) row.coeffs[var_a(l)] = 1;
        row.coeffs[var_b(k)] = 2;
        row.coeffs[var_Gamma] = -1;
        lp.rows.push_back(std::move(row));
    }
    for (int k = 0; k <= k_max; ++k) {
        auto row = fresh_row(LpInstance::Sense::ge, 0, "candidate-floor k=" + std::to_string(k));
        for (int l = 0; l <= k; ++l) row.coeffs[var_a(l)] = 1;
        row.coeffs[var_b(k)] = kappa;
        row.coeffs[var_Gamma] = -1;
        lp.rows.push_back(std::move(row));
    }

    return lp;
}

namespace {

double evaluate_violation(const LpInstance& lp, std::span<const double> x) {
    double worst = 0;
    for (const auto& row : lp.rows) {
        double lhs = 0;
        for (std::size_t j = 0; j < row.coeffs.size(); ++j) lhs += row.coeffs[j] * x[j];
        const double v = row.sense == LpInstance::Sense::le ? lhs - row.rhs : row.rhs - lhs;
        worst = std::max(worst, v);
    }
    for (double v : x) worst = std::max(worst, -v);
    return worst;
}

std::vector<double> pack_variables(const GainShareParams& p) {
    std::vector<double> x;
    x.reserve(1 + p.a.size() + p.b.size());
    x.push_back(p.Gamma);
    x.insert(x.end(), p.a.begin(), p.a.end());
    x.insert(x.end(), p.b.begin(), p.b.end());
    return x;
}

}  // namespace

LpSolution solve_lp(const LpInstance& lp) {
    LpSolution sol;
    const SimplexResult res = simplex_maximize(lp);
    sol.status = res.status;
    if (res.status != LpStatus::optimal) return sol;

    sol.objective = res.objective;
    const auto km = static_cast<std::size_t>(lp.k_max);
    sol.params.gamma = lp.gamma;
    sol.params.kappa = lp.kappa;
    sol.params.k_max = lp.k_max;
    sol.params.Gamma = res.x[0];
    sol.params.a.assign(res.x.begin() + 1, res.x.begin() + 2 + km);
    sol.params.b.assign(res.x.begin() + 2 + static_cast<std::ptrdiff_t>(km), res.x.end());

    sol.max_violation = evaluate_violation(lp, res.x);

    double dual_value = 0;
    for (std::size_t r = 0; r < lp.rows.size(); ++r) dual_value += res.duals[r] * lp.rows[r].rhs;
    sol.duality_gap = std::abs(dual_value - res.objective);
    return sol;
}

double max_constraint_violation(const GainShareParams& params) {
    params.require_consistent();
    const LpInstance lp = build_lp(params.gamma, params.kappa, params.k_max);
    return evaluate_violation(lp, pack_variables(params));
}

std::vector<KappaSweepEntry> kappa_sweep(double gamma, int k_max, std::span<const double> kappas) {
    std::vector<KappaSweepEntry> sweep;
    sweep.reserve(kappas.size());
    for (double kappa : kappas) {
        const LpSolution sol = solve_lp(build_lp(gamma, kappa, k_max));
        sweep.push_back({kappa, sol.status == LpStatus::optimal
                                    ? sol.params.Gamma
                                    : std::numeric_limits<double>::quiet_NaN()});
    }
    return sweep;
}

}  // namespace ocsmatch
