#pragma once

#include <span>
#include <string>
#include <vector>

#include "ocsmatch/gain_share.hpp"

namespace ocsmatch {

/// Generic dense LP: optimize c'x subject to the rows and x >= 0.
/// Variables here are Gamma, a(0..k_max), b(0..k_max), in that order.
struct LpInstance {
    enum class Sense { le, ge };

    struct Row {
        std::vector<double> coeffs;
        Sense sense = Sense::le;
        double rhs = 0;
        std::string label;
    };

    std::vector<double> objective;  // maximized
    std::vector<Row> rows;
    double gamma = 0;
    double kappa = 0;
    int k_max = 0;

    std::size_t variable_count() const { return objective.size(); }
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    GainShareParams params;
    double objective = 0;
    double max_violation = 0;   // worst primal constraint violation, post-hoc
    double duality_gap = 0;     // |c'x - b'y| from the simplex certificate
};

/// Rows exactly as the ratio LP displays them, for the given gamma, kappa and
/// truncation level: the deterministic-round cap, the two randomized-round
/// split caps, the prepay floor a(0) >= gamma/2, and the three feasibility
/// floors. 4*k_max + 6 rows in total.
LpInstance build_lp(double gamma, double kappa, int k_max);

/// Dense two-phase simplex (Bland's rule, long-double accumulation); the
/// solution is re-verified against every row before it is returned.
LpSolution solve_lp(const LpInstance& lp);

/// Worst violation of the ratio-LP rows by an existing parameter vector
/// (0 when every row holds).
double max_constraint_violation(const GainShareParams& params);

struct KappaSweepEntry {
    double kappa = 0;
    double Gamma = 0;
};

std::vector<KappaSweepEntry> kappa_sweep(double gamma, int k_max, std::span<const double> kappas);

/// Generic simplex entry point used by solve_lp; exposed for tests.
struct SimplexResult {
    LpStatus status = LpStatus::infeasible;
    std::vector<double> x;
    double objective = 0;
    std::vector<double> duals;  // one per row, certificate of optimality
};

SimplexResult simplex_maximize(const LpInstance& lp);

}  // namespace ocsmatch
