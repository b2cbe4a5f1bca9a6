#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ocsmatch/gain_share.hpp"
#include "ocsmatch/ocs.hpp"
#include "ocsmatch/step_function.hpp"

namespace ocsmatch {

/// Per-offline-vertex bookkeeping in the CCDF viewpoint. All three functions
/// share breakpoints drawn from the incident edge weights:
///   k       candidate count per weight level (sentinel after a deterministic
///           match at that level),
///   alpha   offline dual share per weight level,
///   y_bar   certified lower bound on the match CCDF,
///   w_last  edge weight of the most recent randomized round featuring this
///           vertex (0 if none), which splits levels into "continuing" and
///           "fresh" parts of a consecutive sequence.
struct OfflineState {
    StepFunction<CandidateCount> k;
    StepFunction<double> alpha;
    StepFunction<double> y_bar;
    double w_last = 0;
};

/// Contribution of offline vertex `state` to the online dual if this round
/// were randomized with the vertex as a candidate at edge weight w:
/// integral of b(k(w)) below the edge weight, minus half the prepaid alpha
/// mass above it.
double delta_r_beta(const OfflineState& state, double weight, const GainShareParams& params);

/// kappa-scaled variant used for deterministic rounds.
double delta_d_beta(const OfflineState& state, double weight, const GainShareParams& params);

struct RoundDecision {
    enum class Kind { randomized, deterministic, unmatched };

    Kind kind = Kind::unmatched;
    OfflineId first = -1;       // randomized candidates, ordered by rule
    OfflineId second = -1;
    OfflineId matched = -1;     // selector pick / deterministic target, -1 if none
    double beta = 0;
    std::vector<double> delta_r;  // per offline vertex, for audit
    std::vector<double> delta_d;
    double surrogate_gain = 0;  // increment in A-bar this round
    double dual_gain = 0;       // increment in D this round
};

const char* round_kind_name(RoundDecision::Kind kind);

struct FeasibilityViolation {
    OfflineId offline = 0;
    int round = 0;
    double slack = 0;  // alpha_i + beta_j - Gamma * w_ij (negative when violated)
};

struct FeasibilityReport {
    double Gamma = 0;
    double min_slack = 0;
    std::vector<FeasibilityViolation> violations;

    bool feasible() const { return violations.empty(); }
};

/// Edge-weighted online matcher with free disposal. Rounds are decided from
/// the dual increments alone, so for a fixed instance the decision sequence,
/// the surrogate objective and the duals are deterministic; the injected
/// selector randomness only moves the realized matching.
class Matcher {
public:
    Matcher(int n_offline, GainShareParams params, OcsVariant variant, std::uint64_t seed);

    /// Processes one online arrival given its dense weight row
    /// (missing edges are weight 0).
    const RoundDecision& arrive(std::span<const double> weights);

    int offline_count() const { return static_cast<int>(states_.size()); }
    int rounds_seen() const { return static_cast<int>(decisions_.size()); }

    const OfflineState& offline_state(OfflineId i) const { return states_.at(static_cast<std::size_t>(i)); }
    const std::vector<RoundDecision>& decisions() const { return decisions_; }
    const GainShareParams& params() const { return params_; }

    double surrogate_objective() const { return surrogate_; }  // A-bar
    double dual_objective() const { return dual_; }            // D
    /// Total weight kept under free disposal: per offline vertex, the
    /// heaviest edge actually assigned to it so far.
    double realized_value() const;

    /// Count of rounds where a maintained invariant failed beyond tolerance
    /// (surrogate gain covering the dual gain, alpha floor, y_bar floor).
    /// Zero on a correct run with feasible parameters.
    int invariant_violations() const { return invariant_violations_; }
    double worst_invariant_slack() const { return worst_invariant_slack_; }

    /// alpha_i + beta_j >= Gamma * w_ij - tol over every offline vertex and
    /// every arrival seen, with final alpha and the beta recorded per round.
    FeasibilityReport audit_dual_feasibility(double Gamma, double tol = 1e-9) const;
    FeasibilityReport audit_dual_feasibility() const;

private:
    struct CandidateGains {
        double surrogate = 0;
        double alpha = 0;
    };
    CandidateGains apply_randomized(OfflineId i, double weight);
    void apply_deterministic(OfflineId i, double weight);
    void check_offline_invariants(const OfflineState& state);
    void note_slack(double slack);

    GainShareParams params_;
    std::vector<OfflineState> states_;
    std::unique_ptr<SelectionSession> selector_;
    std::vector<RoundDecision> decisions_;
    std::vector<std::vector<double>> arrivals_;   // dense weight rows, for audit
    std::vector<double> heaviest_matched_;
    double surrogate_ = 0;
    double dual_ = 0;
    int invariant_violations_ = 0;
    double worst_invariant_slack_ = 0;
    static constexpr double kTol = 1e-9;
};

}  // namespace ocsmatch
