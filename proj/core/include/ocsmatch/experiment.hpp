#pragma once

#include <cstdint>
#include <string>

#include "ocsmatch/gain_share.hpp"
#include "ocsmatch/instance.hpp"
#include "ocsmatch/primal_dual.hpp"

namespace ocsmatch {

/// Outcome of a Monte Carlo run: the deterministic ledger quantities (the
/// matcher's decisions do not depend on the selector's bits) plus the
/// realized-value statistics across trials.
struct ExperimentReport {
    Instance::Meta instance;
    int n_offline = 0;
    int n_arrivals = 0;

    double gamma = 0;
    double kappa = 0;
    double Gamma = 0;
    int k_max = 0;
    std::string ocs_variant;

    int trials = 0;
    std::uint64_t master_seed = 0;

    double mean_value = 0;
    double stderr_value = 0;
    double surrogate = 0;  // A-bar
    double dual = 0;       // D
    double opt = 0;
    double empirical_ratio = 0;  // mean / OPT

    int randomized_rounds = 0;
    int deterministic_rounds = 0;
    int unmatched_rounds = 0;

    int feasibility_violations = 0;
    double min_feasibility_slack = 0;
    int invariant_violations = 0;
    double worst_invariant_slack = 0;

    friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

/// Runs the matcher once to fix the decision sequence, audits the duals, then
/// replays the selector over the randomized rounds `trials` times with
/// counter-split seeds.
ExperimentReport run_experiment(const Instance& instance, const GainShareParams& params,
                                OcsVariant variant, int trials, std::uint64_t master_seed);

std::string report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const std::string& text);

/// Per-round audit log as JSON lines: round id, decision kind, beta, and the
/// surrogate/dual increments.
std::string round_log_json(const Matcher& matcher);

GainShareParams params_from_json(const std::string& text);
std::string params_to_json(const GainShareParams& params, double max_violation = 0);
GainShareParams load_params(const std::string& path);

}  // namespace ocsmatch
