#include "ocsmatch/experiment.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ocsmatch/lp.hpp"
#include "ocsmatch/random.hpp"
#include "json.hpp"

namespace ocsmatch {

ExperimentReport run_experiment(const Instance& instance, const GainShareParams& params,
                                OcsVariant variant, int trials, std::uint64_t master_seed) {
    if (trials < 1) throw std::invalid_argument("run_experiment: trials must be >= 1");
    instance.require_valid();

    ExperimentReport report;
    report.instance = instance.meta;
    report.n_offline = instance.n_offline;
    report.n_arrivals = instance.n_arrivals();
    report.gamma = params.gamma;
    report.kappa = params.kappa;
    report.Gamma = params.Gamma;
    report.k_max = params.k_max;
    report.ocs_variant = ocs_variant_name(variant);
    report.trials = trials;
    report.master_seed = master_seed;

    // Template run: decisions, duals and the audit are the same in every
    // trial, so run the matcher once and keep the pair sequence.
    Matcher matcher(instance.n_offline, params, variant, split_seed(master_seed, 0));
    struct RandRound {
        int round;
        CandidatePair pair;
        double w_first, w_second;
    };
    std::vector<RandRound> randomized;
    std::vector<std::pair<OfflineId, double>> fixed_matches;
    for (int j = 0; j < instance.n_arrivals(); ++j) {
        const auto row = instance.dense_row(static_cast<std::size_t>(j));
        const RoundDecision& d = matcher.arrive(row);
        switch (d.kind) {
            case RoundDecision::Kind::randomized:
                randomized.push_back({j,
                                      {j, d.first, d.second},
                                      row[static_cast<std::size_t>(d.first)],
                                      row[static_cast<std::size_t>(d.second)]});
                ++report.randomized_rounds;
                break;
            case RoundDecision::Kind::deterministic:
                fixed_matches.emplace_back(d.matched, row[static_cast<std::size_t>(d.matched)]);
                ++report.deterministic_rounds;
                break;
            case RoundDecision::Kind::unmatched: ++report.unmatched_rounds; break;
        }
    }

    report.surrogate = matcher.surrogate_objective();
    report.dual = matcher.dual_objective();
    report.invariant_violations = matcher.invariant_violations();
    report.worst_invariant_slack = matcher.worst_invariant_slack();
    const FeasibilityReport audit = matcher.audit_dual_feasibility();
    report.feasibility_violations = static_cast<int>(audit.violations.size());
    report.min_feasibility_slack = audit.min_slack;
    report.opt = offline_opt(instance);

    // Trials: replay only the selector over the fixed pair sequence.
    double sum = 0, sum_sq = 0;
    std::vector<double> heaviest(static_cast<std::size_t>(instance.n_offline));
    for (int t = 0; t < trials; ++t) {
        auto selector = make_selection_session(variant, split_seed(master_seed, static_cast<std::uint64_t>(t) + 1));
        heaviest.assign(heaviest.size(), 0.0);
        for (const auto& [i, w] : fixed_matches)
            heaviest[static_cast<std::size_t>(i)] = std::max(heaviest[static_cast<std::size_t>(i)], w);
        for (const auto& rr : randomized) {
            const OfflineId chosen = selector->select(rr.pair);
            const double w = chosen == rr.pair.first ? rr.w_first : rr.w_second;
            heaviest[static_cast<std::size_t>(chosen)] = std::max(heaviest[static_cast<std::size_t>(chosen)], w);
        }
        double value = 0;
        for (double w : heaviest) value += w;
        sum += value;
        sum_sq += value * value;
    }
    report.mean_value = sum / trials;
    if (trials > 1) {
        const double var = std::max(0.0, (sum_sq - sum * sum / trials) / (trials - 1));
        report.stderr_value = std::sqrt(var / trials);
    }
    report.empirical_ratio = report.opt > 0 ? report.mean_value / report.opt : 0.0;
    return report;
}

std::string report_to_json(const ExperimentReport& r) {
    nlohmann::json j;
    j["instance"] = {{"generator", r.instance.generator}, {"seed", r.instance.seed}, {"params", r.instance.params}};
    j["n_offline"] = r.n_offline;
    j["n_arrivals"] = r.n_arrivals;
    j["gamma"] = r.gamma;
    j["kappa"] = r.kappa;
    j["Gamma"] = r.Gamma;
    j["k_max"] = r.k_max;
    j["ocs_variant"] = r.ocs_variant;
    j["trials"] = r.trials;
    j["master_seed"] = r.master_seed;
    j["mean_value"] = r.mean_value;
    j["stderr_value"] = r.stderr_value;
    j["surrogate"] = r.surrogate;
    j["dual"] = r.dual;
    j["opt"] = r.opt;
    j["empirical_ratio"] = r.empirical_ratio;
    j["randomized_rounds"] = r.randomized_rounds;
    j["deterministic_rounds"] = r.deterministic_rounds;
    j["unmatched_rounds"] = r.unmatched_rounds;
    j["feasibility_violations"] = r.feasibility_violations;
    j["min_feasibility_slack"] = r.min_feasibility_slack;
    j["invariant_violations"] = r.invariant_violations;
    j["worst_invariant_slack"] = r.worst_invariant_slack;
    return j.dump(2);
}

ExperimentReport report_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    ExperimentReport r;
    r.instance.generator = j.at("instance").value("generator", "");
    r.instance.seed = j.at("instance").value("seed", std::uint64_t{0});
    r.instance.params = j.at("instance").value("params", "");
    r.n_offline = j.at("n_offline").get<int>();
    r.n_arrivals = j.at("n_arrivals").get<int>();
    r.gamma = j.at("gamma").get<double>();
    r.kappa = j.at("kappa").get<double>();
    r.Gamma = j.at("Gamma").get<double>();
    r.k_max = j.at("k_max").get<int>();
    r.ocs_variant = j.at("ocs_variant").get<std::string>();
    r.trials = j.at("trials").get<int>();
    r.master_seed = j.at("master_seed").get<std::uint64_t>();
    r.mean_value = j.at("mean_value").get<double>();
    r.stderr_value = j.at("stderr_value").get<double>();
    r.surrogate = j.at("surrogate").get<double>();
    r.dual = j.at("dual").get<double>();
    r.opt = j.at("opt").get<double>();
    r.empirical_ratio = j.at("empirical_ratio").get<double>();
    r.randomized_rounds = j.at("randomized_rounds").get<int>();
    r.deterministic_rounds = j.at("deterministic_rounds").get<int>();
    r.unmatched_rounds = j.at("unmatched_rounds").get<int>();
    r.feasibility_violations = j.at("feasibility_violations").get<int>();
    r.min_feasibility_slack = j.at("min_feasibility_slack").get<double>();
    r.invariant_violations = j.at("invariant_violations").get<int>();
    r.worst_invariant_slack = j.at("worst_invariant_slack").get<double>();
    return r;
}

std::string round_log_json(const Matcher& matcher) {
    std::ostringstream out;
    const auto& decisions = matcher.decisions();
    for (std::size_t r = 0; r < decisions.size(); ++r) {
        const auto& d = decisions[r];
        nlohmann::json j;
        j["round"] = r;
        j["kind"] = round_kind_name(d.kind);
        j["beta"] = d.beta;
        j["surrogate_gain"] = d.surrogate_gain;
        j["dual_gain"] = d.dual_gain;
        if (d.kind == RoundDecision::Kind::randomized) {
            j["candidates"] = {d.first, d.second};
        }
        if (d.matched >= 0) j["matched"] = d.matched;
        out << j.dump() << "\n";
    }
    return out.str();
}

std::string params_to_json(const GainShareParams& p, double max_violation) {
    nlohmann::json j;
    j["gamma"] = p.gamma;
    j["kappa"] = p.kappa;
    j["kmax"] = p.k_max;
    j["Gamma"] = p.Gamma;
    j["a"] = p.a;
    j["b"] = p.b;
    j["max_violation"] = max_violation;
    return j.dump(2);
}

GainShareParams params_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    GainShareParams p;
    p.gamma = j.at("gamma").get<double>();
    p.kappa = j.at("kappa").get<double>();
    p.k_max = j.at("kmax").get<int>();
    p.Gamma = j.at("Gamma").get<double>();
    p.a = j.at("a").get<std::vector<double>>();
    p.b = j.at("b").get<std::vector<double>>();
    p.require_consistent();
    // Loaded parameter vectors must satisfy the ratio LP (tables are rounded
    // to 8 digits, hence the loose gate).
    const double violation = max_constraint_violation(p);
    if (violation > 1e-6)
        throw std::invalid_argument("gain share parameters violate the ratio LP by " +
                                    std::to_string(violation));
    return p;
}

GainShareParams load_params(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return params_from_json(ss.str());
}

}  // namespace ocsmatch
