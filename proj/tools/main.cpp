#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ocsmatch/enumeration.hpp"
#include "ocsmatch/experiment.hpp"
#include "ocsmatch/instance.hpp"
#include "ocsmatch/lp.hpp"

using namespace ocsmatch;

namespace {

// Accepts decimals, "p/q", and the two named correlation strengths.
double parse_ratio(const std::string& text) {
    if (text == "1/16") return 1.0 / 16.0;
    if (text == "1/(3*sqrt(3))" || text == "1/(3sqrt(3))" || text == "1/(3*sqrt3)")
        return 1.0 / (3.0 * std::sqrt(3.0));
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        const double num = std::stod(text.substr(0, slash));
        const double den = std::stod(text.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator in " + text);
        return num / den;
    }
    return std::stod(text);
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<CandidatePair> sequence_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    const nlohmann::json& pairs = j.is_object() ? j.at("pairs") : j;
    std::vector<CandidatePair> rounds;
    int round = 0;
    for (const auto& p : pairs) {
        rounds.push_back({round++, p.at(0).get<int>(), p.at(1).get<int>()});
    }
    return rounds;
}

int cmd_solve_lp(const std::string& gamma_text, const std::string& kappa_text, int kmax,
                 const std::string& out_path, const std::string& csv_path) {
    const double gamma = parse_ratio(gamma_text);
    const double kappa = parse_ratio(kappa_text);
    const LpSolution sol = solve_lp(build_lp(gamma, kappa, kmax));
    if (sol.status != LpStatus::optimal) {
        std::cerr << "LP is " << (sol.status == LpStatus::infeasible ? "infeasible" : "unbounded")
                  << "\n";
        return 1;
    }
    const std::string text = params_to_json(sol.params, sol.max_violation);
    if (out_path.empty())
        std::cout << text << "\n";
    else
        write_file(out_path, text + "\n");

    if (!csv_path.empty()) {
        std::ostringstream csv;
        csv << "k,a(k),b(k)\n";
        for (int k = 0; k <= sol.params.k_max; ++k) {
            char line[80];
            std::snprintf(line, sizeof(line), "%d,%.8f,%.8f\n", k,
                          sol.params.a[static_cast<std::size_t>(k)],
                          sol.params.b[static_cast<std::size_t>(k)]);
            csv << line;
        }
        write_file(csv_path, csv.str());
    }
    std::fprintf(stderr, "Gamma = %.8f (max violation %.2e)\n", sol.params.Gamma, sol.max_violation);
    return 0;
}

int cmd_gen(const std::string& family, int n, int arrivals, const std::string& levels_text,
            std::uint64_t seed, const std::string& out_path) {
    Instance inst;
    if (family == "triangular") {
        inst = gen_upper_triangular(n, seed);
    } else if (family == "layers") {
        std::vector<double> levels;
        std::stringstream ss(levels_text);
        std::string item;
        while (std::getline(ss, item, ',')) levels.push_back(std::stod(item));
        inst = gen_weighted_layers(n, levels, seed);
    } else if (family == "random") {
        inst = gen_random(n, arrivals > 0 ? arrivals : 2 * n, seed);
    } else {
        std::cerr << "unknown family: " << family << "\n";
        return 1;
    }
    if (out_path.empty())
        std::cout << instance_to_json(inst) << "\n";
    else
        save_instance(inst, out_path);
    std::fprintf(stderr, "%s: %d offline, %d arrivals, OPT = %g\n", family.c_str(),
                 inst.n_offline, inst.n_arrivals(), offline_opt(inst));
    return 0;
}

int cmd_run_match(const std::string& instance_path, const std::string& params_path,
                  const std::string& variant_name, int trials, std::uint64_t seed,
                  const std::string& report_path, const std::string& audit_path) {
    const Instance inst = load_instance(instance_path);
    const GainShareParams params = load_params(params_path);
    const OcsVariant variant = ocs_variant_from_name(variant_name);

    const ExperimentReport report = run_experiment(inst, params, variant, trials, seed);
    const std::string text = report_to_json(report);
    if (report_path.empty())
        std::cout << text << "\n";
    else
        write_file(report_path, text + "\n");

    if (!audit_path.empty()) {
        Matcher matcher(inst.n_offline, params, variant, split_seed(seed, 0));
        for (int j = 0; j < inst.n_arrivals(); ++j)
            matcher.arrive(inst.dense_row(static_cast<std::size_t>(j)));
        write_file(audit_path, round_log_json(matcher));
    }

    std::fprintf(stderr,
                 "mean %.6f +- %.6f | OPT %.6f | ratio %.6f | A-bar %.6f | D %.6f | "
                 "audit violations %d\n",
                 report.mean_value, report.stderr_value, report.opt, report.empirical_ratio,
                 report.surrogate, report.dual, report.feasibility_violations);
    return report.feasibility_violations == 0 && report.invariant_violations == 0 ? 0 : 2;
}

int cmd_verify_ocs(const std::string& variant_name, const std::string& sequence_path) {
    const OcsVariant variant = ocs_variant_from_name(variant_name);
    const auto rounds = sequence_from_json(read_file(sequence_path));
    const auto report = enumerate_ocs(variant, rounds);

    std::printf("variant=%s rounds=%zu path_total=%.12f\n", ocs_variant_name(variant),
                report.rounds, report.path_total);
    std::printf("%-10s %-12s %-14s %-14s %s\n", "candidate", "runs", "never_chosen", "bound", "ok");
    bool all_ok = true;
    for (const auto& row : report.candidates) {
        std::string runs;
        for (std::size_t i = 0; i < row.run_lengths.size(); ++i)
            runs += (i ? "," : "") + std::to_string(row.run_lengths[i]);
        const bool ok = row.never_chosen <= row.bound + 1e-9;
        all_ok = all_ok && ok;
        std::printf("%-10d %-12s %-14.9f %-14.9f %s\n", row.candidate, runs.c_str(),
                    row.never_chosen, row.bound, ok ? "yes" : "NO");
    }
    for (std::size_t t = 0; t < report.marginals.size(); ++t) {
        const double dev = std::max(std::abs(report.marginals[t][0] - 0.5),
                                    std::abs(report.marginals[t][1] - 0.5));
        if (dev > 1e-9) {
            std::printf("round %zu marginal deviates by %.2e\n", t, dev);
            all_ok = false;
        }
    }
    return all_ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"online correlated selection + edge-weighted online matching toolkit"};
    app.require_subcommand(1);

    // solve-lp
    std::string gamma_text = "1/16", kappa_text = "3/2", out_path, csv_path;
    int kmax = 7;
    auto* solve = app.add_subcommand("solve-lp", "solve the gain-sharing ratio LP");
    solve->add_option("--gamma", gamma_text, "correlation strength (e.g. 1/16, 1/(3*sqrt(3)))");
    solve->add_option("--kappa", kappa_text, "deterministic-round scale, e.g. 3/2");
    solve->add_option("--kmax", kmax, "truncation level")->check(CLI::PositiveNumber);
    solve->add_option("--out", out_path, "write the parameter JSON here (default stdout)");
    solve->add_option("--csv", csv_path, "also write a k,a(k),b(k) table");

    // gen
    std::string family = "triangular", levels_text = "1,2", gen_out;
    int gen_n = 5, gen_arrivals = 0;
    std::uint64_t gen_seed = 0;
    auto* gen = app.add_subcommand("gen", "generate a benchmark instance");
    gen->add_option("--family", family, "triangular | layers | random")->required();
    gen->add_option("--n", gen_n, "offline vertices");
    gen->add_option("--arrivals", gen_arrivals, "arrivals (random family)");
    gen->add_option("--levels", levels_text, "comma-separated weight levels (layers family)");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--out", gen_out, "write instance JSON here (default stdout)");

    // run-match
    std::string instance_path, params_path, variant_name = "improved", report_path, audit_path;
    int trials = 1000;
    std::uint64_t seed = 1;
    auto* run = app.add_subcommand("run-match", "run the online matcher on an instance");
    run->add_option("--instance", instance_path, "instance JSON")->required();
    run->add_option("--params", params_path, "gain-sharing parameter JSON (from solve-lp)")->required();
    run->add_option("--ocs", variant_name, "original | improved | independent");
    run->add_option("--trials", trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
    run->add_option("--seed", seed, "master seed (split per trial)");
    run->add_option("--report", report_path, "write the report JSON here (default stdout)");
    run->add_option("--audit", audit_path, "write the per-round JSONL audit log here");

    // verify-ocs
    std::string v_variant = "original", sequence_path;
    auto* verify = app.add_subcommand("verify-ocs", "enumerate a pair sequence against the bound");
    verify->add_option("--variant", v_variant, "original | improved | independent");
    verify->add_option("--sequence", sequence_path, "JSON file with pairs [[i1,i2],...]")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve_lp(gamma_text, kappa_text, kmax, out_path, csv_path);
        if (gen->parsed()) return cmd_gen(family, gen_n, gen_arrivals, levels_text, gen_seed, gen_out);
        if (run->parsed())
            return cmd_run_match(instance_path, params_path, variant_name, trials, seed, report_path,
                                 audit_path);
        if (verify->parsed()) return cmd_verify_ocs(v_variant, sequence_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
