#include "ocsmatch/instance.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ocsmatch/random.hpp"
#include "json.hpp"

namespace ocsmatch {

std::vector<double> Instance::dense_row(std::size_t j) const {
    std::vector<double> row(static_cast<std::size_t>(n_offline), 0.0);
    for (const auto& [i, w] : arrivals.at(j)) row.at(static_cast<std::size_t>(i)) = w;
    return row;
}

void Instance::require_valid() const {
    if (n_offline < 1) throw std::invalid_argument("Instance: n_offline must be >= 1");
    for (const auto& arrival : arrivals) {
        for (const auto& [i, w] : arrival) {
            if (i < 0 || i >= n_offline) throw std::invalid_argument("Instance: offline id out of range");
            if (!(w >= 0) || !std::isfinite(w))
                throw std::invalid_argument("Instance: weights must be finite and nonnegative");
        }
    }
}

Instance gen_upper_triangular(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_upper_triangular: n must be >= 1");
    Instance inst;
    inst.n_offline = n;
    inst.meta = {"triangular", seed, "n=" + std::to_string(n)};
    for (int t = 0; t < n; ++t) {
        std::vector<std::pair<OfflineId, double>> arrival;
        for (int i = t; i < n; ++i) arrival.emplace_back(i, 1.0);
        inst.arrivals.push_back(std::move(arrival));
    }
    return inst;
}

Instance gen_weighted_layers(int n_offline, std::span<const double> levels, std::uint64_t seed) {
    if (n_offline < 1) throw std::invalid_argument("gen_weighted_layers: n_offline must be >= 1");
    double prev = 0;
    for (double w : levels) {
        if (!(w > prev)) throw std::invalid_argument("gen_weighted_layers: levels must be strictly increasing and positive");
        prev = w;
    }
    Instance inst;
    inst.n_offline = n_offline;
    std::ostringstream params;
    params << "n=" << n_offline << " levels=";
    for (std::size_t l = 0; l < levels.size(); ++l) params << (l ? "," : "") << levels[l];
    inst.meta = {"layers", seed, params.str()};
    for (double w : levels) {
        for (int rep = 0; rep < n_offline; ++rep) {
            std::vector<std::pair<OfflineId, double>> arrival;
            for (int i = 0; i < n_offline; ++i) arrival.emplace_back(i, w);
            inst.arrivals.push_back(std::move(arrival));
        }
    }
    return inst;
}

Instance gen_random(int n_offline, int n_arrivals, std::uint64_t seed) {
    if (n_offline < 1 || n_arrivals < 1) throw std::invalid_argument("gen_random: sizes must be >= 1");
    Instance inst;
    inst.n_offline = n_offline;
    inst.meta = {"random", seed,
                 "n_offline=" + std::to_string(n_offline) + " n_arrivals=" + std::to_string(n_arrivals)};
    Rng rng(seed);
    for (int t = 0; t < n_arrivals; ++t) {
        std::vector<std::pair<OfflineId, double>> arrival;
        for (int i = 0; i < n_offline; ++i) {
            if (rng.coin() == 0) continue;
            const double w = static_cast<double>(1 + rng.next_u64() % 16) / 16.0;
            arrival.emplace_back(i, w);
        }
        inst.arrivals.push_back(std::move(arrival));
    }
    return inst;
}

double offline_opt(const Instance& instance) {
    instance.require_valid();
    const int rows = instance.n_arrivals();
    const int cols = instance.n_offline;
    const int n = std::max(rows, cols);
    if (rows == 0) return 0;

    // Minimum-cost perfect assignment on the zero-padded square matrix of
    // negated weights (Jonker-Volgenant style with potentials).
    std::vector<std::vector<double>> cost(static_cast<std::size_t>(n) + 1,
                                          std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0));
    for (int j = 0; j < rows; ++j)
        for (const auto& [i, w] : instance.arrivals[static_cast<std::size_t>(j)])
            cost[static_cast<std::size_t>(j) + 1][static_cast<std::size_t>(i) + 1] = -w;

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(static_cast<std::size_t>(n) + 1, 0), v(static_cast<std::size_t>(n) + 1, 0);
    std::vector<int> match(static_cast<std::size_t>(n) + 1, 0), way(static_cast<std::size_t>(n) + 1, 0);
    for (int r = 1; r <= n; ++r) {
        match[0] = r;
        int j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
        std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
        do {
            used[static_cast<std::size_t>(j0)] = 1;
            const int i0 = match[static_cast<std::size_t>(j0)];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                const double cur = cost[static_cast<std::size_t>(i0)][static_cast<std::size_t>(j)] -
                                   u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (match[static_cast<std::size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<std::size_t>(j0)];
            match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }

    double total = 0;
    for (int j = 1; j <= n; ++j)
        total -= cost[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])][static_cast<std::size_t>(j)];
    return total;
}

namespace {

double brute_force_from(const Instance& instance, std::size_t j, std::vector<char>& used) {
    if (j == instance.arrivals.size()) return 0;
    double best = brute_force_from(instance, j + 1, used);  // leave arrival j unmatched
    for (const auto& [i, w] : instance.arrivals[j]) {
        if (used[static_cast<std::size_t>(i)]) continue;
        used[static_cast<std::size_t>(i)] = 1;
        best = std::max(best, w + brute_force_from(instance, j + 1, used));
        used[static_cast<std::size_t>(i)] = 0;
    }
    return best;
}

}  // namespace

double offline_opt_brute_force(const Instance& instance) {
    instance.require_valid();
    std::vector<char> used(static_cast<std::size_t>(instance.n_offline), 0);
    return brute_force_from(instance, 0, used);
}

namespace {

std::string weight_to_string(double w) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), w);
    return std::string(buf, res.ptr);
}

double weight_from_string(const std::string& s) {
    double w = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), w);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::invalid_argument("bad weight literal: " + s);
    return w;
}

}  // namespace

std::string instance_to_json(const Instance& instance) {
    nlohmann::json j;
    j["n_offline"] = instance.n_offline;
    j["arrivals"] = nlohmann::json::array();
    for (const auto& arrival : instance.arrivals) {
        nlohmann::json row = nlohmann::json::object();
        for (const auto& [i, w] : arrival) row[std::to_string(i)] = weight_to_string(w);
        j["arrivals"].push_back(std::move(row));
    }
    j["metadata"] = {{"generator", instance.meta.generator},
                     {"seed", instance.meta.seed},
                     {"params", instance.meta.params}};
    return j.dump(2);
}

Instance instance_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    Instance inst;
    inst.n_offline = j.at("n_offline").get<int>();
    for (const auto& row : j.at("arrivals")) {
        std::vector<std::pair<OfflineId, double>> arrival;
        for (const auto& [key, value] : row.items())
            arrival.emplace_back(std::stoi(key), value.is_string()
                                                     ? weight_from_string(value.get<std::string>())
                                                     : value.get<double>());
        std::sort(arrival.begin(), arrival.end());
        inst.arrivals.push_back(std::move(arrival));
    }
    if (j.contains("metadata")) {
        const auto& meta = j.at("metadata");
        inst.meta.generator = meta.value("generator", "");
        inst.meta.seed = meta.value("seed", std::uint64_t{0});
        inst.meta.params = meta.value("params", "");
    }
    inst.require_valid();
    return inst;
}

void save_instance(const Instance& instance, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << instance_to_json(instance) << "\n";
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return instance_from_json(ss.str());
}

}  // namespace ocsmatch
