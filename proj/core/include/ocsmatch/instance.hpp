#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ocsmatch/ocs.hpp"

namespace ocsmatch {

/// One online matching instance: the offline side size and the ordered
/// arrivals, each a sparse map offline id -> weight (missing edges weigh 0).
/// The arrival order is part of the instance.
struct Instance {
    struct Meta {
        std::string generator;
        std::uint64_t seed = 0;
        std::string params;

        friend bool operator==(const Meta&, const Meta&) = default;
    };

    int n_offline = 0;
    std::vector<std::vector<std::pair<OfflineId, double>>> arrivals;
    Meta meta;

    int n_arrivals() const { return static_cast<int>(arrivals.size()); }
    std::vector<double> dense_row(std::size_t j) const;
    void require_valid() const;

    friend bool operator==(const Instance&, const Instance&) = default;
};

/// The classic hard family: arrival t has unit-weight edges to offline
/// vertices t..n-1, so early greedy matches starve the tail. OPT = n.
Instance gen_upper_triangular(int n, std::uint64_t seed);

/// Escalating-weight family: one block of arrivals per weight level, each
/// arrival connected to every offline vertex at that level, so the candidate
/// counts differ across levels. OPT = n_offline * max level.
Instance gen_weighted_layers(int n_offline, std::span<const double> levels, std::uint64_t seed);

/// Random sparse instance; weights are drawn from a small grid of sixteenths
/// so equal weights and shared breakpoints actually occur.
Instance gen_random(int n_offline, int n_arrivals, std::uint64_t seed);

/// Offline optimum under free disposal: a maximum-weight bipartite matching
/// (each offline vertex keeps only its heaviest assignment, each arrival used
/// at most once), via an augmenting-path assignment algorithm.
double offline_opt(const Instance& instance);

/// Plain recursion over all assignments; the oracle offline_opt is checked
/// against. Exponential: keep instances at most ~8x8.
double offline_opt_brute_force(const Instance& instance);

std::string instance_to_json(const Instance& instance);
Instance instance_from_json(const std::string& text);

void save_instance(const Instance& instance, const std::string& path);
Instance load_instance(const std::string& path);

}  // namespace ocsmatch
