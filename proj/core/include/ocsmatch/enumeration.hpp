#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "ocsmatch/dyadic.hpp"
#include "ocsmatch/ocs.hpp"
#include "ocsmatch/ocs_improved.hpp"

namespace ocsmatch {

inline constexpr std::size_t kMaxOriginalEnumerationRounds = 12;
inline constexpr std::size_t kMaxImprovedEnumerationRounds = 7;

/// Exact enumeration of the original selector over a fixed pair sequence, as
/// a distribution DP over marker states. Probabilities are exact dyadics.
struct OriginalEnumeration {
    Dyadic path_total;                                // always exactly 1
    std::vector<std::array<Dyadic, 2>> marginals;     // per round: P(first), P(second)
    std::map<OfflineId, Dyadic> never_chosen;
};

OriginalEnumeration enumerate_original_ocs(std::span<const CandidatePair> rounds);

/// f_k at gamma = 1/16, exact.
Dyadic dyadic_f(int k);

/// Exhaustive walk over the improved selector's execution tree. Each round
/// branches over (type, tie bit, choice bit) whether or not the bits end up
/// used, so the path space matches the analysis's probability space; path
/// probabilities are products of factors from {p, 1-p, 1/2}.
struct ImprovedEnumeration {
    double path_total = 0;                            // 1 within 1e-12
    std::vector<std::array<double, 2>> marginals;
    std::map<OfflineId, double> never_chosen;
};

ImprovedEnumeration enumerate_improved_ocs(std::span<const CandidatePair> rounds, double p);

/// Visits every execution path; `visit(probability, graph, choices)` runs at
/// each leaf with the graph in that path's final state.
template <typename Visitor>
void for_each_improved_path(std::span<const CandidatePair> rounds, double p, Visitor&& visit) {
    if (rounds.size() > kMaxImprovedEnumerationRounds)
        throw std::invalid_argument("sequence too long: improved variant enumerates at most 7 rounds");
    DependenceGraph graph;
    std::vector<OfflineId> choices(rounds.size());
    auto walk = [&](auto&& self, std::size_t depth, double prob) -> void {
        if (depth == rounds.size()) {
            visit(prob, static_cast<const DependenceGraph&>(graph), std::span<const OfflineId>(choices));
            return;
        }
        for (int type = 0; type < 2; ++type) {
            const double type_prob = type == 0 ? p : 1.0 - p;
            if (type_prob == 0) continue;
            for (int tie = 0; tie < 2; ++tie) {
                for (int choice = 0; choice < 2; ++choice) {
                    DependenceGraph::Undo undo;
                    choices[depth] = graph.apply_round(rounds[depth], type == 0, tie, choice, &undo);
                    self(self, depth + 1, prob * type_prob * 0.25);
                    graph.undo_round(undo);
                }
            }
        }
    };
    walk(walk, 0, 1.0);
}

/// Report of enumeration vs the product never-chosen bound, one row per
/// candidate; what `verify-ocs` prints.
struct OcsEnumerationReport {
    OcsVariant variant = OcsVariant::original;
    std::size_t rounds = 0;
    double path_total = 0;
    std::vector<std::array<double, 2>> marginals;

    struct CandidateRow {
        OfflineId candidate = 0;
        std::vector<int> run_lengths;
        double never_chosen = 0;
        double bound = 0;  // prod 2^{-k} f_k (original) / g_k (improved) / 1 (independent)
    };
    std::vector<CandidateRow> candidates;
};

OcsEnumerationReport enumerate_ocs(OcsVariant variant, std::span<const CandidatePair> rounds);

}  // namespace ocsmatch
