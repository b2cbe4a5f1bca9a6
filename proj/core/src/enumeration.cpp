#include "ocsmatch/enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace ocsmatch {

namespace {

void require_valid_sequence(std::span<const CandidatePair> rounds) {
    int last = std::numeric_limits<int>::min();
    for (const auto& pair : rounds) {
        if (pair.first == pair.second) throw std::invalid_argument("degenerate pair");
        if (pair.round <= last) throw std::invalid_argument("round ids must be strictly increasing");
        last = pair.round;
    }
}

std::vector<OfflineId> distinct_candidates(std::span<const CandidatePair> rounds) {
    std::vector<OfflineId> ids;
    for (const auto& pair : rounds) {
        for (OfflineId i : {pair.first, pair.second})
            if (std::find(ids.begin(), ids.end(), i) == ids.end()) ids.push_back(i);
    }
    return ids;
}

// Marker state packed 2 bits per candidate: 0 unknown, 1 matched, 2 unmatched.
// Bit 62 carries the per-candidate "never chosen so far" flag when used.
constexpr std::uint64_t kNeverBit = std::uint64_t{1} << 62;

std::uint64_t get_marker(std::uint64_t s, int idx) { return (s >> (2 * idx)) & 3u; }

std::uint64_t set_marker(std::uint64_t s, int idx, std::uint64_t v) {
    return (s & ~(std::uint64_t{3} << (2 * idx))) | (v << (2 * idx));
}

// Emits every outcome of one original-selector round from marker state s:
// (log2 of the outcome weight, successor state, chosen side).
template <typename Emit>
void original_transitions(std::uint64_t s, int ia, int ib, Emit&& emit) {
    const int cand[2] = {ia, ib};
    // oblivious half: bits (l, m)
    for (int l = 0; l < 2; ++l) {
        for (int m = 0; m < 2; ++m) {
            std::uint64_t s2 = set_marker(s, cand[1 - m], 0);
            s2 = set_marker(s2, cand[m], l == m ? 1 : 2);
            emit(3, s2, l);
        }
    }
    // adaptive half: bit m, then the marker decides (or one more bit)
    const std::uint64_t cleared = set_marker(set_marker(s, ia, 0), ib, 0);
    for (int m = 0; m < 2; ++m) {
        switch (get_marker(s, cand[m])) {
            case 1: emit(2, cleared, 1 - m); break;
            case 2: emit(2, cleared, m); break;
            default:
                emit(3, cleared, 0);
                emit(3, cleared, 1);
                break;
        }
    }
}

using Dist = std::unordered_map<std::uint64_t, Dyadic>;

void accumulate(Dist& dist, std::uint64_t state, const Dyadic& prob) {
    auto [it, inserted] = dist.try_emplace(state, prob);
    if (!inserted) it->second = it->second + prob;
}

}  // namespace

OriginalEnumeration enumerate_original_ocs(std::span<const CandidatePair> rounds) {
    if (rounds.size() > kMaxOriginalEnumerationRounds)
        throw std::invalid_argument("sequence too long: original variant enumerates at most 12 rounds");
    require_valid_sequence(rounds);

    const std::vector<OfflineId> ids = distinct_candidates(rounds);
    std::unordered_map<OfflineId, int> index;
    for (std::size_t i = 0; i < ids.size(); ++i) index[ids[i]] = static_cast<int>(i);
    if (ids.size() > 24) throw std::invalid_argument("too many distinct candidates to enumerate");

    OriginalEnumeration result;
    result.marginals.assign(rounds.size(), {Dyadic::zero(), Dyadic::zero()});

    // Pass 1: per-round marginals and total mass.
    Dist dist;
    dist.emplace(0, Dyadic::one());
    for (std::size_t t = 0; t < rounds.size(); ++t) {
        const int ia = index[rounds[t].first];
        const int ib = index[rounds[t].second];
        Dist next;
        for (const auto& [state, prob] : dist) {
            original_transitions(state, ia, ib, [&](int exp, std::uint64_t s2, int side) {
                const Dyadic q = prob * Dyadic::half_pow(exp);
                accumulate(next, s2, q);
                auto& cell = result.marginals[t][static_cast<std::size_t>(side)];
                cell = cell + q;
            });
        }
        dist = std::move(next);
    }
    result.path_total = Dyadic::zero();
    for (const auto& [state, prob] : dist) result.path_total = result.path_total + prob;

    // Pass 2 per candidate: same DP with a never-chosen flag in the state.
    for (OfflineId x : ids) {
        Dist d;
        d.emplace(kNeverBit, Dyadic::one());
        for (const auto& pair : rounds) {
            const int ia = index[pair.first];
            const int ib = index[pair.second];
            Dist next;
            for (const auto& [state, prob] : d) {
                original_transitions(state, ia, ib, [&](int exp, std::uint64_t s2, int side) {
                    const OfflineId chosen = side == 0 ? pair.first : pair.second;
                    if (chosen == x) s2 &= ~kNeverBit;
                    accumulate(next, s2, prob * Dyadic::half_pow(exp));
                });
            }
            d = std::move(next);
        }
        Dyadic never = Dyadic::zero();
        for (const auto& [state, prob] : d)
            if (state & kNeverBit) never = never + prob;
        result.never_chosen[x] = never;
    }
    return result;
}

Dyadic dyadic_f(int k) {
    if (k < 0) throw std::invalid_argument("dyadic_f: negative k");
    Dyadic prev2 = Dyadic::one();  // f_0
    if (k == 0) return prev2;
    Dyadic prev1 = Dyadic::one();  // f_1
    const Dyadic gamma(1, 4);
    for (int i = 2; i <= k; ++i) {
        Dyadic cur = prev1 - gamma * prev2;
        prev2 = prev1;
        prev1 = cur;
    }
    return prev1;
}

ImprovedEnumeration enumerate_improved_ocs(std::span<const CandidatePair> rounds, double p) {
    if (!(p >= 0 && p <= 1)) throw std::invalid_argument("enumerate_improved_ocs: p outside [0,1]");
    require_valid_sequence(rounds);

    const std::vector<OfflineId> ids = distinct_candidates(rounds);
    std::unordered_map<OfflineId, int> index;
    for (std::size_t i = 0; i < ids.size(); ++i) index[ids[i]] = static_cast<int>(i);

    ImprovedEnumeration result;
    result.marginals.assign(rounds.size(), {0.0, 0.0});
    std::vector<double> never(ids.size(), 0.0);

    for_each_improved_path(rounds, p, [&](double prob, const DependenceGraph&,
                                          std::span<const OfflineId> choices) {
        result.path_total += prob;
        std::uint32_t chosen_mask = 0;
        for (std::size_t t = 0; t < rounds.size(); ++t) {
            const int side = choices[t] == rounds[t].first ? 0 : 1;
            result.marginals[t][static_cast<std::size_t>(side)] += prob;
            chosen_mask |= std::uint32_t{1} << index[choices[t]];
        }
        for (std::size_t i = 0; i < ids.size(); ++i)
            if (!(chosen_mask & (std::uint32_t{1} << i))) never[i] += prob;
    });

    for (std::size_t i = 0; i < ids.size(); ++i) result.never_chosen[ids[i]] = never[i];
    return result;
}

OcsEnumerationReport enumerate_ocs(OcsVariant variant, std::span<const CandidatePair> rounds) {
    require_valid_sequence(rounds);
    OcsEnumerationReport report;
    report.variant = variant;
    report.rounds = rounds.size();

    const std::vector<OfflineId> ids = distinct_candidates(rounds);
    std::map<OfflineId, double> never;

    switch (variant) {
        case OcsVariant::original: {
            const auto e = enumerate_original_ocs(rounds);
            report.path_total = e.path_total.to_double();
            for (const auto& m : e.marginals)
                report.marginals.push_back({m[0].to_double(), m[1].to_double()});
            for (const auto& [id, prob] : e.never_chosen) never[id] = prob.to_double();
            break;
        }
        case OcsVariant::improved: {
            const auto e = enumerate_improved_ocs(rounds, optimal_sender_probability().p);
            report.path_total = e.path_total;
            report.marginals = e.marginals;
            for (const auto& [id, prob] : e.never_chosen) never[id] = prob;
            break;
        }
        case OcsVariant::independent: {
            // Fresh fair coins: closed form, no tree needed.
            report.path_total = 1.0;
            report.marginals.assign(rounds.size(), {0.5, 0.5});
            for (OfflineId id : ids) {
                const auto runs = consecutive_run_lengths(rounds, id);
                int total = 0;
                for (int k : runs) total += k;
                never[id] = std::pow(0.5, total);
            }
            break;
        }
    }

    for (OfflineId id : ids) {
        OcsEnumerationReport::CandidateRow row;
        row.candidate = id;
        row.run_lengths = consecutive_run_lengths(rounds, id);
        row.never_chosen = never[id];
        double bound = 1.0;
        for (int k : row.run_lengths) {
            double factor = std::pow(0.5, k);
            if (variant == OcsVariant::original)
                factor *= dyadic_f(k).to_double();
            else if (variant == OcsVariant::improved)
                factor *= g_table(optimal_sender_probability().p, k)[static_cast<std::size_t>(k)];
            bound *= factor;
        }
        row.bound = bound;
        report.candidates.push_back(std::move(row));
    }
    return report;
}

}  // namespace ocsmatch
