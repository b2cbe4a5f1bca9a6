#include "ocsmatch/ocs.hpp"

#include <cmath>
#include <string>

#include "ocsmatch/ocs_improved.hpp"

namespace ocsmatch {

double ocs_gamma(OcsVariant variant) {
    switch (variant) {
        case OcsVariant::independent: return 0.0;
        case OcsVariant::original: return 1.0 / 16.0;
        case OcsVariant::improved: return optimal_sender_probability().gamma;
    }
    throw std::logic_error("ocs_gamma: bad variant");
}

const char* ocs_variant_name(OcsVariant variant) {
    switch (variant) {
        case OcsVariant::independent: return "independent";
        case OcsVariant::original: return "original";
        case OcsVariant::improved: return "improved";
    }
    throw std::logic_error("ocs_variant_name: bad variant");
}

OcsVariant ocs_variant_from_name(const std::string& name) {
    if (name == "independent") return OcsVariant::independent;
    if (name == "original") return OcsVariant::original;
    if (name == "improved") return OcsVariant::improved;
    throw std::invalid_argument("unknown OCS variant: " + name);
}

std::unique_ptr<SelectionSession> make_selection_session(OcsVariant variant, std::uint64_t seed) {
    switch (variant) {
        case OcsVariant::independent: return std::make_unique<IndependentOcs>(seed);
        case OcsVariant::original: return std::make_unique<OriginalOcs>(seed);
        case OcsVariant::improved:
            return std::make_unique<ImprovedOcs>(optimal_sender_probability().p, seed);
    }
    throw std::logic_error("make_selection_session: bad variant");
}

void require_valid_pair(const CandidatePair& pair, int last_round) {
    if (pair.first == pair.second) throw std::invalid_argument("degenerate pair");
    if (pair.round <= last_round)
        throw std::invalid_argument("round ids must be strictly increasing");
}

OfflineId OriginalOcsState::step(const CandidatePair& pair, BitSource& bits) {
    if (pair.first == pair.second) throw std::invalid_argument("degenerate pair");
    const OfflineId cand[2] = {pair.first, pair.second};
    int l;
    if (bits.bit() == 0) {
        // oblivious
        l = bits.bit();
        const int m = bits.bit();
        set_marker(cand[1 - m], Marker::unknown);
        set_marker(cand[m], m == l ? Marker::matched : Marker::unmatched);
    } else {
        // adaptive
        const int m = bits.bit();
        switch (marker(cand[m])) {
            case Marker::matched: l = 1 - m; break;
            case Marker::unmatched: l = m; break;
            case Marker::unknown: l = bits.bit(); break;
            default: throw std::logic_error("bad marker");
        }
        set_marker(cand[0], Marker::unknown);
        set_marker(cand[1], Marker::unknown);
    }
    return cand[l];
}

OfflineId OriginalOcs::select(const CandidatePair& pair) {
    require_valid_pair(pair, last_round_);
    last_round_ = pair.round;
    RngBitSource bits(rng_);
    return state_.step(pair, bits);
}

OfflineId IndependentOcs::select(const CandidatePair& pair) {
    require_valid_pair(pair, last_round_);
    last_round_ = pair.round;
    return rng_.coin() == 0 ? pair.first : pair.second;
}

RecurrenceTable f_table(double gamma, int K) {
    if (!(gamma >= 0 && gamma <= 1)) throw std::invalid_argument("f_table: gamma outside [0,1]");
    if (K < 0) throw std::invalid_argument("f_table: negative K");
    RecurrenceTable t;
    t.gamma = gamma;
    t.f.resize(static_cast<std::size_t>(K) + 1);
    for (int k = 0; k <= K; ++k) {
        if (k <= 1)
            t.f[static_cast<std::size_t>(k)] = 1.0;
        else
            t.f[static_cast<std::size_t>(k)] =
                t.f[static_cast<std::size_t>(k - 1)] - gamma * t.f[static_cast<std::size_t>(k - 2)];
    }
    return t;
}

double never_chosen_bound(double gamma, std::span<const int> lengths) {
    if (!(gamma >= 0 && gamma <= 1)) throw std::invalid_argument("never_chosen_bound: gamma outside [0,1]");
    double prod = 1.0;
    for (int k : lengths) {
        if (k < 1) throw std::invalid_argument("never_chosen_bound: sequence length < 1");
        prod *= std::pow(0.5, k) * std::pow(1.0 - gamma, k - 1);
    }
    return prod;
}

std::vector<int> consecutive_run_lengths(std::span<const CandidatePair> rounds, OfflineId candidate) {
    return consecutive_run_lengths(rounds, candidate, [](std::size_t) { return true; });
}

}  // namespace ocsmatch
