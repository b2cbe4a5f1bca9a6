#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ocsmatch/random.hpp"

namespace ocsmatch {

using OfflineId = int;

/// One randomized round: an ordered pair of distinct offline vertices.
/// Round ids must be strictly increasing within a session.
struct CandidatePair {
    int round = 0;
    OfflineId first = 0;
    OfflineId second = 0;
};

enum class OcsVariant { independent, original, improved };

/// Correlation strength guaranteed by each selector variant.
double ocs_gamma(OcsVariant variant);

const char* ocs_variant_name(OcsVariant variant);
OcsVariant ocs_variant_from_name(const std::string& name);

/// Online selector: receives pairs one at a time, immediately returns one of
/// the two candidates, each with marginal probability exactly 1/2.
class SelectionSession {
public:
    virtual ~SelectionSession() = default;
    virtual OfflineId select(const CandidatePair& pair) = 0;
};

std::unique_ptr<SelectionSession> make_selection_session(OcsVariant variant, std::uint64_t seed);

/// Source of fair bits; injected so exact oracles can replay scripted draws
/// through the same transition code the live sessions run.
class BitSource {
public:
    virtual ~BitSource() = default;
    virtual int bit() = 0;
};

class RngBitSource final : public BitSource {
public:
    explicit RngBitSource(Rng& rng) : rng_(rng) {}
    int bit() override { return rng_.coin(); }

private:
    Rng& rng_;
};

enum class Marker : std::uint8_t { unknown, matched, unmatched };

/// State machine of the original selector. Each step consumes one bit to pick
/// an oblivious or adaptive round, then:
///   oblivious: two bits (l, m); the marker of candidate m records whether it
///              was picked (matched/unmatched), the other marker is cleared.
///   adaptive:  one bit m; candidate m's marker, if set, dictates the choice
///              (matched -> pick the other, unmatched -> pick it), otherwise a
///              further bit decides; both markers are then cleared.
class OriginalOcsState {
public:
    Marker marker(OfflineId i) const {
        auto it = markers_.find(i);
        return it == markers_.end() ? Marker::unknown : it->second;
    }

    OfflineId step(const CandidatePair& pair, BitSource& bits);

private:
    void set_marker(OfflineId i, Marker m) {
        if (m == Marker::unknown)
            markers_.erase(i);
        else
            markers_[i] = m;
    }

    std::unordered_map<OfflineId, Marker> markers_;
};

class OriginalOcs final : public SelectionSession {
public:
    explicit OriginalOcs(std::uint64_t seed) : rng_(seed) {}
    OfflineId select(const CandidatePair& pair) override;

private:
    OriginalOcsState state_;
    Rng rng_;
    int last_round_ = -1;
};

/// 0-OCS baseline: a fresh fair coin every round.
class IndependentOcs final : public SelectionSession {
public:
    explicit IndependentOcs(std::uint64_t seed) : rng_(seed) {}
    OfflineId select(const CandidatePair& pair) override;

private:
    Rng rng_;
    int last_round_ = -1;
};

void require_valid_pair(const CandidatePair& pair, int last_round);

/// f(0..K) for f(0)=f(1)=1, f(k) = f(k-1) - gamma * f(k-2).
struct RecurrenceTable {
    double gamma = 0;
    std::vector<double> f;

    double operator[](std::size_t k) const { return f.at(k); }
};

RecurrenceTable f_table(double gamma, int K);

/// Upper bound on the probability that a candidate is never chosen, given the
/// lengths of its disjoint consecutive-round sequences:
/// prod over lengths k of 2^{-k} (1-gamma)^{k-1}.
double never_chosen_bound(double gamma, std::span<const int> lengths);

/// Lengths of the maximal blocks of `candidate`'s occurrences that are
/// consecutive (no occurrence of the candidate outside the block interleaves).
/// `in_scope(t)` restricts to a subset of rounds: out-of-scope occurrences
/// break blocks but contribute no length, which is how weight levels carve a
/// candidate's history into sequences.
std::vector<int> consecutive_run_lengths(std::span<const CandidatePair> rounds, OfflineId candidate);

template <typename Pred>
std::vector<int> consecutive_run_lengths(std::span<const CandidatePair> rounds, OfflineId candidate,
                                         Pred&& in_scope) {
    std::vector<int> runs;
    bool open = false;
    for (std::size_t t = 0; t < rounds.size(); ++t) {
        if (rounds[t].first != candidate && rounds[t].second != candidate) continue;
        if (in_scope(t)) {
            if (!open) {
                runs.push_back(0);
                open = true;
            }
            ++runs.back();
        } else {
            open = false;
        }
    }
    return runs;
}

}  // namespace ocsmatch
