#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "ocsmatch/ocs.hpp"
#include "ocsmatch/random.hpp"

namespace ocsmatch {

enum class NodeType : std::uint8_t { sender, receiver };

struct DependenceArc {
    int from = 0;
    int to = 0;
    OfflineId candidate = 0;

    friend bool operator==(const DependenceArc&, const DependenceArc&) = default;
};

/// State of the improved selector: one node per randomized round, ex-ante arcs
/// from each candidate's previous round, and the realized ex-post arcs along
/// which sender bits are negated. Arcs are labeled triples so parallel arcs
/// between the same two rounds (one per shared candidate) stay distinct.
///
/// Rounds are dense node indices internally; external round ids are kept in a
/// side map for lookups. apply_round/undo_round are exact inverses, which is
/// what the exhaustive path oracle backtracks with.
class DependenceGraph {
public:
    struct Undo {
        std::size_t ante_size = 0;
        std::size_t post_size = 0;
        std::optional<int> prev_last_first;
        std::optional<int> prev_last_second;
        int round_id = 0;
    };

    /// Runs one round given its three random draws (tie and choice bits are
    /// accepted even when unused). Returns the chosen candidate.
    OfflineId apply_round(const CandidatePair& pair, bool is_sender, int tie_bit, int choice_bit,
                          Undo* undo = nullptr);

    void undo_round(const Undo& undo);

    int node_count() const { return static_cast<int>(types_.size()); }
    std::span<const DependenceArc> ex_ante_arcs() const { return ante_; }
    std::span<const DependenceArc> ex_post_arcs() const { return post_; }

    NodeType node_type(int round_id) const { return types_[node_of(round_id)]; }
    OfflineId choice(int round_id) const { return choices_[node_of(round_id)]; }
    std::optional<int> last_round_of(OfflineId candidate) const;

    /// Undirected connectivity in the ex-post graph.
    bool same_ex_post_component(int round_id1, int round_id2) const;

private:
    std::size_t node_of(int round_id) const;

    std::vector<NodeType> types_;
    std::vector<OfflineId> choices_;
    std::vector<std::array<OfflineId, 2>> candidates_;
    std::vector<int> round_ids_;
    std::vector<DependenceArc> ante_;
    std::vector<DependenceArc> post_;
    std::unordered_map<OfflineId, int> last_node_;
    std::unordered_map<int, int> round_to_node_;
};

class ImprovedOcs final : public SelectionSession {
public:
    ImprovedOcs(double p, std::uint64_t seed) : p_(p), rng_(seed) {
        if (!(p >= 0 && p <= 1)) throw std::invalid_argument("ImprovedOcs: p outside [0,1]");
    }

    OfflineId select(const CandidatePair& pair) override {
        require_valid_pair(pair, last_round_);
        last_round_ = pair.round;
        const bool is_sender = rng_.bernoulli(p_);
        const int tie = rng_.coin();
        const int choice = rng_.coin();
        return graph_.apply_round(pair, is_sender, tie, choice);
    }

    double sender_probability() const { return p_; }
    const DependenceGraph& graph() const { return graph_; }

private:
    double p_;
    DependenceGraph graph_;
    Rng rng_;
    int last_round_ = -1;
};

/// g(0..K) for g(0)=g(1)=1, g(k) = g(k-1) - p(1-p)(1-p/2) g(k-2).
struct GTable {
    double p = 0;
    std::vector<double> g;

    double operator[](std::size_t k) const { return g.at(k); }
};

GTable g_table(double p, int K);

/// Correlation strength p(1-p)(1-p/2) of the improved selector at sender
/// probability p.
double sender_correlation(double p);

struct OptimalSenderProbability {
    double p = 0;
    double gamma = 0;
};

/// Maximizer of sender_correlation on [0,1], found as the root of the
/// derivative (a quadratic): p = 1 - 1/sqrt(3), value 1/(3 sqrt 3).
OptimalSenderProbability optimal_sender_probability();

}  // namespace ocsmatch
