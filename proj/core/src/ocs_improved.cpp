#include "ocsmatch/ocs_improved.hpp"

#include <cmath>

namespace ocsmatch {

std::size_t DependenceGraph::node_of(int round_id) const {
    auto it = round_to_node_.find(round_id);
    if (it == round_to_node_.end()) throw std::invalid_argument("unknown round id");
    return static_cast<std::size_t>(it->second);
}

std::optional<int> DependenceGraph::last_round_of(OfflineId candidate) const {
    auto it = last_node_.find(candidate);
    if (it == last_node_.end()) return std::nullopt;
    return round_ids_[static_cast<std::size_t>(it->second)];
}

OfflineId DependenceGraph::apply_round(const CandidatePair& pair, bool is_sender, int tie_bit,
                                       int choice_bit, Undo* undo) {
    if (pair.first == pair.second) throw std::invalid_argument("degenerate pair");
    if (round_to_node_.count(pair.round)) throw std::invalid_argument("round id already seen");
    const int j = node_count();
    const OfflineId cand[2] = {pair.first, pair.second};

    int source[2] = {-1, -1};
    for (int m = 0; m < 2; ++m) {
        auto it = last_node_.find(cand[m]);
        if (it != last_node_.end()) source[m] = it->second;
    }

    if (undo) {
        undo->ante_size = ante_.size();
        undo->post_size = post_.size();
        undo->prev_last_first = source[0] >= 0 ? std::optional<int>(source[0]) : std::nullopt;
        undo->prev_last_second = source[1] >= 0 ? std::optional<int>(source[1]) : std::nullopt;
        undo->round_id = pair.round;
    }

    for (int m = 0; m < 2; ++m)
        if (source[m] >= 0) ante_.push_back({source[m], j, cand[m]});

    OfflineId chosen;
    if (is_sender) {
        chosen = cand[choice_bit];
    } else {
        const bool sender_in[2] = {source[0] >= 0 && types_[static_cast<std::size_t>(source[0])] == NodeType::sender,
                                   source[1] >= 0 && types_[static_cast<std::size_t>(source[1])] == NodeType::sender};
        if (!sender_in[0] && !sender_in[1]) {
            chosen = cand[choice_bit];
        } else {
            const int m = (sender_in[0] && sender_in[1]) ? tie_bit : (sender_in[0] ? 0 : 1);
            const int src = source[m];
            post_.push_back({src, j, cand[m]});
            const bool picked_there = choices_[static_cast<std::size_t>(src)] == cand[m];
            chosen = picked_there ? cand[1 - m] : cand[m];
        }
    }

    types_.push_back(is_sender ? NodeType::sender : NodeType::receiver);
    choices_.push_back(chosen);
    candidates_.push_back({pair.first, pair.second});
    round_ids_.push_back(pair.round);
    last_node_[pair.first] = j;
    last_node_[pair.second] = j;
    round_to_node_[pair.round] = j;
    return chosen;
}

void DependenceGraph::undo_round(const Undo& undo) {
    const auto j = static_cast<std::size_t>(node_count() - 1);
    const OfflineId first = candidates_[j][0];
    const OfflineId second = candidates_[j][1];

    ante_.resize(undo.ante_size);
    post_.resize(undo.post_size);
    if (undo.prev_last_first)
        last_node_[first] = *undo.prev_last_first;
    else
        last_node_.erase(first);
    if (undo.prev_last_second)
        last_node_[second] = *undo.prev_last_second;
    else
        last_node_.erase(second);
    round_to_node_.erase(undo.round_id);

    types_.pop_back();
    choices_.pop_back();
    candidates_.pop_back();
    round_ids_.pop_back();
}

bool DependenceGraph::same_ex_post_component(int round_id1, int round_id2) const {
    const int a = static_cast<int>(node_of(round_id1));
    const int b = static_cast<int>(node_of(round_id2));
    std::vector<int> parent(types_.size());
    for (std::size_t v = 0; v < parent.size(); ++v) parent[v] = static_cast<int>(v);
    auto find = [&](int v) {
        while (parent[static_cast<std::size_t>(v)] != v) {
            parent[static_cast<std::size_t>(v)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
            v = parent[static_cast<std::size_t>(v)];
        }
        return v;
    };
    for (const auto& arc : post_) {
        const int ra = find(arc.from), rb = find(arc.to);
        if (ra != rb) parent[static_cast<std::size_t>(ra)] = rb;
    }
    return find(a) == find(b);
}

GTable g_table(double p, int K) {
    if (!(p >= 0 && p <= 1)) throw std::invalid_argument("g_table: p outside [0,1]");
    if (K < 0) throw std::invalid_argument("g_table: negative K");
    const double coeff = sender_correlation(p);
    GTable t;
    t.p = p;
    t.g.resize(static_cast<std::size_t>(K) + 1);
    for (int k = 0; k <= K; ++k) {
        if (k <= 1)
            t.g[static_cast<std::size_t>(k)] = 1.0;
        else
            t.g[static_cast<std::size_t>(k)] =
                t.g[static_cast<std::size_t>(k - 1)] - coeff * t.g[static_cast<std::size_t>(k - 2)];
    }
    return t;
}

double sender_correlation(double p) { return p * (1.0 - p) * (1.0 - p / 2.0); }

OptimalSenderProbability optimal_sender_probability() {
    // d/dp [p(1-p)(1-p/2)] = 1 - 3p + (3/2)p^2; the root inside [0,1].
    const double p = (3.0 - std::sqrt(3.0)) / 3.0;
    return {p, sender_correlation(p)};
}

}  // namespace ocsmatch
