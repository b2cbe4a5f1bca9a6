#include "ocsmatch/primal_dual.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ocsmatch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// 2^{-k-1} (1-gamma)^{k-1} gamma for k >= 1; zero at k = 0 and at the
/// deterministic sentinel. The amount case 3 prepays into alpha above the
/// edge weight, and case 2 later deducts.
double prepaid_alpha(CandidateCount k, double gamma) {
    if (k.is_infinite() || k.count() < 1) return 0.0;
    const int kc = k.count();
    return std::pow(0.5, kc + 1) * std::pow(1.0 - gamma, kc - 1) * gamma;
}

/// 2^{-k} (1-gamma)^{max(k-1,0)}: the certified unmatched mass at candidate
/// count k; zero once deterministically matched.
double unmatched_floor(CandidateCount k, double gamma) {
    if (k.is_infinite()) return 0.0;
    const int kc = k.count();
    return std::pow(0.5, kc) * std::pow(1.0 - gamma, std::max(kc - 1, 0));
}

}  // namespace

double delta_r_beta(const OfflineState& state, double weight, const GainShareParams& params) {
    if (weight < 0) throw std::invalid_argument("delta_r_beta: negative weight");
    const auto b_of_k =
        map_levels(state.k, {}, [&](double, CandidateCount k) { return params.b_at(k); });
    const auto prefix_of_k =
        map_levels(state.k, {}, [&](double, CandidateCount k) { return params.a_prefix(k); });
    return b_of_k.integrate_range(0.0, weight) - 0.5 * prefix_of_k.integrate_range(weight, kInf);
}

double delta_d_beta(const OfflineState& state, double weight, const GainShareParams& params) {
    return params.kappa * delta_r_beta(state, weight, params);
}

const char* round_kind_name(RoundDecision::Kind kind) {
    switch (kind) {
        case RoundDecision::Kind::randomized: return "randomized";
        case RoundDecision::Kind::deterministic: return "deterministic";
        case RoundDecision::Kind::unmatched: return "unmatched";
    }
    throw std::logic_error("round_kind_name: bad kind");
}

Matcher::Matcher(int n_offline, GainShareParams params, OcsVariant variant, std::uint64_t seed)
    : params_(std::move(params)) {
    if (n_offline < 1) throw std::invalid_argument("Matcher: need at least one offline vertex");
    params_.require_consistent();
    if (std::abs(params_.gamma - ocs_gamma(variant)) > 1e-12)
        throw std::invalid_argument("Matcher: params gamma does not match the selector variant");
    states_.resize(static_cast<std::size_t>(n_offline));
    heaviest_matched_.assign(static_cast<std::size_t>(n_offline), -1.0);
    selector_ = make_selection_session(variant, seed);
}

const RoundDecision& Matcher::arrive(std::span<const double> weights) {
    const auto n = states_.size();
    if (weights.size() != n) throw std::invalid_argument("Matcher::arrive: weight row size mismatch");
    for (double w : weights)
        if (!(w >= 0) || !std::isfinite(w))
            throw std::invalid_argument("Matcher::arrive: weights must be finite and nonnegative");

    RoundDecision decision;
    decision.delta_r.resize(n);
    decision.delta_d.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        decision.delta_r[i] = delta_r_beta(states_[i], weights[i], params_);
        decision.delta_d[i] = params_.kappa * decision.delta_r[i];
    }

    // Ranking: larger increment first, lower id on ties.
    auto better = [](const std::vector<double>& v, std::size_t a, std::size_t b) {
        return v[a] > v[b] || (v[a] == v[b] && a < b);
    };
    std::size_t best = 0, second = n, best_d = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (better(decision.delta_r, i, best)) {
            second = best;
            best = i;
        } else if (second == n || better(decision.delta_r, i, second)) {
            second = i;
        }
        if (better(decision.delta_d, i, best_d)) best_d = i;
    }

    const double det_gain = decision.delta_d[best_d];
    const bool have_pair = n >= 2;
    const double rand_gain =
        have_pair ? decision.delta_r[best] + decision.delta_r[second] : -kInf;

    // Randomized wins the exact tie against both zero and the deterministic
    // offer; with a single offline vertex only deterministic-vs-unmatched
    // remains.
    if (have_pair && rand_gain >= det_gain && rand_gain >= 0) {
        decision.kind = RoundDecision::Kind::randomized;
        decision.first = static_cast<OfflineId>(best);
        decision.second = static_cast<OfflineId>(second);
        decision.beta = rand_gain;
    } else if (det_gain >= 0) {
        decision.kind = RoundDecision::Kind::deterministic;
        decision.matched = static_cast<OfflineId>(best_d);
        decision.beta = det_gain;
    } else {
        decision.kind = RoundDecision::Kind::unmatched;
        decision.beta = 0;
    }

    const double surrogate_before = surrogate_;
    const double dual_before = dual_;
    dual_ += decision.beta;

    switch (decision.kind) {
        case RoundDecision::Kind::randomized: {
            const CandidatePair pair{rounds_seen(), decision.first, decision.second};
            // Per-candidate gain split: the surrogate gain from each candidate
            // covers its alpha increase plus its beta contribution.
            for (OfflineId i : {decision.first, decision.second}) {
                const auto gains = apply_randomized(i, weights[static_cast<std::size_t>(i)]);
                note_slack(gains.surrogate - gains.alpha -
                           decision.delta_r[static_cast<std::size_t>(i)]);
            }
            decision.matched = selector_->select(pair);
            break;
        }
        case RoundDecision::Kind::deterministic:
            apply_deterministic(decision.matched, weights[static_cast<std::size_t>(decision.matched)]);
            break;
        case RoundDecision::Kind::unmatched: break;
    }

    if (decision.matched >= 0) {
        auto& heaviest = heaviest_matched_[static_cast<std::size_t>(decision.matched)];
        heaviest = std::max(heaviest, weights[static_cast<std::size_t>(decision.matched)]);
    }

    decision.surrogate_gain = surrogate_ - surrogate_before;
    decision.dual_gain = dual_ - dual_before;
    note_slack(decision.surrogate_gain - decision.dual_gain);

    arrivals_.emplace_back(weights.begin(), weights.end());
    decisions_.push_back(std::move(decision));
    return decisions_.back();
}

Matcher::CandidateGains Matcher::apply_randomized(OfflineId id, double weight) {
    auto& st = states_[static_cast<std::size_t>(id)];
    const double gamma = params_.gamma;
    const double w_last = st.w_last;
    const double extra[2] = {w_last, weight};

    const double y_before = st.y_bar.integrate();
    const double alpha_before = st.alpha.integrate();
    surrogate_ -= y_before;
    dual_ -= alpha_before;

    // Alpha: base share below the edge weight, minus the already-prepaid part
    // on levels starting a new consecutive sequence, plus the prepayment above
    // the edge weight (paid back by the second term of the beta increments).
    st.alpha = zip_map(st.alpha, st.k, extra, [&](double hi, double alpha, CandidateCount k) {
        if (hi <= weight) {
            if (k == CandidateCount(0) || hi <= w_last) return alpha + params_.a_at(k);
            return alpha + params_.a_at(k) - prepaid_alpha(k, gamma);
        }
        if (!(k == CandidateCount(0))) return alpha + prepaid_alpha(k, gamma);
        return alpha;
    });

    // y_bar: halve the unmatched mass below the edge weight; keep the extra
    // (1-gamma) only where the previous randomized round also covered the
    // level, i.e. where the consecutive sequence continues.
    st.y_bar = map_levels(st.y_bar, extra, [&](double hi, double y) {
        if (hi > weight) return y;
        const double factor = hi <= w_last ? 0.5 * (1.0 - gamma) : 0.5;
        return 1.0 - (1.0 - y) * factor;
    });

    st.k = st.k.transform_below(weight, [](CandidateCount k) { return k.incremented(); });
    st.w_last = weight;

    const double y_after = st.y_bar.integrate();
    const double alpha_after = st.alpha.integrate();
    surrogate_ += y_after;
    dual_ += alpha_after;
    check_offline_invariants(st);
    return {y_after - y_before, alpha_after - alpha_before};
}

void Matcher::apply_deterministic(OfflineId id, double weight) {
    auto& st = states_[static_cast<std::size_t>(id)];

    surrogate_ -= st.y_bar.integrate();
    dual_ -= st.alpha.integrate();

    st.alpha = zip_map(st.alpha, st.k, std::array{weight}, [&](double hi, double alpha, CandidateCount k) {
        return hi <= weight ? alpha + params_.a_suffix(k) : alpha;
    });
    st.y_bar = map_levels(st.y_bar, std::array{weight},
                          [&](double hi, double y) { return hi <= weight ? 1.0 : y; });
    st.k = st.k.transform_below(weight, [](CandidateCount) { return CandidateCount::infinity(); });

    surrogate_ += st.y_bar.integrate();
    dual_ += st.alpha.integrate();
    check_offline_invariants(st);
}

void Matcher::check_offline_invariants(const OfflineState& st) {
    const auto alpha_floor = zip_map(st.alpha, st.k, {}, [&](double, double alpha, CandidateCount k) {
        return alpha - params_.a_prefix(k);
    });
    for (double v : alpha_floor.piece_values()) note_slack(v);
    note_slack(alpha_floor.tail());

    const auto y_floor = zip_map(st.y_bar, st.k, {}, [&](double, double y, CandidateCount k) {
        return (1.0 - y) - unmatched_floor(k, params_.gamma);
    });
    for (double v : y_floor.piece_values()) note_slack(v);
    note_slack(y_floor.tail());
}

void Matcher::note_slack(double slack) {
    worst_invariant_slack_ = std::min(worst_invariant_slack_, slack);
    if (slack < -kTol) ++invariant_violations_;
}

double Matcher::realized_value() const {
    double total = 0;
    for (double w : heaviest_matched_)
        if (w > 0) total += w;
    return total;
}

FeasibilityReport Matcher::audit_dual_feasibility() const {
    return audit_dual_feasibility(params_.Gamma);
}

FeasibilityReport Matcher::audit_dual_feasibility(double Gamma, double tol) const {
    FeasibilityReport report;
    report.Gamma = Gamma;
    report.min_slack = kInf;
    std::vector<double> alpha_mass(states_.size());
    for (std::size_t i = 0; i < states_.size(); ++i) alpha_mass[i] = states_[i].alpha.integrate();
    if (arrivals_.empty()) {
        report.min_slack = 0;
        return report;
    }
    for (std::size_t j = 0; j < arrivals_.size(); ++j) {
        for (std::size_t i = 0; i < states_.size(); ++i) {
            const double slack = alpha_mass[i] + decisions_[j].beta - Gamma * arrivals_[j][i];
            report.min_slack = std::min(report.min_slack, slack);
            if (slack < -tol)
                report.violations.push_back({static_cast<OfflineId>(i), static_cast<int>(j), slack});
        }
    }
    return report;
}

}  // namespace ocsmatch
