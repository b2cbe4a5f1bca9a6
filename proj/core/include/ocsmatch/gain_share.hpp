#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "ocsmatch/step_function.hpp"

namespace ocsmatch {

/// Gain-sharing parameters: per-count splits a(k), b(k) for 0 <= k <= k_max
/// (zero beyond), the OCS correlation strength gamma, the deterministic-round
/// scale kappa, and the certified ratio Gamma.
struct GainShareParams {
    std::vector<double> a;
    std::vector<double> b;
    double gamma = 0;
    double kappa = 0;
    double Gamma = 0;
    int k_max = 0;

    double a_at(CandidateCount k) const {
        if (k.is_infinite() || k.count() > k_max) return 0.0;
        return a[static_cast<std::size_t>(k.count())];
    }

    double b_at(CandidateCount k) const {
        if (k.is_infinite() || k.count() > k_max) return 0.0;
        return b[static_cast<std::size_t>(k.count())];
    }

    /// Sum of a(l) for 0 <= l < k, truncated at k_max; the full sum when k is
    /// the deterministic sentinel.
    double a_prefix(CandidateCount k) const {
        std::size_t n = k.is_infinite() ? a.size()
                                        : std::min<std::size_t>(a.size(), static_cast<std::size_t>(k.count()));
        double s = 0;
        for (std::size_t l = 0; l < n; ++l) s += a[l];
        return s;
    }

    /// Sum of a(l) for k <= l <= k_max; zero when k is the sentinel.
    double a_suffix(CandidateCount k) const {
        if (k.is_infinite()) return 0.0;
        double s = 0;
        for (std::size_t l = static_cast<std::size_t>(k.count()); l < a.size(); ++l) s += a[l];
        return s;
    }

    double a_total() const { return a_prefix(CandidateCount::infinity()); }

    void require_consistent() const {
        if (a.size() != static_cast<std::size_t>(k_max) + 1 || b.size() != a.size())
            throw std::invalid_argument("GainShareParams: a/b must have k_max+1 entries");
        if (!(gamma >= 0 && gamma <= 1)) throw std::invalid_argument("GainShareParams: gamma outside [0,1]");
        if (!(kappa >= 0 && kappa <= 2)) throw std::invalid_argument("GainShareParams: kappa outside [0,2]");
        for (double v : a)
            if (v < -1e-12) throw std::invalid_argument("GainShareParams: negative a(k)");
        for (double v : b)
            if (v < -1e-12) throw std::invalid_argument("GainShareParams: negative b(k)");
    }
};

}  // namespace ocsmatch
