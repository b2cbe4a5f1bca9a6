#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <concepts>
#include <limits>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

namespace ocsmatch {

/// Candidate count at a weight level: a nonnegative integer, or a sentinel
/// meaning "deterministically matched at this level". The sentinel is a tagged
/// value rather than a large float so that truncated parameter sums can tell
/// the two states apart.
class CandidateCount {
public:
    constexpr CandidateCount() = default;
    constexpr explicit CandidateCount(int count) : raw_(count) {
        if (count < 0) throw std::invalid_argument("CandidateCount: negative count");
    }

    static constexpr CandidateCount infinity() {
        CandidateCount c;
        c.raw_ = kInfinite;
        return c;
    }

    constexpr bool is_infinite() const { return raw_ == kInfinite; }

    constexpr int count() const {
        if (is_infinite()) throw std::logic_error("CandidateCount: count() on infinite");
        return raw_;
    }

    /// +1, saturating at the sentinel.
    constexpr CandidateCount incremented() const {
        return is_infinite() ? *this : CandidateCount(raw_ + 1);
    }

    friend constexpr bool operator==(CandidateCount a, CandidateCount b) = default;

    friend constexpr bool operator<(CandidateCount a, CandidateCount b) {
        if (a.is_infinite()) return false;
        if (b.is_infinite()) return true;
        return a.raw_ < b.raw_;
    }
    friend constexpr bool operator<=(CandidateCount a, CandidateCount b) { return !(b < a); }
    friend constexpr bool operator>(CandidateCount a, CandidateCount b) { return b < a; }
    friend constexpr bool operator>=(CandidateCount a, CandidateCount b) { return !(a < b); }

private:
    static constexpr int kInfinite = -1;
    int raw_ = 0;
};

/// Right-continuous piecewise-constant function of a nonnegative weight level.
///
/// Piece t takes values_[t] on the half-open interval
/// (breakpoints_[t-1], breakpoints_[t]], with an implicit lower end of 0 for
/// the first piece; tail_ applies on (breakpoints_.back(), +inf). Breakpoints
/// only ever come from input edge weights copied verbatim, so all breakpoint
/// comparisons are exact.
///
/// Instances are kept canonical: breakpoints strictly increasing and > 0,
/// adjacent equal-valued pieces merged, no trailing piece equal to the tail.
/// Two StepFunctions equal as functions therefore compare equal as data.
template <typename V>
class StepFunction {
public:
    /// Constant tail value everywhere (default: V{} everywhere).
    StepFunction() = default;
    explicit StepFunction(V everywhere) : tail_(std::move(everywhere)) {}

    StepFunction(std::vector<double> breakpoints, std::vector<V> values, V tail)
        : breaks_(std::move(breakpoints)), values_(std::move(values)), tail_(std::move(tail)) {
        validate();
        canonicalize();
    }

    /// `value` on (0, w], `V{}` above.
    static StepFunction box(double w, V value) {
        if (w < 0) throw std::invalid_argument("StepFunction::box: negative width");
        if (w == 0) return StepFunction{};
        return StepFunction({w}, {std::move(value)}, V{});
    }

    const std::vector<double>& breakpoints() const { return breaks_; }
    const std::vector<V>& piece_values() const { return values_; }
    const V& tail() const { return tail_; }
    std::size_t piece_count() const { return values_.size(); }

    /// Value at weight level w > 0.
    V at(double w) const {
        assert(w > 0);
        auto it = std::lower_bound(breaks_.begin(), breaks_.end(), w);
        if (it == breaks_.end()) return tail_;
        return values_[static_cast<std::size_t>(it - breaks_.begin())];
    }

    friend bool operator==(const StepFunction& a, const StepFunction& b) = default;

    /// Result equals g(f(w)) on (0, w] and f(w) elsewhere.
    template <typename Fn>
    StepFunction transform_below(double w, Fn&& g) const {
        if (w < 0) throw std::invalid_argument("transform_below: negative level");
        if (w == 0) return *this;
        StepFunction out;
        out.tail_ = tail_;
        bool split = false;
        for (std::size_t t = 0; t < breaks_.size(); ++t) {
            if (!split && breaks_[t] >= w) {
                if (breaks_[t] > w) {
                    out.breaks_.push_back(w);
                    out.values_.push_back(g(values_[t]));
                }
                split = true;
                if (breaks_[t] == w) {
                    out.breaks_.push_back(breaks_[t]);
                    out.values_.push_back(g(values_[t]));
                    continue;
                }
            }
            out.breaks_.push_back(breaks_[t]);
            out.values_.push_back(split ? values_[t] : g(values_[t]));
        }
        if (!split) {
            // w lies beyond every breakpoint: the tail is partially remapped.
            out.breaks_.push_back(w);
            out.values_.push_back(g(tail_));
        }
        out.canonicalize();
        return out;
    }

    /// Area under the function; requires finite support (tail 0).
    double integrate() const
        requires std::floating_point<V>
    {
        return integrate_range(0.0, std::numeric_limits<double>::infinity());
    }

    /// Integral over (lo, hi]; hi may be +inf when the tail is 0.
    double integrate_range(double lo, double hi) const
        requires std::floating_point<V>
    {
        if (!(lo >= 0) || !(hi >= lo)) throw std::invalid_argument("integrate_range: bad bounds");
        for (const V& v : values_)
            if (!std::isfinite(static_cast<double>(v))) throw std::domain_error("non-numeric function");
        if (!std::isfinite(static_cast<double>(tail_))) throw std::domain_error("non-numeric function");
        const bool unbounded = std::isinf(hi);
        if (unbounded && tail_ != V{0}) throw std::domain_error("unbounded integral");

        double total = 0;
        double prev = 0;
        for (std::size_t t = 0; t < breaks_.size(); ++t) {
            const double a = std::max(prev, lo);
            const double b = std::min(breaks_[t], hi);
            if (b > a) total += static_cast<double>(values_[t]) * (b - a);
            prev = breaks_[t];
        }
        if (!unbounded && hi > prev) {
            const double a = std::max(prev, lo);
            if (hi > a) total += static_cast<double>(tail_) * (hi - a);
        }
        return total;
    }

    /// True when values (pieces then tail) are weakly decreasing in w.
    bool non_increasing() const {
        for (std::size_t t = 0; t + 1 < values_.size(); ++t)
            if (values_[t] < values_[t + 1]) return false;
        if (!values_.empty() && values_.back() < tail_) return false;
        return true;
    }

    template <typename A, typename B, typename Fn>
    friend auto zip_map(const StepFunction<A>& f, const StepFunction<B>& g,
                        std::span<const double> extra_breakpoints, Fn&& fn);

private:
    void validate() const {
        if (breaks_.size() != values_.size())
            throw std::invalid_argument("StepFunction: breakpoints/values size mismatch");
        double prev = -1;
        for (double b : breaks_) {
            if (!(b >= 0) || !std::isfinite(b))
                throw std::invalid_argument("StepFunction: breakpoints must be finite and >= 0");
            if (b <= prev && prev >= 0)
                throw std::invalid_argument("StepFunction: breakpoints must be strictly increasing");
            prev = b;
        }
    }

    void canonicalize() {
        // A breakpoint at 0 delimits the empty interval (0, 0].
        if (!breaks_.empty() && breaks_.front() == 0) {
            breaks_.erase(breaks_.begin());
            values_.erase(values_.begin());
        }
        std::size_t w = 0;
        for (std::size_t t = 0; t < breaks_.size(); ++t) {
            if (w > 0 && values_[t] == values_[w - 1]) {
                breaks_[w - 1] = breaks_[t];  // merge with previous piece
            } else {
                breaks_[w] = breaks_[t];
                values_[w] = values_[t];
                ++w;
            }
        }
        breaks_.resize(w);
        values_.resize(w);
        while (!values_.empty() && values_.back() == tail_) {
            breaks_.pop_back();
            values_.pop_back();
        }
    }

    std::vector<double> breaks_;
    std::vector<V> values_;
    V tail_{};
};

/// Pointwise combination of two step functions on the merged breakpoint grid
/// (optionally refined by extra levels). `fn(hi, a, b)` receives the upper
/// endpoint of each merged piece (+inf for the tail), so callers can classify
/// pieces against thresholds exactly, provided the thresholds are in the grid.
template <typename A, typename B, typename Fn>
auto zip_map(const StepFunction<A>& f, const StepFunction<B>& g,
             std::span<const double> extra_breakpoints, Fn&& fn) {
    using R = std::decay_t<decltype(fn(1.0, f.tail(), g.tail()))>;
    std::vector<double> grid;
    grid.reserve(f.breakpoints().size() + g.breakpoints().size() + extra_breakpoints.size());
    grid.insert(grid.end(), f.breakpoints().begin(), f.breakpoints().end());
    grid.insert(grid.end(), g.breakpoints().begin(), g.breakpoints().end());
    for (double w : extra_breakpoints)
        if (w > 0 && std::isfinite(w)) grid.push_back(w);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::vector<R> values;
    values.reserve(grid.size());
    for (double hi : grid) values.push_back(fn(hi, f.at(hi), g.at(hi)));
    R tail = fn(std::numeric_limits<double>::infinity(), f.tail(), g.tail());
    return StepFunction<R>(std::move(grid), std::move(values), std::move(tail));
}

/// Unary counterpart of zip_map.
template <typename A, typename Fn>
auto map_levels(const StepFunction<A>& f, std::span<const double> extra_breakpoints, Fn&& fn) {
    return zip_map(f, StepFunction<int>{}, extra_breakpoints,
                   [&fn](double hi, const A& a, int) { return fn(hi, a); });
}

}  // namespace ocsmatch
