#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ocsmatch {

/// Exact dyadic rational num / 2^exp, normalized so num is odd or zero.
/// All randomness in the original selector is fair bits and the recurrence
/// coefficient is 1/16, so every probability handled here is dyadic; sums and
/// comparisons are exact. Overflow throws rather than silently rounding.
class Dyadic {
public:
    constexpr Dyadic() = default;
    Dyadic(std::int64_t num, int exp) : num_(num), exp_(exp) {
        if (exp < 0) throw std::invalid_argument("Dyadic: negative exponent");
        normalize();
    }

    static Dyadic zero() { return {}; }
    static Dyadic one() { return {1, 0}; }
    /// 2^{-k}
    static Dyadic half_pow(int k) { return {1, k}; }

    std::int64_t numerator() const { return num_; }
    int log2_denominator() const { return exp_; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(std::int64_t{1} << exp_); }

    friend Dyadic operator+(const Dyadic& a, const Dyadic& b) {
        const int e = a.exp_ > b.exp_ ? a.exp_ : b.exp_;
        const __int128 n =
            (static_cast<__int128>(a.num_) << (e - a.exp_)) + (static_cast<__int128>(b.num_) << (e - b.exp_));
        return from_wide(n, e);
    }

    friend Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + Dyadic(-b.num_, b.exp_); }

    friend Dyadic operator*(const Dyadic& a, const Dyadic& b) {
        return from_wide(static_cast<__int128>(a.num_) * b.num_, a.exp_ + b.exp_);
    }

    friend bool operator==(const Dyadic& a, const Dyadic& b) = default;

    friend bool operator<(const Dyadic& a, const Dyadic& b) {
        const int e = a.exp_ > b.exp_ ? a.exp_ : b.exp_;
        return (static_cast<__int128>(a.num_) << (e - a.exp_)) <
               (static_cast<__int128>(b.num_) << (e - b.exp_));
    }
    friend bool operator<=(const Dyadic& a, const Dyadic& b) { return !(b < a); }
    friend bool operator>(const Dyadic& a, const Dyadic& b) { return b < a; }
    friend bool operator>=(const Dyadic& a, const Dyadic& b) { return !(a < b); }

    std::string to_string() const {
        return std::to_string(num_) + "/2^" + std::to_string(exp_);
    }

private:
    static Dyadic from_wide(__int128 num, int exp) {
        while (num != 0 && (num & 1) == 0 && exp > 0) {
            num >>= 1;
            --exp;
        }
        if (num == 0) exp = 0;
        constexpr __int128 limit = static_cast<__int128>(1) << 62;
        if (num >= limit || num <= -limit || exp > 62) throw std::overflow_error("Dyadic overflow");
        Dyadic d;
        d.num_ = static_cast<std::int64_t>(num);
        d.exp_ = exp;
        return d;
    }

    void normalize() {
        *this = from_wide(num_, exp_);
    }

    std::int64_t num_ = 0;
    int exp_ = 0;
};

}  // namespace ocsmatch
