#pragma once

#include <array>

#include "shafer/interval.hpp"

namespace shafer {

namespace detail {

inline constexpr int kAsinSeriesTerms = 40;

// t_k = (2k)! / (4^k (k!)^2 (2k+1)), the Maclaurin coefficients of asin,
// enclosed for k = 1..kAsinSeriesTerms+1.
inline const std::array<Interval, kAsinSeriesTerms + 2> &asin_coefficients()
{
    static const auto coeffs = [] {
        std::array<Interval, kAsinSeriesTerms + 2> t{};
        Interval p(1.0);
        for (int k = 1; k <= kAsinSeriesTerms + 1; ++k) {
            p = p * Interval(2.0 * k - 1.0) / Interval(2.0 * k);
            t[k] = p / Interval(2.0 * k + 1.0);
        }
        return t;
    }();
    return coeffs;
}

} // namespace detail

/// Largest argument accepted by asin_excess_enc.
inline constexpr double kAsinSeriesMaxArg = 0.5;

/// Enclosure of (asin x - x) / x^3 over x within [0, 0.5].
///
/// All series coefficients are positive, so the truncated sum is a lower
/// bound and t_{N+1} y^N / (1 - y) bounds the tail from above (y = x^2 <= 1/4).
/// At x = 0 the value is the limit 1/6.
inline Interval asin_excess_enc(const Interval &x)
{
    if (x.lo() < 0.0 || x.hi() > kAsinSeriesMaxArg) {
        throw DomainError("asin_excess_enc: argument outside [0, 0.5]");
    }
    const auto &t = detail::asin_coefficients();
    const Interval y = sqr(x);
    Interval acc = t[detail::kAsinSeriesTerms];
    for (int k = detail::kAsinSeriesTerms - 1; k >= 1; --k) {
        acc = acc * y + t[k];
    }
    Interval yn(1.0);
    for (int i = 0; i < detail::kAsinSeriesTerms; ++i) {
        yn = yn * Interval(y.hi());
    }
    const Interval tail = t[detail::kAsinSeriesTerms + 1] * yn / (Interval(1.0) - Interval(y.hi()));
    return {acc.lo(), rounding::add_up(acc.hi(), tail.hi())};
}

} // namespace shafer
