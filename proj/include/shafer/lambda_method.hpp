#pragma once

// Tangency reduction of phi_{a,b} at x = 0 and the four-way classification of
// the reduced parameter b by the sign structure of h_b'.

#include <cmath>
#include <numbers>
#include <optional>
#include <string_view>

#include "shafer/enclosures.hpp"
#include "shafer/errors.hpp"
#include "shafer/functions.hpp"

namespace shafer {

/// Parameter thresholds of the case analysis.
struct Thresholds {
    double golden_ratio; // (1 + sqrt 5) / 2
    double b1;           // 2 / (pi - 2), least upper bound parameter
    double b2;           // 2, greatest lower bound parameter
};

namespace detail {

inline double ulp(double v) { return std::nextafter(std::fabs(v), INFINITY) - std::fabs(v); }

inline Thresholds compute_thresholds()
{
    const Thresholds t{(1.0 + std::sqrt(5.0)) / 2.0, 2.0 / (std::numbers::pi - 2.0), 2.0};
    const double phi_identity = t.golden_ratio * t.golden_ratio - t.golden_ratio - 1.0;
    const double b1_identity = t.b1 * (std::numbers::pi - 2.0) - 2.0;
    if (std::fabs(phi_identity) > 4.0 * ulp(t.golden_ratio * t.golden_ratio) ||
        std::fabs(b1_identity) > 4.0 * ulp(2.0)) {
        throw std::logic_error("threshold constants fail their defining identities");
    }
    if (!(t.golden_ratio < t.b1 && t.b1 < t.b2)) {
        throw std::logic_error("threshold constants are out of order");
    }
    return t;
}

} // namespace detail

inline const Thresholds &thresholds()
{
    static const Thresholds t = detail::compute_thresholds();
    return t;
}

/// Rigorous enclosure of 2 / (pi - 2).
inline Interval b1_enclosure() { return Interval(2.0) / (pi_enc() - Interval(2.0)); }

/// Rigorous enclosure of (1 + sqrt 5) / 2.
inline Interval golden_ratio_enclosure()
{
    return (Interval(1.0) + sqrt_enc(Interval(5.0))) / Interval(2.0);
}

/// Sign structure of h_b'.
///
/// Intervals are half-open exactly as printed in the case analysis:
///   derivative_nonnegative  0 < b <= phi
///   hump                    phi < b <= b1   (h_b >= 0, rises to d(b) then falls)
///   crossing                b1 < b < 2      (h_b changes sign on (0, 1))
///   derivative_nonpositive  b >= 2
enum class RegimeTag { derivative_nonnegative, hump, crossing, derivative_nonpositive };

inline std::string_view to_string(RegimeTag tag)
{
    switch (tag) {
    case RegimeTag::derivative_nonnegative:
        return "DERIVATIVE_NONNEGATIVE";
    case RegimeTag::hump:
        return "HUMP";
    case RegimeTag::crossing:
        return "CROSSING";
    case RegimeTag::derivative_nonpositive:
        return "DERIVATIVE_NONPOSITIVE";
    }
    return "UNKNOWN";
}

struct Regime {
    RegimeTag tag;
    Thresholds thresholds;
    double b;
    double endpoint_gap;                  // h_b(1)
    std::optional<double> critical_point; // d(b) whenever the radicand is nonnegative
};

inline Regime classify(double b)
{
    if (!(b > 0.0) || !std::isfinite(b)) {
        throw DomainError("classify: b must be positive");
    }
    const Thresholds &t = thresholds();
    RegimeTag tag;
    if (b <= t.golden_ratio) {
        tag = RegimeTag::derivative_nonnegative;
    } else if (b <= t.b1) {
        tag = RegimeTag::hump;
    } else if (b < t.b2) {
        tag = RegimeTag::crossing;
    } else {
        tag = RegimeTag::derivative_nonpositive;
    }
    const ReducedParam rb(b);
    std::optional<double> d;
    if (b >= 1.0 && b <= 2.0) {
        d = critical_point(rb);
    }
    return {tag, t, b, endpoint_gap(rb), d};
}

/// Result of imposing phi_{a,b}(x0) = asin(x0) and phi'_{a,b}(x0) = asin'(x0).
struct TangencyConstraint {
    double anchor = 0.0;

    /// Closed form: a = b + 1.
    [[nodiscard]] double a_for(double b) const
    {
        (void)ReducedParam(b);
        return b + 1.0;
    }

    /// Numeric route: phi is linear in a, so matching the one-sided
    /// difference quotients at the anchor fixes a directly.
    [[nodiscard]] double solve_numerically(double b, double step = 1e-7) const
    {
        (void)ReducedParam(b);
        const FamilyParams unit(1.0, b);
        if (phi(unit, anchor) != target(anchor)) {
            throw std::logic_error("value condition fails at the anchor");
        }
        const double target_slope = (target(anchor + step) - target(anchor)) / step;
        const double unit_slope = (phi(unit, anchor + step) - phi(unit, anchor)) / step;
        return target_slope / unit_slope;
    }
};

/// The lambda-method reduction. Only the anchor x0 = 0 is supported.
inline TangencyConstraint tangency_reduce(double anchor = 0.0)
{
    if (anchor != 0.0) {
        throw UnsupportedAnchor("tangency_reduce: only the anchor x = 0 is supported");
    }
    return TangencyConstraint{anchor};
}

} // namespace shafer
