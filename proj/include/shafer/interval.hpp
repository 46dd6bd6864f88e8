#pragma once

// Outward-rounded interval arithmetic over binary64.
//
// Every operation is computed in round-to-nearest and then stepped one ulp
// outward on any bound whose rounding error points inward. The direction of
// the rounding error is recovered exactly with error-free transformations
// (TwoSum, fma residuals), so exact results stay exact and inexact ones are
// widened by a single nextafter step. No hardware rounding-mode switches.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "shafer/errors.hpp"

namespace shafer {

namespace rounding {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double next_down(double v) { return std::nextafter(v, -kInf); }
inline double next_up(double v) { return std::nextafter(v, kInf); }

// Below this magnitude fma residuals may underflow and lose their sign, so we
// widen unconditionally.
inline constexpr double kResidualFloor = 0x1p-960;

inline double add_down(double a, double b)
{
    const double s = a + b;
    const double bb = s - a;
    const double err = (a - (s - bb)) + (b - bb);
    return err < 0.0 ? next_down(s) : s;
}

inline double add_up(double a, double b)
{
    const double s = a + b;
    const double bb = s - a;
    const double err = (a - (s - bb)) + (b - bb);
    return err > 0.0 ? next_up(s) : s;
}

inline double sub_down(double a, double b) { return add_down(a, -b); }
inline double sub_up(double a, double b) { return add_up(a, -b); }

inline double mul_down(double a, double b)
{
    const double p = a * b;
    if (p != 0.0 && std::fabs(p) < kResidualFloor) {
        return next_down(p);
    }
    if (p == 0.0) {
        return (a == 0.0 || b == 0.0) ? 0.0 : next_down(p);
    }
    return std::fma(a, b, -p) < 0.0 ? next_down(p) : p;
}

inline double mul_up(double a, double b)
{
    const double p = a * b;
    if (p != 0.0 && std::fabs(p) < kResidualFloor) {
        return next_up(p);
    }
    if (p == 0.0) {
        return (a == 0.0 || b == 0.0) ? 0.0 : next_up(p);
    }
    return std::fma(a, b, -p) > 0.0 ? next_up(p) : p;
}

// Sign of (a/b - RN(a/b)), or 2 when it cannot be trusted.
inline int div_residual_sign(double a, double b, double q)
{
    if (a == 0.0) {
        return 0;
    }
    if (q == 0.0 || std::fabs(q) < kResidualFloor || std::fabs(a) < kResidualFloor) {
        return 2;
    }
    const double r = std::fma(-q, b, a);
    const int rs = (r > 0.0) - (r < 0.0);
    return b > 0.0 ? rs : -rs;
}

inline double div_down(double a, double b)
{
    const double q = a / b;
    const int s = div_residual_sign(a, b, q);
    return (s < 0 || s == 2) ? next_down(q) : q;
}

inline double div_up(double a, double b)
{
    const double q = a / b;
    const int s = div_residual_sign(a, b, q);
    return (s > 0 || s == 2) ? next_up(q) : q;
}

inline double sqrt_down(double v)
{
    const double s = std::sqrt(v);
    if (s == 0.0) {
        return 0.0;
    }
    if (v < kResidualFloor) {
        return next_down(s);
    }
    return std::fma(-s, s, v) < 0.0 ? next_down(s) : s;
}

inline double sqrt_up(double v)
{
    const double s = std::sqrt(v);
    if (v == 0.0) {
        return 0.0;
    }
    if (v < kResidualFloor) {
        return next_up(s);
    }
    return std::fma(-s, s, v) > 0.0 ? next_up(s) : s;
}

} // namespace rounding

/// Closed interval [lo, hi] of binary64 values.
///
/// Invariant: lo <= hi, both finite. Results of arithmetic contain the exact
/// real result for every choice of members of the operands.
class Interval {
public:
    constexpr Interval() = default;
    constexpr Interval(double v) : lo_(v), hi_(v) {} // NOLINT(google-explicit-constructor)
    Interval(double lo, double hi) : lo_(lo), hi_(hi)
    {
        if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
            throw DomainError("interval bounds must be finite with lo <= hi");
        }
    }

    [[nodiscard]] constexpr double lo() const { return lo_; }
    [[nodiscard]] constexpr double hi() const { return hi_; }
    [[nodiscard]] constexpr double width() const { return hi_ - lo_; }
    [[nodiscard]] constexpr double mid() const { return lo_ + 0.5 * (hi_ - lo_); }
    [[nodiscard]] constexpr bool is_point() const { return lo_ == hi_; }

    [[nodiscard]] constexpr bool contains(double v) const { return lo_ <= v && v <= hi_; }
    [[nodiscard]] constexpr bool contains(const Interval &o) const
    {
        return lo_ <= o.lo_ && o.hi_ <= hi_;
    }
    [[nodiscard]] constexpr bool contains_zero() const { return lo_ <= 0.0 && 0.0 <= hi_; }

    friend constexpr bool operator==(const Interval &, const Interval &) = default;

private:
    double lo_ = 0.0;
    double hi_ = 0.0;
};

inline Interval hull(const Interval &x, const Interval &y)
{
    return {std::min(x.lo(), y.lo()), std::max(x.hi(), y.hi())};
}

inline Interval operator-(const Interval &x) { return {-x.hi(), -x.lo()}; }

inline Interval operator+(const Interval &x, const Interval &y)
{
    return {rounding::add_down(x.lo(), y.lo()), rounding::add_up(x.hi(), y.hi())};
}

inline Interval operator-(const Interval &x, const Interval &y)
{
    return {rounding::sub_down(x.lo(), y.hi()), rounding::sub_up(x.hi(), y.lo())};
}

inline Interval operator*(const Interval &x, const Interval &y)
{
    using rounding::mul_down;
    using rounding::mul_up;
    const double lo = std::min({mul_down(x.lo(), y.lo()), mul_down(x.lo(), y.hi()),
                                mul_down(x.hi(), y.lo()), mul_down(x.hi(), y.hi())});
    const double hi = std::max({mul_up(x.lo(), y.lo()), mul_up(x.lo(), y.hi()),
                                mul_up(x.hi(), y.lo()), mul_up(x.hi(), y.hi())});
    return {lo, hi};
}

inline Interval operator/(const Interval &x, const Interval &y)
{
    if (y.contains_zero()) {
        throw DomainError("interval division by an interval containing zero");
    }
    using rounding::div_down;
    using rounding::div_up;
    const double lo = std::min({div_down(x.lo(), y.lo()), div_down(x.lo(), y.hi()),
                                div_down(x.hi(), y.lo()), div_down(x.hi(), y.hi())});
    const double hi = std::max({div_up(x.lo(), y.lo()), div_up(x.lo(), y.hi()),
                                div_up(x.hi(), y.lo()), div_up(x.hi(), y.hi())});
    return {lo, hi};
}

inline Interval scale(const Interval &x, double c) { return x * Interval(c); }

/// x^2, tight for intervals straddling zero.
inline Interval sqr(const Interval &x)
{
    const double alo = x.contains_zero() ? 0.0 : std::min(std::fabs(x.lo()), std::fabs(x.hi()));
    const double ahi = std::max(std::fabs(x.lo()), std::fabs(x.hi()));
    return {rounding::mul_down(alo, alo), rounding::mul_up(ahi, ahi)};
}

/// 1 - x^2 for x within [-1, 1], evaluated endpoint-wise as (1-x)(1+x).
inline Interval one_minus_sq(const Interval &x)
{
    if (x.lo() < -1.0 || x.hi() > 1.0) {
        throw DomainError("one_minus_sq: argument outside [-1, 1]");
    }
    const double alo = x.contains_zero() ? 0.0 : std::min(std::fabs(x.lo()), std::fabs(x.hi()));
    const double ahi = std::max(std::fabs(x.lo()), std::fabs(x.hi()));
    // 1 - a is exact for a in [0.5, 1] and otherwise rounded; treat as inexact.
    const double lo = rounding::mul_down(rounding::sub_down(1.0, ahi), rounding::add_down(1.0, ahi));
    const double hi = rounding::mul_up(rounding::sub_up(1.0, alo), rounding::add_up(1.0, alo));
    return {std::max(lo, 0.0), hi};
}

inline constexpr double kSqrtClampTolerance = 1e-15;

/// Enclosure of sqrt over x. A lower bound in [-1e-15, 0) is clamped to 0.
inline Interval sqrt_enc(const Interval &x)
{
    if (x.hi() < 0.0) {
        throw DomainError("sqrt_enc: interval lies below zero");
    }
    double lo = x.lo();
    if (lo < 0.0) {
        if (lo < -kSqrtClampTolerance) {
            throw DomainError("sqrt_enc: lower bound below the clamp tolerance");
        }
        lo = 0.0;
    }
    return {rounding::sqrt_down(lo), rounding::sqrt_up(x.hi())};
}

/// Number of ulps platform asin evaluations are widened by.
inline constexpr int kAsinUlps = 4;

/// Enclosure of asin over x, x within [-1, 1].
inline Interval asin_enc(const Interval &x)
{
    if (x.lo() < -1.0 || x.hi() > 1.0) {
        throw DomainError("asin_enc: argument outside [-1, 1]");
    }
    double lo = std::asin(x.lo());
    double hi = std::asin(x.hi());
    for (int i = 0; i < kAsinUlps; ++i) {
        lo = rounding::next_down(lo);
        hi = rounding::next_up(hi);
    }
    // asin(0) = 0 and asin is odd, so the sign of the bounds is exact.
    if (x.lo() >= 0.0) {
        lo = std::max(lo, 0.0);
    }
    if (x.hi() <= 0.0) {
        hi = std::min(hi, 0.0);
    }
    return {lo, hi};
}

/// [nextdown(pi64), nextup(pi64)].
inline Interval pi_enc()
{
    return {rounding::next_down(std::numbers::pi), rounding::next_up(std::numbers::pi)};
}

inline std::ostream &operator<<(std::ostream &os, const Interval &x)
{
    return os << '[' << x.lo() << ", " << x.hi() << ']';
}

} // namespace shafer
