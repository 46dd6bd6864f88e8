#pragma once

// Scalar evaluation of the bounding family and the distance to asin.
//
//   phi_{a,b}(x) = a x / (b + sqrt(1 - x^2))
//   f_b(x)       = phi_{b+1,b}(x)
//   h_b(x)       = f_b(x) - asin x
//
// Scalar routines use the plain formulas in binary64; rigorous work goes
// through the interval forms in enclosures.hpp.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "shafer/errors.hpp"

namespace shafer {

/// Parameters (a, b) of the two-parameter family, both strictly positive.
class FamilyParams {
public:
    FamilyParams(double a, double b) : a_(a), b_(b)
    {
        if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
            throw DomainError("family parameters must satisfy a > 0 and b > 0");
        }
    }
    [[nodiscard]] double a() const { return a_; }
    [[nodiscard]] double b() const { return b_; }

private:
    double a_;
    double b_;
};

/// The tangency-reduced parameter b; the numerator is always b + 1.
class ReducedParam {
public:
    explicit ReducedParam(double b) : b_(b)
    {
        if (!(b > 0.0) || !std::isfinite(b)) {
            throw DomainError("reduced parameter must satisfy b > 0");
        }
    }
    [[nodiscard]] double b() const { return b_; }
    [[nodiscard]] double a() const { return b_ + 1.0; }
    [[nodiscard]] FamilyParams family() const { return {b_ + 1.0, b_}; }

private:
    double b_;
};

namespace detail {

inline void require_unit(double x, const char *what)
{
    if (!(x >= 0.0 && x <= 1.0)) {
        throw DomainError(std::string(what) + ": x must lie in [0, 1]");
    }
}

// sqrt(1 - x^2) with 1 - x^2 formed as (1 - x)(1 + x).
inline double cosine_of_asin(double x) { return std::sqrt((1.0 - x) * (1.0 + x)); }

} // namespace detail

inline double phi(const FamilyParams &p, double x)
{
    detail::require_unit(x, "phi");
    return p.a() * x / (p.b() + detail::cosine_of_asin(x));
}

inline double f(const ReducedParam &b, double x)
{
    detail::require_unit(x, "f");
    return phi(b.family(), x);
}

inline double target(double x)
{
    detail::require_unit(x, "target");
    return std::asin(x);
}

/// h_b(1) = 1 + 1/b - pi/2. Nonnegative iff b <= 2/(pi - 2).
inline double endpoint_gap(const ReducedParam &b)
{
    return 1.0 + 1.0 / b.b() - std::numbers::pi / 2.0;
}

/// h_b(x) = f_b(x) - asin x. At x = 1 the closed form endpoint_gap is used.
inline double h(const ReducedParam &b, double x)
{
    detail::require_unit(x, "h");
    if (x == 1.0) {
        return endpoint_gap(b);
    }
    return f(b, x) - std::asin(x);
}

/// sqrt(1 - x^2) - (b^2 - b - 1); same sign as h_b'(x) on (0, 1).
inline double derivative_sign_term(const ReducedParam &b, double x)
{
    detail::require_unit(x, "derivative_sign_term");
    const double c = b.b() * b.b() - b.b() - 1.0;
    return detail::cosine_of_asin(x) - c;
}

/// dh_b/dx = (s - (b^2 - b - 1)) x^2 / ((b + s)^2 (1 - x^2 + s)), s = sqrt(1 - x^2).
/// The formula has a pole at x = 1.
inline double h_prime(const ReducedParam &b, double x)
{
    detail::require_unit(x, "h_prime");
    if (x == 1.0) {
        throw DomainError("h_prime: the derivative formula is singular at x = 1");
    }
    const double one_minus_x2 = (1.0 - x) * (1.0 + x);
    const double s = std::sqrt(one_minus_x2);
    const double c = b.b() * b.b() - b.b() - 1.0;
    const double den = (b.b() + s) * (b.b() + s) * (one_minus_x2 + s);
    return (s - c) * x * x / den;
}

/// -b^4 + 2b^3 + b^2 - 2b as written.
inline double radicand(double b) { return -b * b * b * b + 2.0 * b * b * b + b * b - 2.0 * b; }

/// The same polynomial in factored form b(b-1)(b+1)(2-b).
inline double radicand_factored(double b) { return b * (b - 1.0) * (b + 1.0) * (2.0 - b); }

/// d(b) = sqrt(-b^4 + 2b^3 + b^2 - 2b), defined for b in [1, 2].
///
/// Evaluated through the factored radicand, which is exactly zero at b = 1
/// and b = 2. Rounding above 1 near the golden ratio is clipped to 1.
inline double critical_point(const ReducedParam &b)
{
    const double r = radicand_factored(b.b());
    if (b.b() < 1.0 || b.b() > 2.0 || r < 0.0) {
        throw DomainError("critical_point: radicand is negative; d(b) is defined only for b in [1, 2]");
    }
    return std::min(1.0, std::sqrt(r));
}

} // namespace shafer
