#pragma once

// Interval forms of the family, the distance function and the sign of its
// derivative. Every routine returns an interval containing the exact value
// for all members of its arguments (parameters may themselves be intervals,
// e.g. the enclosure of pi or of 2/(pi - 2)).

#include "shafer/asin_series.hpp"
#include "shafer/functions.hpp"
#include "shafer/interval.hpp"

namespace shafer {

/// Interval-valued family parameters.
struct IntervalFamily {
    Interval a;
    Interval b;
};

namespace detail {

inline void require_unit(const Interval &x, const char *what)
{
    if (x.lo() < 0.0 || x.hi() > 1.0) {
        throw DomainError(std::string(what) + ": x must lie in [0, 1]");
    }
}

inline void require_positive(const Interval &p, const char *what)
{
    if (!(p.lo() > 0.0)) {
        throw DomainError(std::string(what) + ": parameter enclosure must be strictly positive");
    }
}

// t = a - b - 1 enclosure used by the small-x form.
inline Interval numerator_excess(const IntervalFamily &p) { return p.a - p.b - Interval(1.0); }

// phi_{a,b}(x) - asin x with a = b + 1 + t, for x in [0, 1/2]:
//   x t / (b + s) + x^3 (1 / ((1 + s)(b + s)) - (asin x - x) / x^3)
// which avoids the cancellation between f_b(x) ~ x and asin x ~ x.
inline Interval small_x_gap(const Interval &t, const Interval &b, const Interval &x)
{
    const Interval s = sqrt_enc(one_minus_sq(x));
    const Interval bs = b + s;
    const Interval x3 = x * x * x;
    const Interval bracket = Interval(1.0) / ((Interval(1.0) + s) * bs) - asin_excess_enc(x);
    if (t.is_point() && t.lo() == 0.0) {
        return x3 * bracket;
    }
    return x * t / bs + x3 * bracket;
}

} // namespace detail

/// s(x) = sqrt(1 - x^2).
inline Interval cosine_of_asin(const Interval &x) { return sqrt_enc(one_minus_sq(x)); }

inline Interval phi(const IntervalFamily &p, const Interval &x)
{
    detail::require_unit(x, "phi");
    detail::require_positive(p.a, "phi");
    detail::require_positive(p.b, "phi");
    return p.a * x / (p.b + cosine_of_asin(x));
}

inline Interval f(const Interval &b, const Interval &x)
{
    detail::require_unit(x, "f");
    detail::require_positive(b, "f");
    return (b + Interval(1.0)) * x / (b + cosine_of_asin(x));
}

inline Interval target(const Interval &x)
{
    detail::require_unit(x, "target");
    return asin_enc(x);
}

/// Enclosure of phi_{a,b}(x) - asin x.
inline Interval family_gap(const IntervalFamily &p, const Interval &x)
{
    detail::require_unit(x, "family_gap");
    detail::require_positive(p.a, "family_gap");
    detail::require_positive(p.b, "family_gap");
    if (x.hi() <= kAsinSeriesMaxArg) {
        return detail::small_x_gap(detail::numerator_excess(p), p.b, x);
    }
    return phi(p, x) - asin_enc(x);
}

/// Enclosure of h_b(x) = f_b(x) - asin x.
inline Interval h(const Interval &b, const Interval &x)
{
    detail::require_unit(x, "h");
    detail::require_positive(b, "h");
    if (x.hi() <= kAsinSeriesMaxArg) {
        return detail::small_x_gap(Interval(0.0), b, x);
    }
    return f(b, x) - asin_enc(x);
}

/// Enclosure of h_b(1) = 1 + 1/b - pi/2.
inline Interval endpoint_gap(const Interval &b)
{
    detail::require_positive(b, "endpoint_gap");
    return Interval(1.0) + Interval(1.0) / b - pi_enc() / Interval(2.0);
}

/// Enclosure of b^2 - b - 1.
inline Interval golden_excess(const Interval &b) { return b * b - b - Interval(1.0); }

/// Enclosure of sqrt(1 - x^2) - (b^2 - b - 1), whose sign is the sign of
/// h_b'(x) for every x in (0, 1).
inline Interval derivative_sign_term(const Interval &b, const Interval &x)
{
    detail::require_unit(x, "derivative_sign_term");
    detail::require_positive(b, "derivative_sign_term");
    return cosine_of_asin(x) - golden_excess(b);
}

/// Enclosure of the displayed derivative of h_b. Requires x.hi < 1.
inline Interval h_prime(const Interval &b, const Interval &x)
{
    detail::require_unit(x, "h_prime");
    detail::require_positive(b, "h_prime");
    if (x.hi() >= 1.0) {
        throw DomainError("h_prime: the derivative formula is singular at x = 1");
    }
    const Interval one_minus_x2 = one_minus_sq(x);
    const Interval s = sqrt_enc(one_minus_x2);
    const Interval bs = b + s;
    return (s - golden_excess(b)) * sqr(x) / (sqr(bs) * (one_minus_x2 + s));
}

/// Sign-equivalent of d/dx (phi_{a,b}(x) - asin x) on (0, 1).
///
/// The derivative is (a (b s + 1) - (b + s)^2) / (s (b + s)^2); with
/// a = b + 1 + t the numerator is (s - c)(1 - s) + t (b s + 1), c = b^2 - b - 1.
inline Interval family_derivative_sign_term(const IntervalFamily &p, const Interval &x)
{
    detail::require_unit(x, "family_derivative_sign_term");
    const Interval s = cosine_of_asin(x);
    const Interval t = detail::numerator_excess(p);
    const Interval tangent_part = (s - golden_excess(p.b)) * (Interval(1.0) - s);
    if (t.is_point() && t.lo() == 0.0) {
        return tangent_part;
    }
    return tangent_part + t * (p.b * s + Interval(1.0));
}

/// Enclosure of phi_{p}(x) - phi_{q}(x).
inline Interval family_difference(const IntervalFamily &p, const IntervalFamily &q, const Interval &x)
{
    detail::require_unit(x, "family_difference");
    const Interval s = cosine_of_asin(x);
    return x * (p.a / (p.b + s) - q.a / (q.b + s));
}

/// Sign-equivalent of d/dx (phi_p(x) - phi_q(x)) on (0, 1):
/// a_p (b_p s + 1)(b_q + s)^2 - a_q (b_q s + 1)(b_p + s)^2.
inline Interval family_difference_sign_term(const IntervalFamily &p, const IntervalFamily &q,
                                            const Interval &x)
{
    detail::require_unit(x, "family_difference_sign_term");
    const Interval s = cosine_of_asin(x);
    const Interval one(1.0);
    return p.a * (p.b * s + one) * sqr(q.b + s) - q.a * (q.b * s + one) * sqr(p.b + s);
}

} // namespace shafer
