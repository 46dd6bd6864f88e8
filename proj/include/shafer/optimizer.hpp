#pragma once

// Extremal parameters of the reduced family and the maximal deviation from asin.

#include <cmath>
#include <functional>
#include <vector>

#include "shafer/functions.hpp"
#include "shafer/lambda_method.hpp"
#include "shafer/verifier.hpp"

namespace shafer {

/// Smallest tolerance the parameter searches accept.
inline constexpr double kMinParameterTolerance = 1e-12;
inline constexpr int kMaxBisectionSteps = 60;

struct BisectionStep {
    double lo;
    double hi;
    bool predicate_lo;
    bool predicate_hi;
};

/// Bracket [lo, hi] with predicate(lo) != predicate(hi) after narrowing to
/// width <= tol (or kMaxBisectionSteps halvings).
struct Bracket {
    double lo;
    double hi;
    bool predicate_lo;
    bool predicate_hi;
};

inline Bracket bisect_predicate(const std::function<bool(double)> &predicate, double lo, double hi, double tol,
                                std::vector<BisectionStep> *trace = nullptr)
{
    if (!(tol >= kMinParameterTolerance)) {
        throw ConfigError("parameter tolerance must be at least 1e-12");
    }
    const bool plo = predicate(lo);
    const bool phi_ = predicate(hi);
    if (plo == phi_) {
        throw ConfigError("initial bracket does not separate the predicate");
    }
    for (int i = 0; i < kMaxBisectionSteps && hi - lo > tol; ++i) {
        if (trace) {
            trace->push_back({lo, hi, plo, phi_});
        }
        const double m = lo + 0.5 * (hi - lo);
        if (predicate(m) == plo) {
            lo = m;
        } else {
            hi = m;
        }
    }
    if (trace) {
        trace->push_back({lo, hi, plo, phi_});
    }
    return {lo, hi, plo, phi_};
}

namespace detail {

inline bool certified(const Claim &claim, const VerifierConfig &cfg, double b)
{
    const Certificate cert = verify(claim, cfg);
    if (cert.verdict == Verdict::undecided) {
        throw UndecidedError("verifier undecided at b = " + std::to_string(b), b);
    }
    return cert.verdict == Verdict::proven;
}

} // namespace detail

/// Whether h_b >= 0 on [0, 1] is certified (equality asserted at 0 only).
inline bool upper_bound_holds(double b, const VerifierConfig &cfg = {})
{
    return detail::certified(Claim{ReducedTarget{Interval(b)}, Relation::ge, Interval(0.0, 1.0), {0.0}}, cfg, b);
}

/// Whether h_b <= 0 on [0, 1] is certified (equality asserted at 0 only).
inline bool lower_bound_holds(double b, const VerifierConfig &cfg = {})
{
    return detail::certified(Claim{ReducedTarget{Interval(b)}, Relation::le, Interval(0.0, 1.0), {0.0}}, cfg, b);
}

/// Largest b for which f_b bounds asin from above, by bisection of the
/// certified predicate over [1, 4]. Returns the largest certified value, so
/// the result itself always satisfies the bound.
inline double find_upper_parameter(double tol, const VerifierConfig &cfg = {},
                                   std::vector<BisectionStep> *trace = nullptr)
{
    const Bracket br = bisect_predicate([&](double b) { return upper_bound_holds(b, cfg); }, 1.0, 4.0, tol, trace);
    return br.lo;
}

/// Smallest b for which f_b bounds asin from below, bisecting over [1.9, 3].
/// Returns the smallest certified value.
inline double find_lower_parameter(double tol, const VerifierConfig &cfg = {},
                                   std::vector<BisectionStep> *trace = nullptr)
{
    const Bracket br = bisect_predicate([&](double b) { return lower_bound_holds(b, cfg); }, 1.9, 3.0, tol, trace);
    return br.hi;
}

/// Independent route to b1: the sign change of h_b(1) = 1 + 1/b - pi/2.
inline double endpoint_gap_root(double tol)
{
    const Bracket br =
        bisect_predicate([](double b) { return endpoint_gap(ReducedParam(b)) >= 0.0; }, 1.0, 4.0, tol);
    return br.lo;
}

struct GapReport {
    double b;
    double argmax_x;
    double max_gap;      // h_b(argmax_x)
    double endpoint_gap; // h_b(1)
    RegimeTag regime;
};

/// Location and size of the largest value of h_b on [0, 1].
inline GapReport max_gap(const ReducedParam &b)
{
    const Regime regime = classify(b.b());
    GapReport r{b.b(), 0.0, 0.0, endpoint_gap(b), regime.tag};
    switch (regime.tag) {
    case RegimeTag::derivative_nonnegative:
        r.argmax_x = 1.0;
        break;
    case RegimeTag::derivative_nonpositive:
        r.argmax_x = 0.0;
        break;
    case RegimeTag::hump:
    case RegimeTag::crossing: {
        // h_b' >= 0 left of d(b) and <= 0 right of it; refine d on that sign.
        const double d = critical_point(b);
        double lo = std::max(0.0, d - 1e-6);
        double hi = std::min(std::nextafter(1.0, 0.0), d + 1e-6);
        if (h_prime(b, lo) > 0.0 && h_prime(b, hi) < 0.0) {
            for (int i = 0; i < kMaxBisectionSteps && hi - lo > 0.0; ++i) {
                const double m = lo + 0.5 * (hi - lo);
                if (m <= lo || m >= hi) {
                    break;
                }
                (h_prime(b, m) > 0.0 ? lo : hi) = m;
            }
            r.argmax_x = lo + 0.5 * (hi - lo);
        } else {
            r.argmax_x = d;
        }
        break;
    }
    }
    r.max_gap = h(b, r.argmax_x);
    return r;
}

} // namespace shafer
