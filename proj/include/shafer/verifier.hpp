#pragma once

// Certification of the sign of a family-vs-asin difference on a subinterval
// of [0, 1] by adaptive bisection.
//
// Each leaf of the bisection tree is closed by one of
//   SIGN      the value enclosure over the leaf is one-signed;
//   MONOTONE  the derivative-sign enclosure over the leaf is one-signed and
//             the value at the downhill end is known: either a claimed
//             equality point or a point enclosure with the right sign.
// A leaf whose midpoint (or, at the root, an endpoint) has a point enclosure
// strictly on the wrong side refutes the claim.
//
// Equality points are hypotheses. They are checked in floating point to
// 1e-12 but never proved, which is what lets a claim with interval-valued
// parameters (pi, 2/(pi - 2)) be certified when the equality only holds at
// the exact parameter value.

#include <algorithm>
#include <condition_variable>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <variant>
#include <vector>

#include "shafer/enclosures.hpp"
#include "shafer/errors.hpp"
#include "shafer/lambda_method.hpp"

namespace shafer {

enum class Relation { ge, le };

inline std::string_view to_string(Relation r) { return r == Relation::ge ? "ge" : "le"; }

/// f_b - asin.
struct ReducedTarget {
    Interval b;
};

/// phi_{a,b} - asin.
struct FamilyTarget {
    IntervalFamily params;
};

/// phi_{minuend} - phi_{subtrahend}.
struct DifferenceTarget {
    IntervalFamily minuend;
    IntervalFamily subtrahend;
};

using Target = std::variant<ReducedTarget, FamilyTarget, DifferenceTarget>;

struct Claim {
    Target target;
    Relation relation = Relation::ge;
    Interval domain{0.0, 1.0};
    std::vector<double> equality_set;
};

/// Tolerance on |value| at a claimed equality point.
inline constexpr double kEqualityTolerance = 1e-12;

struct VerifierConfig {
    int max_depth = 40;
    double min_width = 1e-12;
    double endpoint_margin = 1e-6;
    unsigned workers = 1;

    void validate() const
    {
        if (max_depth < 1) {
            throw ConfigError("max_depth must be at least 1");
        }
        if (!(min_width > 0.0 && min_width < 1.0)) {
            throw ConfigError("min_width must lie in (0, 1)");
        }
        if (!(endpoint_margin >= 0.0 && endpoint_margin < 1.0)) {
            throw ConfigError("endpoint_margin must lie in [0, 1)");
        }
        if (workers < 1) {
            throw ConfigError("workers must be at least 1");
        }
    }
};

enum class Verdict { proven, refuted, undecided };

inline std::string_view to_string(Verdict v)
{
    switch (v) {
    case Verdict::proven:
        return "PROVEN";
    case Verdict::refuted:
        return "REFUTED";
    case Verdict::undecided:
        return "UNDECIDED";
    }
    return "UNKNOWN";
}

enum class EvidenceKind { sign, monotone, witness, unresolved };

inline std::string_view to_string(EvidenceKind k)
{
    switch (k) {
    case EvidenceKind::sign:
        return "SIGN";
    case EvidenceKind::monotone:
        return "MONOTONE";
    case EvidenceKind::witness:
        return "WITNESS";
    case EvidenceKind::unresolved:
        return "UNRESOLVED";
    }
    return "UNKNOWN";
}

/// One certificate entry.
///
/// SIGN: enclosure of the value over [lo, hi].
/// MONOTONE: enclosure of the derivative-sign term over [lo, hi]; anchor is
///   lo or hi, the end the sign is transported from.
/// WITNESS: lo == hi, enclosure of the value there.
/// UNRESOLVED: the leaf that exhausted the budget, with its value enclosure.
struct Node {
    double lo = 0.0;
    double hi = 0.0;
    EvidenceKind kind = EvidenceKind::sign;
    Interval enclosure;
    std::optional<double> anchor;
    int depth = 0;

    friend bool operator==(const Node &, const Node &) = default;
};

struct CertificateStats {
    int depth = 0;
    std::size_t nodes = 0;

    friend bool operator==(const CertificateStats &, const CertificateStats &) = default;
};

struct Certificate {
    Verdict verdict = Verdict::undecided;
    Claim claim;
    std::vector<Node> nodes;
    CertificateStats stats;
};

// ---------------------------------------------------------------------------
// Target evaluation

inline Interval enclose_value(const Target &target, const Interval &x)
{
    return std::visit(
        [&](const auto &t) -> Interval {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, ReducedTarget>) {
                return h(t.b, x);
            } else if constexpr (std::is_same_v<T, FamilyTarget>) {
                return family_gap(t.params, x);
            } else {
                return family_difference(t.minuend, t.subtrahend, x);
            }
        },
        target);
}

/// Enclosure whose sign on x within (0, 1) is the sign of the target's derivative.
inline Interval enclose_slope_sign(const Target &target, const Interval &x)
{
    return std::visit(
        [&](const auto &t) -> Interval {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, ReducedTarget>) {
                return derivative_sign_term(t.b, x);
            } else if constexpr (std::is_same_v<T, FamilyTarget>) {
                return family_derivative_sign_term(t.params, x);
            } else {
                return family_difference_sign_term(t.minuend, t.subtrahend, x);
            }
        },
        target);
}

/// Floating-point value at the parameter midpoints.
inline double scalar_value(const Target &target, double x)
{
    return std::visit(
        [&](const auto &t) -> double {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, ReducedTarget>) {
                return h(ReducedParam(t.b.mid()), x);
            } else if constexpr (std::is_same_v<T, FamilyTarget>) {
                return phi(FamilyParams(t.params.a.mid(), t.params.b.mid()), x) - shafer::target(x);
            } else {
                return phi(FamilyParams(t.minuend.a.mid(), t.minuend.b.mid()), x) -
                       phi(FamilyParams(t.subtrahend.a.mid(), t.subtrahend.b.mid()), x);
            }
        },
        target);
}

inline bool satisfies(Relation r, const Interval &v) { return r == Relation::ge ? v.lo() >= 0.0 : v.hi() <= 0.0; }

inline bool violates(Relation r, const Interval &v) { return r == Relation::ge ? v.hi() < 0.0 : v.lo() > 0.0; }

/// Domain endpoints where the floating-point value is within the equality tolerance.
inline std::vector<double> default_equality_set(const Target &target, const Interval &domain)
{
    std::vector<double> out;
    for (double e : {domain.lo(), domain.hi()}) {
        if (std::fabs(scalar_value(target, e)) <= kEqualityTolerance &&
            (out.empty() || out.back() != e)) {
            out.push_back(e);
        }
    }
    return out;
}

inline bool is_degenerate(const Target &target)
{
    const auto *d = std::get_if<DifferenceTarget>(&target);
    return d != nullptr && d->minuend.a == d->subtrahend.a && d->minuend.b == d->subtrahend.b;
}

inline void validate_claim(const Claim &claim)
{
    const Interval &dom = claim.domain;
    if (dom.lo() < 0.0 || dom.hi() > 1.0 || !(dom.lo() < dom.hi())) {
        throw ConfigError("claim domain must be a nondegenerate subinterval of [0, 1]");
    }
    auto positive = [](const IntervalFamily &p) { return p.a.lo() > 0.0 && p.b.lo() > 0.0; };
    const bool params_ok = std::visit(
        [&](const auto &t) {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, ReducedTarget>) {
                return t.b.lo() > 0.0;
            } else if constexpr (std::is_same_v<T, FamilyTarget>) {
                return positive(t.params);
            } else {
                return positive(t.minuend) && positive(t.subtrahend);
            }
        },
        claim.target);
    if (!params_ok) {
        throw ConfigError("claim parameters must be strictly positive");
    }
    for (double e : claim.equality_set) {
        if (!dom.contains(e)) {
            throw ConfigError("equality point " + std::to_string(e) + " lies outside the claim domain");
        }
        if (std::fabs(scalar_value(claim.target, e)) > kEqualityTolerance) {
            throw ConfigError("claimed equality point " + std::to_string(e) +
                              " has |value| above the equality tolerance");
        }
    }
}

// ---------------------------------------------------------------------------
// Search

namespace detail {

using Path = std::vector<std::uint8_t>;

struct LeafOutcome {
    enum class Kind { closed, split, event } kind = Kind::closed;
    Node node;                    // closed leaf or event
    Verdict verdict = Verdict::proven;
    std::vector<Interval> children; // processing order
};

inline bool is_equality_point(const Claim &claim, double x)
{
    return std::find(claim.equality_set.begin(), claim.equality_set.end(), x) != claim.equality_set.end();
}

// Equality point e with e <= p and p - e <= margin (left) or e >= p and
// e - p <= margin (right); the nearest one wins.
inline std::optional<double> nearby_equality(const Claim &claim, double p, bool left, double margin)
{
    std::optional<double> best;
    for (double e : claim.equality_set) {
        const bool side_ok = left ? (e <= p && p - e <= margin) : (e >= p && e - p <= margin);
        if (side_ok && (!best || std::fabs(e - p) < std::fabs(*best - p))) {
            best = e;
        }
    }
    return best;
}

// Attempts a MONOTONE closure of x, transporting the sign from the left or right end.
inline std::optional<Node> try_monotone(const Claim &claim, const VerifierConfig &cfg, const Interval &x,
                                        int depth)
{
    for (const bool left : {true, false}) {
        const double p = left ? x.lo() : x.hi();
        std::optional<double> anchor;
        Interval span = x;
        if (auto e = nearby_equality(claim, p, left, cfg.endpoint_margin)) {
            anchor = *e;
            span = left ? Interval(*e, x.hi()) : Interval(x.lo(), *e);
        } else if (satisfies(claim.relation, enclose_value(claim.target, Interval(p)))) {
            anchor = p;
        }
        if (!anchor) {
            continue;
        }
        const Interval slope = enclose_slope_sign(claim.target, span);
        // For >= the value must not decrease away from the anchor; for <= not increase.
        const bool away_nondecreasing = left ? slope.lo() >= 0.0 : slope.hi() <= 0.0;
        const bool away_nonincreasing = left ? slope.hi() <= 0.0 : slope.lo() >= 0.0;
        const bool ok = claim.relation == Relation::ge ? away_nondecreasing : away_nonincreasing;
        if (ok) {
            return Node{span.lo(), span.hi(), EvidenceKind::monotone, slope, anchor, depth};
        }
    }
    return std::nullopt;
}

inline std::optional<Node> try_witness(const Claim &claim, double p, int depth)
{
    if (is_equality_point(claim, p)) {
        return std::nullopt;
    }
    const Interval v = enclose_value(claim.target, Interval(p));
    if (violates(claim.relation, v)) {
        return Node{p, p, EvidenceKind::witness, v, std::nullopt, depth};
    }
    return std::nullopt;
}

inline LeafOutcome process_leaf(const Claim &claim, const VerifierConfig &cfg, const Interval &x, int depth,
                                bool is_root)
{
    LeafOutcome out;
    const Interval value = enclose_value(claim.target, x);
    if (satisfies(claim.relation, value) && !is_degenerate(claim.target)) {
        out.node = Node{x.lo(), x.hi(), EvidenceKind::sign, value, std::nullopt, depth};
        return out;
    }
    if (!is_degenerate(claim.target)) {
        if (auto node = try_monotone(claim, cfg, x, depth)) {
            out.node = *node;
            return out;
        }
    }

    out.kind = LeafOutcome::Kind::event;
    std::vector<double> probes;
    if (is_root) {
        probes = {x.lo(), x.hi()};
    }
    probes.push_back(x.mid());
    for (double p : probes) {
        if (auto w = try_witness(claim, p, depth)) {
            out.node = *w;
            out.verdict = Verdict::refuted;
            return out;
        }
    }

    if (is_degenerate(claim.target) || depth >= cfg.max_depth || x.width() <= cfg.min_width) {
        out.node = Node{x.lo(), x.hi(), EvidenceKind::unresolved, value, std::nullopt, depth};
        out.verdict = Verdict::undecided;
        return out;
    }

    out.kind = LeafOutcome::Kind::split;
    const double m = x.mid();
    const Interval left(x.lo(), m);
    const Interval right(m, x.hi());
    const double wl = enclose_value(claim.target, left).width();
    const double wr = enclose_value(claim.target, right).width();
    if (wr > wl) {
        out.children = {right, left};
    } else {
        out.children = {left, right};
    }
    return out;
}

// Explores the bisection tree, possibly on several threads. Leaves are
// visited depth-first with children in worst-first order. The first witness
// in that order wins and prunes every task after it; leaves that exhaust the
// budget do not stop the search, so a witness elsewhere still refutes. Every
// leaf is a pure function of its interval, so the outcome does not depend on
// the number of workers.
class Search {
public:
    Search(const Claim &claim, const VerifierConfig &cfg) : claim_(claim), cfg_(cfg) {}

    void run()
    {
        stack_.push_back(Task{{}, claim_.domain, 0});
        std::vector<std::thread> helpers;
        for (unsigned i = 1; i < cfg_.workers; ++i) {
            helpers.emplace_back([this] { work(); });
        }
        work();
        for (auto &t : helpers) {
            t.join();
        }
    }

    [[nodiscard]] Certificate certificate() const
    {
        Certificate cert;
        cert.claim = claim_;
        if (witness_) {
            cert.verdict = Verdict::refuted;
            cert.nodes = {witness_->node};
        } else if (!unresolved_.empty()) {
            // Widest unresolved leaf; earliest in search order on ties.
            auto best = unresolved_.begin();
            for (auto it = unresolved_.begin(); it != unresolved_.end(); ++it) {
                const double w = it->node.hi - it->node.lo;
                const double bw = best->node.hi - best->node.lo;
                if (w > bw || (w == bw && it->path < best->path)) {
                    best = it;
                }
            }
            cert.verdict = Verdict::undecided;
            cert.nodes = {best->node};
        } else {
            cert.verdict = Verdict::proven;
            for (const auto &[path, node] : closed_) {
                cert.nodes.push_back(node);
            }
        }
        std::sort(cert.nodes.begin(), cert.nodes.end(), [](const Node &a, const Node &b) {
            return a.lo != b.lo ? a.lo < b.lo : a.hi < b.hi;
        });
        cert.stats.nodes = cert.nodes.size();
        for (const Node &n : cert.nodes) {
            cert.stats.depth = std::max(cert.stats.depth, n.depth);
        }
        return cert;
    }

private:
    struct Task {
        Path path;
        Interval x;
        int depth;
    };
    struct Event {
        Path path;
        Node node;
    };

    bool pruned(const Path &p) const { return witness_ && witness_->path < p; }

    void work()
    {
        std::unique_lock lock(mutex_);
        for (;;) {
            cv_.wait(lock, [this] { return !stack_.empty() || active_ == 0; });
            if (stack_.empty()) {
                cv_.notify_all();
                return;
            }
            Task task = std::move(stack_.back());
            stack_.pop_back();
            if (pruned(task.path)) {
                continue;
            }
            ++active_;
            lock.unlock();

            std::optional<LeafOutcome> outcome;
            std::exception_ptr error;
            try {
                outcome = process_leaf(claim_, cfg_, task.x, task.depth, task.path.empty());
            } catch (...) {
                error = std::current_exception();
            }

            lock.lock();
            --active_;
            if (error) {
                if (!error_) {
                    error_ = error;
                }
                stack_.clear();
            } else if (outcome->kind == LeafOutcome::Kind::closed) {
                closed_.emplace_back(task.path, outcome->node);
            } else if (outcome->kind == LeafOutcome::Kind::event) {
                if (outcome->verdict == Verdict::undecided) {
                    unresolved_.push_back(Event{task.path, outcome->node});
                } else if (!witness_ || task.path < witness_->path) {
                    witness_ = Event{task.path, outcome->node};
                }
            } else {
                for (std::size_t i = outcome->children.size(); i-- > 0;) {
                    Path child = task.path;
                    child.push_back(static_cast<std::uint8_t>(i));
                    stack_.push_back(Task{std::move(child), outcome->children[i], task.depth + 1});
                }
            }
            cv_.notify_all();
        }
    }

public:
    void rethrow_if_failed() const
    {
        if (error_) {
            std::rethrow_exception(error_);
        }
    }

private:
    const Claim &claim_;
    const VerifierConfig &cfg_;
    std::mutex mutex_;
    std::condition_variable cv_;
    std::vector<Task> stack_;
    std::vector<std::pair<Path, Node>> closed_;
    std::optional<Event> witness_;
    std::vector<Event> unresolved_;
    std::exception_ptr error_;
    int active_ = 0;
};

} // namespace detail

/// Certifies, refutes, or gives up on the claim.
///
/// PROVEN: nodes cover the domain with SIGN/MONOTONE evidence.
/// REFUTED: a single WITNESS node.
/// UNDECIDED: the widest UNRESOLVED leaf that exhausted the budget.
///
/// A difference of two identical family members is reported UNDECIDED at
/// the root: its enclosures straddle zero everywhere.
inline Certificate verify(const Claim &claim, const VerifierConfig &cfg = {})
{
    cfg.validate();
    validate_claim(claim);
    detail::Search search(claim, cfg);
    search.run();
    search.rethrow_if_failed();
    return search.certificate();
}

/// Claim on phi_{a,b} - asin over [0, 1]; equality points default to the
/// endpoints where the value vanishes in floating point.
inline Certificate verify_family(const IntervalFamily &params, Relation relation,
                                 std::optional<std::vector<double>> equality_set = std::nullopt,
                                 const VerifierConfig &cfg = {})
{
    Claim claim{FamilyTarget{params}, relation, Interval(0.0, 1.0), {}};
    claim.equality_set = equality_set ? *equality_set : default_equality_set(claim.target, claim.domain);
    return verify(claim, cfg);
}

/// Claim on phi_{minuend} - phi_{subtrahend} over [0, 1].
inline Certificate verify_family(const IntervalFamily &minuend, const IntervalFamily &subtrahend,
                                 Relation relation,
                                 std::optional<std::vector<double>> equality_set = std::nullopt,
                                 const VerifierConfig &cfg = {})
{
    Claim claim{DifferenceTarget{minuend, subtrahend}, relation, Interval(0.0, 1.0), {}};
    claim.equality_set = equality_set ? *equality_set : default_equality_set(claim.target, claim.domain);
    return verify(claim, cfg);
}

// ---------------------------------------------------------------------------
// Sign change of h_b

struct CrossingBracket {
    double positive_x;  // h_b rigorously > 0 here
    double negative_x;  // h_b rigorously < 0 here
    Interval positive_enclosure;
    Interval negative_enclosure;

    [[nodiscard]] double root_lo() const { return std::min(positive_x, negative_x); }
    [[nodiscard]] double root_hi() const { return std::max(positive_x, negative_x); }
};

struct CrossingResult {
    std::optional<CrossingBracket> bracket;
    bool undecided = false;
};

/// For b in the crossing regime, brackets a root of h_b between a point with a
/// strictly positive enclosure and one with a strictly negative enclosure.
/// Outside that regime h_b is one-signed and no bracket is returned.
inline CrossingResult find_crossing(const ReducedParam &b, const VerifierConfig &cfg = {})
{
    cfg.validate();
    if (classify(b.b()).tag != RegimeTag::crossing) {
        return {};
    }
    const Interval bi(b.b());
    double pos = critical_point(b);
    double neg = 1.0;
    Interval vpos = h(bi, Interval(pos));
    Interval vneg = h(bi, Interval(neg));
    if (!(vpos.lo() > 0.0) || !(vneg.hi() < 0.0)) {
        return {std::nullopt, true};
    }
    for (int i = 0; i < cfg.max_depth && std::fabs(neg - pos) > cfg.min_width; ++i) {
        const double m = pos + 0.5 * (neg - pos);
        const Interval vm = h(bi, Interval(m));
        if (vm.lo() > 0.0) {
            pos = m;
            vpos = vm;
        } else if (vm.hi() < 0.0) {
            neg = m;
            vneg = vm;
        } else {
            break;
        }
    }
    return {CrossingBracket{pos, neg, vpos, vneg}, false};
}

} // namespace shafer
