#pragma once

// Independent replay of a certificate: re-evaluates the enclosures named by
// each node and checks coverage. No bisection, no search.

#include <algorithm>
#include <string>

#include "shafer/verifier.hpp"

namespace shafer {

struct ReplayReport {
    bool accepted = false;
    std::string reason;

    explicit operator bool() const { return accepted; }
};

namespace detail {

inline ReplayReport reject(std::string why) { return {false, std::move(why)}; }

inline ReplayReport replay_node(const Claim &claim, const Node &node)
{
    const std::string where = "[" + std::to_string(node.lo) + ", " + std::to_string(node.hi) + "]";
    if (!(node.lo < node.hi) || !claim.domain.contains(node.lo) || !claim.domain.contains(node.hi)) {
        return reject("node " + where + " is empty or leaves the claim domain");
    }
    const Interval x(node.lo, node.hi);
    switch (node.kind) {
    case EvidenceKind::sign:
        if (!satisfies(claim.relation, enclose_value(claim.target, x))) {
            return reject("SIGN node " + where + " does not re-check");
        }
        return {true, {}};
    case EvidenceKind::monotone: {
        if (!node.anchor || (*node.anchor != node.lo && *node.anchor != node.hi)) {
            return reject("MONOTONE node " + where + " is not anchored at one of its ends");
        }
        const double p = *node.anchor;
        const bool anchored = is_equality_point(claim, p) ||
                              satisfies(claim.relation, enclose_value(claim.target, Interval(p)));
        if (!anchored) {
            return reject("MONOTONE node " + where + " chains to an anchor of unknown sign");
        }
        const Interval slope = enclose_slope_sign(claim.target, x);
        const bool left = p == node.lo;
        const bool ok = claim.relation == Relation::ge ? (left ? slope.lo() >= 0.0 : slope.hi() <= 0.0)
                                                       : (left ? slope.hi() <= 0.0 : slope.lo() >= 0.0);
        if (!ok) {
            return reject("MONOTONE node " + where + " has a slope enclosure of the wrong sign");
        }
        return {true, {}};
    }
    default:
        return reject("node " + where + " carries no proof evidence");
    }
}

} // namespace detail

/// Re-checks a certificate against its own claim.
///
/// PROVEN: every node re-evaluates and the nodes cover the domain.
/// REFUTED: the single witness re-evaluates strictly on the wrong side.
/// UNDECIDED: nothing is asserted, so there is nothing to check.
inline ReplayReport replay(const Certificate &cert)
{
    try {
        validate_claim(cert.claim);
        const Claim &claim = cert.claim;
        switch (cert.verdict) {
        case Verdict::undecided:
            return {true, "undecided certificates assert nothing"};
        case Verdict::refuted: {
            if (cert.nodes.size() != 1 || cert.nodes[0].kind != EvidenceKind::witness ||
                cert.nodes[0].lo != cert.nodes[0].hi) {
                return detail::reject("a refutation must consist of exactly one point witness");
            }
            const double p = cert.nodes[0].lo;
            if (!claim.domain.contains(p) || detail::is_equality_point(claim, p)) {
                return detail::reject("witness lies outside the domain or on an equality point");
            }
            if (!violates(claim.relation, enclose_value(claim.target, Interval(p)))) {
                return detail::reject("witness enclosure is not strictly on the wrong side");
            }
            return {true, {}};
        }
        case Verdict::proven: {
            if (cert.nodes.empty()) {
                return detail::reject("proof has no nodes");
            }
            std::vector<Node> nodes = cert.nodes;
            std::sort(nodes.begin(), nodes.end(), [](const Node &a, const Node &b) { return a.lo < b.lo; });
            double covered = claim.domain.lo();
            for (const Node &n : nodes) {
                if (n.lo > covered) {
                    return detail::reject("gap in coverage at x = " + std::to_string(covered));
                }
                if (auto r = detail::replay_node(claim, n); !r) {
                    return r;
                }
                covered = std::max(covered, n.hi);
            }
            if (covered < claim.domain.hi()) {
                return detail::reject("coverage stops at x = " + std::to_string(covered));
            }
            return {true, {}};
        }
        }
    } catch (const std::exception &e) {
        return detail::reject(std::string("evaluation failed: ") + e.what());
    }
    return detail::reject("unknown verdict");
}

} // namespace shafer
