#pragma once

// JSON form of certificates:
//
//   {verdict, claim{target, a, b, [minus{a, b}], relation, domain, equality_set},
//    nodes[{lo, hi, kind, enclosure_lo, enclosure_hi, [anchor], depth}],
//    stats{depth, nodes}}
//
// Parameters are written as a number when the enclosure is a point and as
// [lo, hi] otherwise. Doubles are printed in shortest round-trip form, so
// parse(dump(c)) reproduces every value bit for bit.

#include <nlohmann/json.hpp>

#include "shafer/verifier.hpp"

namespace shafer {

namespace detail {

inline nlohmann::json interval_to_json(const Interval &x)
{
    if (x.is_point()) {
        return x.lo();
    }
    return nlohmann::json::array({x.lo(), x.hi()});
}

inline Interval interval_from_json(const nlohmann::json &j, const char *field)
{
    if (j.is_number()) {
        return Interval(j.get<double>());
    }
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return Interval(j[0].get<double>(), j[1].get<double>());
    }
    throw ConfigError(std::string("certificate field '") + field + "' must be a number or [lo, hi]");
}

template <typename E>
E enum_from_string(const std::string &s, std::initializer_list<E> values, const char *field)
{
    for (E v : values) {
        if (to_string(v) == s) {
            return v;
        }
    }
    throw ConfigError(std::string("unknown value '") + s + "' for certificate field '" + field + "'");
}

inline const nlohmann::json &require(const nlohmann::json &j, const char *key)
{
    if (!j.is_object() || !j.contains(key)) {
        throw ConfigError(std::string("certificate is missing field '") + key + "'");
    }
    return j.at(key);
}

} // namespace detail

inline nlohmann::json claim_to_json(const Claim &claim)
{
    nlohmann::json j;
    std::visit(
        [&](const auto &t) {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, ReducedTarget>) {
                j["target"] = "reduced";
                j["a"] = detail::interval_to_json(t.b + Interval(1.0));
                j["b"] = detail::interval_to_json(t.b);
            } else if constexpr (std::is_same_v<T, FamilyTarget>) {
                j["target"] = "family";
                j["a"] = detail::interval_to_json(t.params.a);
                j["b"] = detail::interval_to_json(t.params.b);
            } else {
                j["target"] = "difference";
                j["a"] = detail::interval_to_json(t.minuend.a);
                j["b"] = detail::interval_to_json(t.minuend.b);
                j["minus"] = {{"a", detail::interval_to_json(t.subtrahend.a)},
                              {"b", detail::interval_to_json(t.subtrahend.b)}};
            }
        },
        claim.target);
    j["relation"] = std::string(to_string(claim.relation));
    j["domain"] = {claim.domain.lo(), claim.domain.hi()};
    j["equality_set"] = claim.equality_set;
    return j;
}

inline Claim claim_from_json(const nlohmann::json &j)
{
    Claim claim;
    const auto kind = detail::require(j, "target").get<std::string>();
    const Interval a = detail::interval_from_json(detail::require(j, "a"), "a");
    const Interval b = detail::interval_from_json(detail::require(j, "b"), "b");
    if (kind == "reduced") {
        claim.target = ReducedTarget{b};
    } else if (kind == "family") {
        claim.target = FamilyTarget{{a, b}};
    } else if (kind == "difference") {
        const auto &minus = detail::require(j, "minus");
        claim.target = DifferenceTarget{{a, b},
                                        {detail::interval_from_json(detail::require(minus, "a"), "minus.a"),
                                         detail::interval_from_json(detail::require(minus, "b"), "minus.b")}};
    } else {
        throw ConfigError("unknown claim target '" + kind + "'");
    }
    claim.relation = detail::enum_from_string(detail::require(j, "relation").get<std::string>(),
                                              {Relation::ge, Relation::le}, "relation");
    claim.domain = detail::interval_from_json(detail::require(j, "domain"), "domain");
    claim.equality_set = detail::require(j, "equality_set").get<std::vector<double>>();
    return claim;
}

inline nlohmann::json to_json(const Certificate &cert)
{
    nlohmann::json nodes = nlohmann::json::array();
    for (const Node &n : cert.nodes) {
        nlohmann::json jn = {{"lo", n.lo},
                             {"hi", n.hi},
                             {"kind", std::string(to_string(n.kind))},
                             {"enclosure_lo", n.enclosure.lo()},
                             {"enclosure_hi", n.enclosure.hi()},
                             {"depth", n.depth}};
        if (n.anchor) {
            jn["anchor"] = *n.anchor;
        }
        nodes.push_back(std::move(jn));
    }
    return {{"verdict", std::string(to_string(cert.verdict))},
            {"claim", claim_to_json(cert.claim)},
            {"nodes", std::move(nodes)},
            {"stats", {{"depth", cert.stats.depth}, {"nodes", cert.stats.nodes}}}};
}

inline Certificate certificate_from_json(const nlohmann::json &j)
{
    Certificate cert;
    try {
        cert.verdict = detail::enum_from_string(detail::require(j, "verdict").get<std::string>(),
                                                {Verdict::proven, Verdict::refuted, Verdict::undecided},
                                                "verdict");
        cert.claim = claim_from_json(detail::require(j, "claim"));
        for (const auto &jn : detail::require(j, "nodes")) {
            Node n;
            n.lo = detail::require(jn, "lo").get<double>();
            n.hi = detail::require(jn, "hi").get<double>();
            n.kind = detail::enum_from_string(
                detail::require(jn, "kind").get<std::string>(),
                {EvidenceKind::sign, EvidenceKind::monotone, EvidenceKind::witness, EvidenceKind::unresolved},
                "kind");
            n.enclosure = Interval(detail::require(jn, "enclosure_lo").get<double>(),
                                   detail::require(jn, "enclosure_hi").get<double>());
            if (jn.contains("anchor")) {
                n.anchor = jn.at("anchor").get<double>();
            }
            n.depth = jn.value("depth", 0);
            cert.nodes.push_back(n);
        }
        const auto &stats = detail::require(j, "stats");
        cert.stats.depth = detail::require(stats, "depth").get<int>();
        cert.stats.nodes = detail::require(stats, "nodes").get<std::size_t>();
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("malformed certificate: ") + e.what());
    } catch (const DomainError &e) {
        throw ConfigError(std::string("malformed certificate: ") + e.what());
    }
    return cert;
}

} // namespace shafer
