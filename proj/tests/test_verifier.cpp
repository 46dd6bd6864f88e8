#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "mp_oracle.hpp"
#include "shafer/certificate_json.hpp"
#include "shafer/checker.hpp"
#include "shafer/verifier.hpp"

using namespace shafer;
using oracle::Mp;

namespace {

Claim reduced(Interval b, Relation r, std::vector<double> eq = {0.0}, Interval domain = Interval(0.0, 1.0))
{
    return Claim{ReducedTarget{b}, r, domain, std::move(eq)};
}

const Node &witness(const Certificate &c)
{
    EXPECT_EQ(c.verdict, Verdict::refuted);
    EXPECT_EQ(c.nodes.size(), 1u);
    return c.nodes.front();
}

bool covers(const Certificate &c, const Interval &domain)
{
    double reach = domain.lo();
    for (const Node &n : c.nodes) {
        if (n.lo > reach) {
            return false;
        }
        reach = std::max(reach, n.hi);
    }
    return reach >= domain.hi();
}

// Exact value of the target at x; parameters must be points.
Mp exact_value(const Target &t, double x)
{
    return std::visit(
        [&](const auto &v) -> Mp {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, ReducedTarget>) {
                return oracle::h(Mp(v.b.lo()), Mp(x));
            } else if constexpr (std::is_same_v<T, FamilyTarget>) {
                return oracle::phi(Mp(v.params.a.lo()), Mp(v.params.b.lo()), Mp(x)) - asin(Mp(x));
            } else {
                return oracle::phi(Mp(v.minuend.a.lo()), Mp(v.minuend.b.lo()), Mp(x)) -
                       oracle::phi(Mp(v.subtrahend.a.lo()), Mp(v.subtrahend.b.lo()), Mp(x));
            }
        },
        t);
}

} // namespace

TEST(Verify, ShaferLowerBound)
{
    const Certificate c = verify(reduced(Interval(2.0), Relation::le));
    EXPECT_EQ(c.verdict, Verdict::proven);
    EXPECT_TRUE(covers(c, Interval(0.0, 1.0)));
    EXPECT_LE(c.stats.depth, 40);
    EXPECT_EQ(c.stats.nodes, c.nodes.size());
}

TEST(Verify, ImprovedUpperBound)
{
    const Certificate c = verify(reduced(b1_enclosure(), Relation::ge, {0.0, 1.0}));
    EXPECT_EQ(c.verdict, Verdict::proven);
    EXPECT_TRUE(covers(c, Interval(0.0, 1.0)));
    EXPECT_LE(c.stats.depth, 40);
}

TEST(Verify, RefutesBelowOneEightWithWitnessNearOne)
{
    const Certificate c = verify(reduced(Interval(1.8), Relation::ge));
    const Node &w = witness(c);
    EXPECT_EQ(w.kind, EvidenceKind::witness);
    EXPECT_EQ(w.lo, w.hi);
    EXPECT_LT(w.enclosure.hi(), 0.0);
    // h_1.8 is positive left of its root near 0.98728.
    EXPECT_GT(w.lo, 0.987);
    EXPECT_LT(exact_value(c.claim.target, w.lo).sign(), 0);
}

TEST(Verify, SubdomainClaims)
{
    EXPECT_EQ(verify(reduced(Interval(1.8), Relation::le, {}, Interval(0.99, 1.0))).verdict, Verdict::proven);
    EXPECT_EQ(verify(reduced(Interval(1.8), Relation::ge, {}, Interval(0.1, 0.98))).verdict, Verdict::proven);
    EXPECT_EQ(verify(reduced(Interval(1.8), Relation::le, {}, Interval(0.5, 1.0))).verdict, Verdict::refuted);
}

TEST(VerifyFamily, FinkUpperBound)
{
    const Certificate c = verify_family(IntervalFamily{pi_enc(), Interval(2.0)}, Relation::ge, {{0.0, 1.0}});
    EXPECT_EQ(c.verdict, Verdict::proven);
    EXPECT_TRUE(covers(c, Interval(0.0, 1.0)));
}

TEST(VerifyFamily, FinkWithDoubleNumerator)
{
    // a = pi rounded to double; the equality at 1 is then a hypothesis that
    // holds to within the equality tolerance.
    const Certificate c =
        verify_family(IntervalFamily{Interval(3.141592653589793), Interval(2.0)}, Relation::ge, std::nullopt);
    EXPECT_EQ(c.verdict, Verdict::proven);
    EXPECT_EQ(c.claim.equality_set, (std::vector<double>{0.0, 1.0}));
}

TEST(VerifyFamily, ShaferAsFamilyMember)
{
    const Certificate c = verify_family(IntervalFamily{Interval(3.0), Interval(2.0)}, Relation::le, std::nullopt);
    EXPECT_EQ(c.verdict, Verdict::proven);
}

TEST(VerifyFamily, ImprovementOverFink)
{
    const Certificate c = verify_family(IntervalFamily{pi_enc(), Interval(2.0)},
                                        IntervalFamily{b1_enclosure() + Interval(1.0), b1_enclosure()},
                                        Relation::ge, {{0.0, 1.0}});
    EXPECT_EQ(c.verdict, Verdict::proven);
    EXPECT_TRUE(covers(c, Interval(0.0, 1.0)));
}

TEST(VerifyFamily, ZeroDifferenceIsUndecided)
{
    const IntervalFamily p{Interval(3.0), Interval(2.0)};
    const Certificate c = verify_family(p, p, Relation::ge, std::nullopt);
    EXPECT_EQ(c.verdict, Verdict::undecided);
    ASSERT_FALSE(c.nodes.empty());
    EXPECT_EQ(c.nodes.front().kind, EvidenceKind::unresolved);
}

TEST(VerifyFamily, WrongDirectionIsRefuted)
{
    const Certificate c = verify_family(IntervalFamily{pi_enc(), Interval(2.0)}, Relation::le, {{0.0, 1.0}});
    EXPECT_EQ(c.verdict, Verdict::refuted);
}

TEST(Verify, BudgetExhaustionIsUndecided)
{
    VerifierConfig cfg;
    cfg.max_depth = 2;
    const Certificate c = verify(reduced(b1_enclosure(), Relation::ge, {0.0, 1.0}), cfg);
    EXPECT_EQ(c.verdict, Verdict::undecided);
    ASSERT_EQ(c.nodes.size(), 1u);
    EXPECT_EQ(c.nodes.front().kind, EvidenceKind::unresolved);
    EXPECT_LT(c.nodes.front().lo, c.nodes.front().hi);
}

TEST(Verify, ConfigValidation)
{
    const Claim claim = reduced(Interval(2.0), Relation::le);
    VerifierConfig cfg;
    cfg.max_depth = 0;
    EXPECT_THROW(verify(claim, cfg), ConfigError);
    cfg = {};
    cfg.min_width = 0.0;
    EXPECT_THROW(verify(claim, cfg), ConfigError);
    cfg = {};
    cfg.min_width = 1.0;
    EXPECT_THROW(verify(claim, cfg), ConfigError);
    cfg = {};
    cfg.endpoint_margin = -1.0;
    EXPECT_THROW(verify(claim, cfg), ConfigError);
    cfg = {};
    cfg.workers = 0;
    EXPECT_THROW(verify(claim, cfg), ConfigError);
}

TEST(Verify, ClaimValidation)
{
    // h_1.8(1) is far from zero, so 1 cannot be an equality point.
    EXPECT_THROW(verify(reduced(Interval(1.8), Relation::ge, {0.0, 1.0})), ConfigError);
    EXPECT_THROW(verify(reduced(Interval(2.0), Relation::le, {0.0}, Interval(0.2, 1.0))), ConfigError);
    EXPECT_THROW(verify(reduced(Interval(2.0), Relation::le, {}, Interval(0.5, 0.5))), ConfigError);
    EXPECT_THROW(verify(reduced(Interval(-1.0, 2.0), Relation::le)), ConfigError);
}

TEST(Verify, DefaultEqualitySet)
{
    EXPECT_EQ(default_equality_set(ReducedTarget{Interval(2.0)}, Interval(0.0, 1.0)), (std::vector<double>{0.0}));
    EXPECT_EQ(default_equality_set(ReducedTarget{b1_enclosure()}, Interval(0.0, 1.0)),
              (std::vector<double>{0.0, 1.0}));
    EXPECT_TRUE(default_equality_set(ReducedTarget{Interval(2.0)}, Interval(0.3, 0.7)).empty());
}

TEST(Verify, DeterministicAcrossWorkerCounts)
{
    const std::vector<Claim> claims = {
        reduced(Interval(2.0), Relation::le),
        reduced(b1_enclosure(), Relation::ge, {0.0, 1.0}),
        reduced(Interval(1.8), Relation::ge),
        reduced(Interval(1.9), Relation::le),
        Claim{DifferenceTarget{{pi_enc(), Interval(2.0)}, {b1_enclosure() + Interval(1.0), b1_enclosure()}},
              Relation::ge, Interval(0.0, 1.0), {0.0, 1.0}},
        Claim{DifferenceTarget{{Interval(3.0), Interval(2.0)}, {Interval(3.0), Interval(2.0)}}, Relation::ge,
              Interval(0.0, 1.0), {}},
    };
    for (const Claim &claim : claims) {
        VerifierConfig cfg;
        cfg.workers = 1;
        const std::string reference = to_json(verify(claim, cfg)).dump();
        for (unsigned w : {2u, 3u, 4u, 8u}) {
            cfg.workers = w;
            for (int rep = 0; rep < 3; ++rep) {
                ASSERT_EQ(to_json(verify(claim, cfg)).dump(), reference) << "workers=" << w;
            }
        }
    }
    // Budget-limited searches too.
    VerifierConfig tight;
    tight.max_depth = 5;
    const Claim hard = reduced(Interval(1.99), Relation::le);
    const std::string reference = to_json(verify(hard, tight)).dump();
    tight.workers = 4;
    EXPECT_EQ(to_json(verify(hard, tight)).dump(), reference);
}

TEST(Verify, RegimeAgreement)
{
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    for (double b : {0.3, 0.8, 1.0, 1.3, phi}) {
        EXPECT_EQ(verify(reduced(Interval(b), Relation::ge)).verdict, Verdict::proven) << b;
    }
    for (double b : {1.63, 1.66, 1.7, 1.74}) {
        EXPECT_EQ(verify(reduced(Interval(b), Relation::ge)).verdict, Verdict::proven) << b;
    }
    EXPECT_EQ(verify(reduced(b1_enclosure(), Relation::ge, {0.0, 1.0})).verdict, Verdict::proven);
    for (double b : {1.76, 1.8, 1.85, 1.9, 1.95}) {
        EXPECT_EQ(verify(reduced(Interval(b), Relation::ge)).verdict, Verdict::refuted) << b;
        EXPECT_EQ(verify(reduced(Interval(b), Relation::le)).verdict, Verdict::refuted) << b;
    }
    for (double b : {2.0, 2.2, 2.5, 3.0, 5.0}) {
        EXPECT_EQ(verify(reduced(Interval(b), Relation::le)).verdict, Verdict::proven) << b;
    }
}

TEST(VerifierProperty, SoundnessFuzz)
{
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> ub(0.3, 3.0);
    std::uniform_real_distribution<double> tweak(-0.05, 0.05);
    std::uniform_real_distribution<double> ux(0.0, 1.0);
    std::bernoulli_distribution coin(0.5);
    std::uniform_int_distribution<int> kind(0, 2);
    int proven = 0;
    int refuted = 0;
    for (int i = 0; i < 1000; ++i) {
        const double b = ub(rng);
        Claim claim;
        switch (kind(rng)) {
        case 0:
            claim.target = ReducedTarget{Interval(b)};
            break;
        case 1:
            claim.target = FamilyTarget{{Interval((b + 1.0) * (1.0 + tweak(rng))), Interval(b)}};
            break;
        default:
            claim.target = DifferenceTarget{{Interval(b + 1.0), Interval(b)},
                                            {Interval((b + 1.0) * (1.0 + tweak(rng))), Interval(ub(rng))}};
            break;
        }
        claim.relation = coin(rng) ? Relation::ge : Relation::le;
        claim.equality_set = default_equality_set(claim.target, claim.domain);
        const Certificate c = verify(claim);
        if (c.verdict == Verdict::proven) {
            ++proven;
            for (int k = 0; k < 10000; ++k) {
                const double x = k == 0 ? 1.0 : ux(rng);
                const double v = scalar_value(claim.target, x);
                if (claim.relation == Relation::ge) {
                    ASSERT_GE(v, -1e-12) << i << " x=" << x;
                } else {
                    ASSERT_LE(v, 1e-12) << i << " x=" << x;
                }
            }
        } else if (c.verdict == Verdict::refuted) {
            ++refuted;
            const Node &w = c.nodes.front();
            const double v = scalar_value(claim.target, w.lo);
            const int exact = exact_value(claim.target, w.lo).sign();
            if (claim.relation == Relation::ge) {
                ASSERT_LT(v, 0.0) << i;
                ASSERT_LT(exact, 0) << i;
            } else {
                ASSERT_GT(v, 0.0) << i;
                ASSERT_GT(exact, 0) << i;
            }
        }
    }
    // Both outcomes must actually be exercised.
    EXPECT_GT(proven, 100);
    EXPECT_GT(refuted, 100);
}

TEST(VerifierProperty, ProvenCertificatesReplay)
{
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> ub(0.3, 3.0);
    int replayed = 0;
    for (int i = 0; i < 200; ++i) {
        const double b = ub(rng);
        const Relation r = b < 1.75 ? Relation::ge : Relation::le;
        Claim claim{ReducedTarget{Interval(b)}, r, Interval(0.0, 1.0), {}};
        claim.equality_set = default_equality_set(claim.target, claim.domain);
        const Certificate c = verify(claim);
        if (c.verdict != Verdict::proven) {
            continue;
        }
        ++replayed;
        const ReplayReport rep = replay(c);
        ASSERT_TRUE(rep.accepted) << b << ": " << rep.reason;
    }
    EXPECT_GT(replayed, 150);
}

TEST(FindCrossing, Examples)
{
    const CrossingResult r = find_crossing(ReducedParam(1.8));
    ASSERT_TRUE(r.bracket.has_value());
    EXPECT_FALSE(r.undecided);
    EXPECT_GT(r.bracket->root_lo(), 0.9);
    EXPECT_LT(r.bracket->root_hi(), 1.0);
    EXPECT_GT(r.bracket->positive_enclosure.lo(), 0.0);
    EXPECT_LT(r.bracket->negative_enclosure.hi(), 0.0);
    // Scalar bisection oracle at 256 bits.
    Mp lo(0.5);
    Mp hi(1.0);
    for (int i = 0; i < 200; ++i) {
        const Mp m = (lo + hi) / Mp(2.0);
        (oracle::h(Mp(1.8), m).sign() > 0 ? lo : hi) = m;
    }
    EXPECT_TRUE(oracle::inside(lo, r.bracket->root_lo(), r.bracket->root_hi()));
    EXPECT_LT(r.bracket->root_hi() - r.bracket->root_lo(), 1e-9);

    EXPECT_FALSE(find_crossing(ReducedParam(2.0)).bracket.has_value());
    EXPECT_FALSE(find_crossing(ReducedParam(2.0)).undecided);
    EXPECT_FALSE(find_crossing(ReducedParam(1.0)).bracket.has_value());
}

TEST(FindCrossing, BracketsAcrossTheRegime)
{
    for (double b : {1.76, 1.8, 1.85, 1.9, 1.95, 1.99}) {
        const CrossingResult r = find_crossing(ReducedParam(b));
        ASSERT_TRUE(r.bracket.has_value()) << b;
        EXPECT_GT(oracle::h(Mp(b), Mp(r.bracket->positive_x)).sign(), 0) << b;
        EXPECT_LT(oracle::h(Mp(b), Mp(r.bracket->negative_x)).sign(), 0) << b;
    }
}

TEST(FindCrossing, BudgetExhaustionIsFlagged)
{
    // Just above b1 the endpoint value is below the enclosure resolution.
    const double b = std::nextafter(thresholds().b1, 3.0);
    const CrossingResult r = find_crossing(ReducedParam(b));
    EXPECT_TRUE(r.undecided || r.bracket.has_value());
    if (r.bracket) {
        EXPECT_LT(r.bracket->negative_enclosure.hi(), 0.0);
    }
}

TEST(Verify, SignNodesCarryOneSignedEnclosures)
{
    const Certificate c = verify(reduced(b1_enclosure(), Relation::ge, {0.0, 1.0}));
    for (const Node &n : c.nodes) {
        if (n.kind == EvidenceKind::sign) {
            EXPECT_GE(n.enclosure.lo(), 0.0);
        } else {
            ASSERT_EQ(n.kind, EvidenceKind::monotone);
            ASSERT_TRUE(n.anchor.has_value());
        }
    }
}
