#include <catch2/catch_amalgamated.hpp>

#include "vlab/families.hpp"

using namespace vlab;

namespace
{
    // subgroup closure inside Z/w_1 x ... x Z/w_r, as an oracle for lattice indices
    uint64_t closure_size(const WeightSystem& ws, const std::vector<std::vector<uint64_t>>& gens)
    {
        std::set<std::vector<uint64_t>> seen;
        std::vector<std::vector<uint64_t>> frontier{std::vector<uint64_t>(ws.r, 0)};
        seen.insert(frontier[0]);
        while (!frontier.empty()) {
            std::vector<std::vector<uint64_t>> next;
            for (const auto& v : frontier)
                for (const auto& g : gens) {
                    std::vector<uint64_t> w(ws.r);
                    for (uint32_t i = 0; i < ws.r; ++i) w[i] = (v[i] + g[i]) % ws.weight(i + 1);
                    if (seen.insert(w).second) next.push_back(std::move(w));
                }
            frontier = std::move(next);
        }
        return seen.size();
    }

    // zeros of a binary form counted by exact ground degree, by direct scanning
    std::map<uint32_t, uint64_t> brute_zero_degrees(const MultiPoly& P, uint32_t mmax)
    {
        const FieldPtr& Fq = P.field();
        std::map<uint32_t, uint64_t> out;
        for (uint32_t m = 1; m <= mmax; ++m) {
            auto F = ExtensionField::create(Fq->p(), Fq->e(), m);
            MultiPoly L = P.lift_to(F);
            std::vector<std::vector<FieldElement>> pts;
            pts.push_back({F->zero(), F->one()});
            for (uint64_t i = 0; i < F->size_u64(); ++i)
                pts.push_back({F->one(), F->element_at(i)});
            for (const auto& x : pts)
                if (L.evaluate(x).is_zero() && point_min_degree(x) == m) ++out[m];
        }
        return out;
    }
}

TEST_CASE("lattice group orders match the closed forms", "[valence]")
{
    for (uint64_t q : {2u, 3u, 4u, 5u, 7u, 9u})
        for (uint32_t r : {2u, 3u, 4u}) {
            WeightSystem ws(q, r);
            GroupOrders G = group_orders(ws);
            CHECK(G.match);
            CHECK(G.order_H == G.order_H_closed);
            CHECK(G.index == BigInt(std::gcd(q - 1, (uint64_t)r)));
            CHECK(G.order_Hprime * G.index == G.order_H);
        }
}

TEST_CASE("group orders against subgroup closure", "[valence]")
{
    for (auto [q, r] : {std::pair<uint64_t, uint32_t>{2, 2},
                        {3, 2},
                        {4, 2},
                        {5, 2},
                        {2, 3},
                        {3, 3},
                        {4, 3}}) {
        WeightSystem ws(q, r);
        GroupOrders G = group_orders(ws);

        std::vector<uint64_t> diag;
        for (uint32_t i = 1; i <= r; ++i) diag.push_back(ws.weight(i) / (q - 1));

        // the subgroup H' upstairs: first r-1 slots free, (q-1)-th powers in
        // the last, plus the diagonal
        std::vector<std::vector<uint64_t>> gens;
        for (uint32_t i = 0; i + 1 < r; ++i) {
            std::vector<uint64_t> g(r, 0);
            g[i] = 1;
            gens.push_back(g);
        }
        std::vector<uint64_t> last(r, 0);
        last[r - 1] = (q - 1) % ws.weight(r);
        gens.push_back(last);
        gens.push_back(diag);
        uint64_t up = closure_size(ws, gens);

        uint64_t full = 1;
        for (uint32_t i = 1; i <= r; ++i) full *= ws.weight(i);
        CHECK(BigInt(up / (q - 1)) == G.order_Hprime);
        CHECK(BigInt(full / up) == G.index);
    }
}

TEST_CASE("stabilizer formula against brute force", "[valence]")
{
    for (auto [q, r] : {std::pair<uint64_t, uint32_t>{2, 2},
                        {3, 2},
                        {4, 2},
                        {5, 2},
                        {2, 3},
                        {3, 3}}) {
        WeightSystem ws(q, r);
        for (uint32_t mask = 1; mask < (1u << r); ++mask) {
            std::vector<uint32_t> S;
            for (uint32_t i = 0; i < r; ++i)
                if (mask & (1u << i)) S.push_back(i + 1);
            CHECK(stabilizer_order(ws, S) == stabilizer_order_brute(ws, S));
        }
    }
}

TEST_CASE("valence identity for omitted-generator families", "[valence]")
{
    struct Case
    {
        uint64_t q;
        uint32_t r, j;
        Rational rhs;
        bool boundary;
        uint64_t nu_x;
        BigInt hx;
    };
    std::vector<Case> cases{
        {3, 2, 1, make_frac(1, 1), true, 8, BigInt(8)},
        {3, 2, 2, make_frac(1, 4), false, 2, BigInt(8)},
        {2, 2, 1, make_frac(1, 1), true, 3, BigInt(3)},
        {2, 2, 2, make_frac(1, 3), false, 1, BigInt(3)},
        {2, 3, 3, make_frac(1, 7), false, 3, BigInt(21)},
        {2, 3, 1, make_frac(1, 1), true, 21, BigInt(21)},
    };
    for (const auto& c : cases) {
        auto [p, e] = factor_prime_power(c.q);
        auto Fq = ExtensionField::create(p, e, 1);
        WeightSystem ws(c.q, c.r);
        auto fam = omitted_generator_family(ws, Fq, c.j);
        ValenceReport R = verify_valence(fam);
        CHECK(R.verdict);
        CHECK(R.rhs == c.rhs);
        REQUIRE(R.orbits.size() == 1);
        const OrbitEntry& E = R.orbits[0];
        CHECK(E.boundary == c.boundary);
        CHECK(E.nu_x == c.nu_x);
        CHECK(E.stab_order == c.hx);
        CHECK(E.orbit_count == 1);
        CHECK(R.lhs_interior + R.lhs_boundary == R.rhs);
        if (!E.boundary) CHECK(boost::multiprecision::denominator(E.nu_omega) == 1);
    }
}

TEST_CASE("valence identity for an h family", "[valence]")
{
    for (uint64_t q : {2u, 3u, 4u}) {
        auto [p, e] = factor_prime_power(q);
        auto Fq = ExtensionField::create(p, e, 1);
        WeightSystem ws(q, 2);
        Exps he{0, 1};
        IsobaricForm h(ws, GenSet::gh, Fq, {{he, Fq->one()}});
        CHECK(h.weight() == ws.h_weight);
        CHECK(h.type() == 1 % (q - 1));
        ValenceReport R = verify_valence({h});
        CHECK(R.verdict);
        CHECK(R.rhs == make_frac(BigInt(ws.h_weight), BigInt(ws.weight(2))));
        REQUIRE(R.orbits.size() == 1);
        CHECK(R.orbits[0].boundary);
        CHECK(R.lhs_boundary == make_frac(1, BigInt(q - 1)));
    }
}

TEST_CASE("valence with an irrational image class", "[valence]")
{
    // q=2, r=2, weight six: g_1^6 + g_1^3 g_2 + g_2^2 pulls back to
    // X^6 + X^3 Y^3 + Y^6, whose six zeros form one class over a degree-two
    // image point: 2 conjugate scaling orbits of 3 points each
    auto F2 = ExtensionField::create(2, 1, 1);
    WeightSystem ws(2, 2);
    IsobaricForm f(ws, GenSet::g, F2,
                   {{{6, 0}, F2->one()}, {{3, 1}, F2->one()}, {{0, 2}, F2->one()}});
    ValenceReport R = verify_valence({f});
    CHECK(R.verdict);
    CHECK(R.rhs == make_frac(2, 1));
    REQUIRE(R.orbits.size() == 1);
    const OrbitEntry& E = R.orbits[0];
    CHECK(E.orbit_count == 2);
    CHECK(E.record_count == 6);
    CHECK(E.nu_x == 1);
    CHECK(E.stab_order == 1);
    CHECK(E.nu_z == make_frac(1, 1));
    CHECK_FALSE(E.boundary);
    CHECK(R.locus.records.size() == 6);
    for (const auto& rec : R.locus.records) CHECK(rec.min_degree == 6);
}

TEST_CASE("valence with merged scaling orbit", "[valence]")
{
    // q=3, r=2: g_1^4 + g_2 pulls back to X^8 + Y^8; all eight degree-four
    // zeros share the rational image (1 : 2), one scaling orbit
    auto F3 = ExtensionField::create(3, 1, 1);
    WeightSystem ws(3, 2);
    IsobaricForm f(ws, GenSet::g, F3, {{{4, 0}, F3->one()}, {{0, 1}, F3->one()}});
    ValenceReport R = verify_valence({f});
    CHECK(R.verdict);
    CHECK(R.rhs == make_frac(1, 1));
    REQUIRE(R.orbits.size() == 1);
    CHECK(R.orbits[0].orbit_count == 1);
    CHECK(R.orbits[0].record_count == 8);
    CHECK(R.locus.records.size() == 8);
    for (const auto& rec : R.locus.records) CHECK(rec.min_degree == 4);
}

TEST_CASE("random families satisfy the identity", "[valence]")
{
    auto rng = detail::seeded_rng({0x76616c01ULL});
    for (auto [q, r] : {std::pair<uint64_t, uint32_t>{2, 2}, {3, 2}, {2, 3}}) {
        auto [p, e] = factor_prime_power(q);
        auto Fq = ExtensionField::create(p, e, 1);
        WeightSystem ws(q, r);
        for (int it = 0; it < 6; ++it) {
            GenSet gens = (it % 2) ? GenSet::gh : GenSet::g;
            auto fam = random_family(ws, gens, Fq, r == 2 ? 24 : 8, rng);
            ValenceReport R = verify_valence(fam);
            CHECK(R.verdict);
            uint64_t recs = 0;
            for (const auto& E : R.orbits) {
                recs += E.record_count;
                if (!E.boundary)
                    CHECK(boost::multiprecision::denominator(E.nu_omega) == 1);
            }
            CHECK(recs == R.locus.records.size());
        }
    }
}

TEST_CASE("scaling samples stabilize pullback zero sets", "[valence]")
{
    auto rng = detail::seeded_rng({0x76616c02ULL});
    for (auto [q, r] : {std::pair<uint64_t, uint32_t>{2, 2}, {3, 2}}) {
        auto [p, e] = factor_prime_power(q);
        auto Fq = ExtensionField::create(p, e, 1);
        WeightSystem ws(q, r);
        uint32_t M = 2;
        auto FM = ExtensionField::create(p, e, M);
        uint64_t Q = FM->size_u64();
        for (int it = 0; it < 6; ++it) {
            GenSet gens = (it % 2) ? GenSet::gh : GenSet::g;
            auto fam = random_family(ws, gens, Fq, 12, rng);
            for (const auto& f : fam) {
                MultiPoly P = f.pullback().lift_to(FM);
                std::vector<FieldElement> eps;
                for (uint32_t i = 1; i <= r; ++i) {
                    FieldElement xi = FM->zero();
                    while (xi.is_zero()) xi = FM->random_element(rng);
                    eps.push_back(FM->pow(xi, BigInt((Q - 1) / ws.weight(i))));
                }
                MultiPoly S = P.scale_vars(eps);
                // proportionality: S = c P with c the ratio at the lead term
                auto it0 = P.terms().begin();
                FieldElement c = S.terms().at(it0->first) * FM->inv(it0->second);
                CHECK(S == P.scaled(c));
                CHECK(FM->pow(c, BigInt(q - 1)) == FM->one());
            }
        }
    }
}

TEST_CASE("binary-form records agree with direct scanning", "[valence]")
{
    auto rng = detail::seeded_rng({0x76616c03ULL});
    auto F2 = ExtensionField::create(2, 1, 1);
    WeightSystem ws(2, 2);
    for (int it = 0; it < 4; ++it) {
        auto f = random_isobaric(ws, GenSet::gh, F2, 9, (uint32_t)(it % 1), rng);
        REQUIRE(f.has_value());
        ValenceReport R = verify_valence({*f});
        CHECK(R.verdict);
        CHECK(R.rhs == make_frac(3, 1));

        MultiPoly P = f->pullback();
        auto brute = brute_zero_degrees(P, 9);
        std::map<uint32_t, uint64_t> got;
        for (const auto& rec : R.locus.records) ++got[rec.min_degree];
        CHECK(got == brute);
    }
}

TEST_CASE("weight tuple enumeration", "[families]")
{
    WeightSystem ws(3, 2);
    // brute check: all (a,b) with 2a + 8b = k
    for (uint64_t k : {2u, 8u, 10u, 16u, 26u}) {
        auto tuples = weight_tuples(ws, GenSet::g, k);
        std::set<Exps> got(tuples.begin(), tuples.end());
        std::set<Exps> want;
        for (uint32_t a = 0; 2 * a <= k; ++a)
            for (uint32_t b = 0; 2 * a + 8 * b <= k; ++b)
                if (2 * a + 8 * b == k) want.insert(Exps{a, b});
        CHECK(got == want);
    }
    CHECK(weight_tuples(ws, GenSet::g, 3).empty());
    CHECK(weight_tuples(ws, GenSet::g, 0).size() == 1);

    // with h: slot weights 2, 4 and type tracks the h exponent mod q-1
    auto t0 = weight_tuples(ws, GenSet::gh, 8, 0);
    auto t1 = weight_tuples(ws, GenSet::gh, 8, 1);
    for (const auto& ex : t0) {
        CHECK(2 * (uint64_t)ex[0] + 4 * (uint64_t)ex[1] == 8);
        CHECK(ex[1] % 2 == 0);
    }
    for (const auto& ex : t1) CHECK(ex[1] % 2 == 1);
    CHECK(t0.size() == 2);  // 2a+4b=8, b even: (4,0), (0,2)
    CHECK(t1.size() == 1);  // b odd: (2,1)
}

TEST_CASE("omitted-generator families", "[families]")
{
    auto F2 = ExtensionField::create(2, 1, 1);
    WeightSystem ws(2, 3);
    for (uint32_t j = 1; j <= 3; ++j) {
        auto fam = omitted_generator_family(ws, F2, j);
        REQUIRE(fam.size() == 2);
        std::set<uint64_t> weights;
        for (const auto& f : fam) {
            CHECK(f.terms().size() == 1);
            weights.insert(f.weight());
        }
        std::set<uint64_t> want;
        for (uint32_t i = 1; i <= 3; ++i)
            if (i != j) want.insert(ws.weight(i));
        CHECK(weights == want);
    }
}

TEST_CASE("random isobaric forms are well formed", "[families]")
{
    auto rng = detail::seeded_rng({0x66616d01ULL});
    auto F3 = ExtensionField::create(3, 1, 1);
    WeightSystem ws(3, 2);
    for (int it = 0; it < 40; ++it) {
        uint64_t k = 2 + 2 * (rng() % 12);
        auto f = random_isobaric(ws, GenSet::g, F3, k, 0, rng);
        if (!f.has_value()) continue;
        CHECK(f->weight() == k);
        CHECK(f->type() == 0);
        MultiPoly P = f->pullback();
        auto hd = P.homogeneous_degree();
        REQUIRE(hd.has_value());
        CHECK(*hd == k);
    }
    for (uint32_t type = 0; type < 2; ++type) {
        auto f = random_isobaric(ws, GenSet::gh, F3, 8, type, rng);
        REQUIRE(f.has_value());
        CHECK(f->type() == type);
    }
    // unrepresentable weight
    CHECK_FALSE(random_isobaric(ws, GenSet::g, F3, 3, 0, rng).has_value());
}

TEST_CASE("random families are independent and bounded", "[families]")
{
    auto rng = detail::seeded_rng({0x66616d02ULL});
    for (auto [q, r] : {std::pair<uint64_t, uint32_t>{2, 2}, {3, 2}, {2, 3}}) {
        auto [p, e] = factor_prime_power(q);
        auto Fq = ExtensionField::create(p, e, 1);
        WeightSystem ws(q, r);
        for (int it = 0; it < 5; ++it) {
            auto fam = random_family(ws, GenSet::g, Fq, r == 2 ? 20 : 8, rng, 64);
            REQUIRE(fam.size() == r - 1);
            BigInt prod = 1;
            for (const auto& f : fam) prod *= f.weight();
            CHECK(prod <= 64);
            std::vector<MultiPoly> pbs;
            for (const auto& f : fam) pbs.push_back(f.pullback());
            auto rep = independence_check(pbs);
            CHECK(rep.independent);
        }
    }
}

TEST_CASE("valence input validation", "[valence]")
{
    auto F3 = ExtensionField::create(3, 1, 1);
    WeightSystem ws3(3, 3);
    CHECK_THROWS_AS(verify_valence({}), invalid_input);

    // r = 3 needs two members
    auto fam1 = omitted_generator_family(ws3, F3, 3);
    auto tooShort = std::vector<IsobaricForm>{fam1[0]};
    CHECK_THROWS_AS(verify_valence(tooShort), invalid_input);

    // duplicated member: the pullbacks share a positive-dimensional zero set
    auto dup = std::vector<IsobaricForm>{fam1[0], fam1[0]};
    CHECK_THROWS_AS(verify_valence(dup), invalid_input);

    CHECK_THROWS_AS(omitted_generator_family(ws3, F3, 4), invalid_input);
    CHECK_THROWS_AS(stabilizer_order(ws3, {}), invalid_input);
    CHECK_THROWS_AS(factor_prime_power(6), invalid_input);
    CHECK(factor_prime_power(8) == std::make_pair(2u, 3u));
    CHECK(factor_prime_power(49) == std::make_pair(7u, 2u));
}
