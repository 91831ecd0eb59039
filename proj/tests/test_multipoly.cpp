#include <catch2/catch_amalgamated.hpp>

#include "vlab/multipoly.hpp"

using namespace vlab;

namespace
{
    MultiPoly random_poly(const FieldPtr& F, uint32_t nvars, uint32_t maxdeg, uint32_t nterms,
                          std::mt19937_64& rng)
    {
        MultiPoly P(F, nvars);
        std::uniform_int_distribution<uint32_t> d(0, maxdeg);
        for (uint32_t t = 0; t < nterms; ++t) {
            Exps e(nvars);
            for (auto& v : e) v = d(rng);
            P.add_term(e, F->random_element(rng));
        }
        return P;
    }

    std::vector<FieldElement> random_point(const FieldPtr& F, uint32_t n, std::mt19937_64& rng)
    {
        std::vector<FieldElement> x;
        for (uint32_t i = 0; i < n; ++i) x.push_back(F->random_element(rng));
        return x;
    }
}

TEST_CASE("weight systems", "[multipoly]")
{
    WeightSystem ws(3, 3);
    CHECK(ws.weight(1) == 2);
    CHECK(ws.weight(2) == 8);
    CHECK(ws.weight(3) == 26);
    CHECK(ws.h_weight == 13);

    WeightSystem w2(2, 4);
    CHECK(w2.weight(4) == 15);
    CHECK(w2.h_weight == 15);

    CHECK(ws.weight_gcd({1, 2}) == 2);
    CHECK(ws.weight_gcd({2}) == 8);
    CHECK(ws.weight_gcd({2, 3}) == 2);
    CHECK(ws.weight_gcd({3}) == 26);

    CHECK_THROWS_AS(WeightSystem(1, 2), invalid_input);
    CHECK_THROWS_AS(WeightSystem(2, 0), invalid_input);
    CHECK_THROWS_AS(ws.weight(0), invalid_input);
    CHECK_THROWS_AS(ws.weight(4), invalid_input);
}

TEST_CASE("monomial orders", "[multipoly]")
{
    // x*z versus y^2 in three variables: equal degree, grlex and grevlex disagree
    Exps xz{1, 0, 1}, y2{0, 2, 0};
    CHECK(mon_cmp(xz, y2, MonOrder::grlex) == 1);
    CHECK(mon_cmp(xz, y2, MonOrder::grevlex) == -1);
    CHECK(mon_cmp(xz, y2, MonOrder::lex) == 1);

    Exps a{2, 0}, b{1, 5};
    CHECK(mon_cmp(a, b, MonOrder::lex) == 1);
    CHECK(mon_cmp(a, b, MonOrder::grlex) == -1);
    CHECK(mon_cmp(a, a, MonOrder::grevlex) == 0);

    CHECK(mon_divides({1, 0}, {2, 3}));
    CHECK_FALSE(mon_divides({1, 4}, {2, 3}));
    CHECK(exps_degree({3, 0, 2}) == 5);
}

TEST_CASE("polynomial arithmetic properties", "[multipoly]")
{
    auto rng = detail::seeded_rng({0x6d700101ULL});
    for (auto [p, e, m] : {std::tuple<uint32_t, uint32_t, uint32_t>{2, 1, 1},
                           {3, 1, 1},
                           {2, 1, 3},
                           {3, 1, 2},
                           {2, 2, 1}}) {
        auto F = ExtensionField::create(p, e, m);
        for (int it = 0; it < 20; ++it) {
            MultiPoly A = random_poly(F, 3, 4, 5, rng);
            MultiPoly B = random_poly(F, 3, 4, 5, rng);
            MultiPoly C = random_poly(F, 3, 4, 5, rng);
            CHECK(A + B == B + A);
            CHECK((A + B) * C == A * C + B * C);
            CHECK(A * (B * C) == (A * B) * C);
            CHECK(A - A == MultiPoly(F, 3));
            CHECK(A + A.negated() == MultiPoly(F, 3));

            auto x = random_point(F, 3, rng);
            CHECK((A * B).evaluate(x) == A.evaluate(x) * B.evaluate(x));
            CHECK((A + B).evaluate(x) == A.evaluate(x) + B.evaluate(x));
        }
    }
}

TEST_CASE("frobenius shape of squaring over F_2", "[multipoly]")
{
    auto F = ExtensionField::create(2, 1, 1);
    MultiPoly X = MultiPoly::variable(F, 2, 0);
    MultiPoly Y = MultiPoly::variable(F, 2, 1);
    MultiPoly S = (X + Y) * (X + Y);
    MultiPoly expect = X * X + Y * Y;
    CHECK(S == expect);
}

TEST_CASE("substitution, translation, scaling", "[multipoly]")
{
    auto rng = detail::seeded_rng({0x6d700202ULL});
    auto F = ExtensionField::create(3, 1, 2);
    for (int it = 0; it < 25; ++it) {
        MultiPoly P = random_poly(F, 3, 5, 6, rng);
        auto x = random_point(F, 3, rng);

        FieldElement a = F->random_element(rng);
        MultiPoly T = P.translate_var(1, a);
        auto xs = x;
        xs[1] = x[1] + a;
        CHECK(T.evaluate(x) == P.evaluate(xs));

        MultiPoly S = P.substitute_value(2, a);
        auto xv = x;
        xv[2] = a;
        CHECK(S.evaluate(x) == P.evaluate(xv));

        std::vector<FieldElement> eps = random_point(F, 3, rng);
        MultiPoly Sc = P.scale_vars(eps);
        std::vector<FieldElement> ex = x;
        for (int i = 0; i < 3; ++i) ex[i] = eps[i] * x[i];
        CHECK(Sc.evaluate(x) == P.evaluate(ex));
    }

    // translation is invertible
    MultiPoly P = random_poly(F, 2, 6, 5, rng);
    FieldElement a = F->generator();
    CHECK(P.translate_var(0, a).translate_var(0, F->neg(a)) == P);
}

TEST_CASE("partial derivatives", "[multipoly]")
{
    auto F3 = ExtensionField::create(3, 1, 1);
    // d/dY (X^3 Y^2) = 2 X^3 Y over F_3; d/dX kills X^3
    MultiPoly M = MultiPoly::monomial(F3, {3, 2}, F3->one());
    MultiPoly dY = M.partial_derivative(1);
    MultiPoly expect = MultiPoly::monomial(F3, {3, 1}, F3->from_uint(2));
    CHECK(dY == expect);
    CHECK(M.partial_derivative(0).is_zero());

    // product rule on random data
    auto rng = detail::seeded_rng({0x6d700303ULL});
    auto F = ExtensionField::create(2, 1, 2);
    for (int it = 0; it < 20; ++it) {
        MultiPoly A = random_poly(F, 2, 4, 4, rng);
        MultiPoly B = random_poly(F, 2, 4, 4, rng);
        MultiPoly lhs = (A * B).partial_derivative(0);
        MultiPoly rhs = A.partial_derivative(0) * B + A * B.partial_derivative(0);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("homogeneity bookkeeping", "[multipoly]")
{
    auto F = ExtensionField::create(2, 1, 1);
    MultiPoly X = MultiPoly::variable(F, 2, 0);
    MultiPoly Y = MultiPoly::variable(F, 2, 1);
    MultiPoly H = X * X * Y + Y * Y * Y;
    REQUIRE(H.homogeneous_degree().has_value());
    CHECK(*H.homogeneous_degree() == 3);
    MultiPoly NH = X * X + Y;
    CHECK_FALSE(NH.homogeneous_degree().has_value());
    CHECK(NH.total_degree() == 2);
    CHECK(MultiPoly(F, 2).homogeneous_degree().value() == 0);
}

TEST_CASE("isobaric forms and weighted pullback", "[multipoly]")
{
    auto F3 = ExtensionField::create(3, 1, 1);
    WeightSystem ws(3, 2);

    // g_1^4 + g_2, weight 8, pulls back to X_1^8 + X_2^8
    IsobaricForm f(ws, GenSet::g, F3,
                   {{{4, 0}, F3->one()}, {{0, 1}, F3->one()}});
    CHECK(f.weight() == 8);
    CHECK(f.type() == 0);
    MultiPoly P = f.pullback();
    MultiPoly want(F3, 2);
    want.add_term({8, 0}, F3->one());
    want.add_term({0, 8}, F3->one());
    CHECK(P == want);
    CHECK(*P.homogeneous_degree() == 8);

    // gh set: h^2 + 2 g_1^4 also has weight 8 (h carries weight 4 here)
    IsobaricForm fh(ws, GenSet::gh, F3,
                    {{{0, 2}, F3->one()}, {{4, 0}, F3->from_uint(2)}});
    CHECK(fh.weight() == 8);
    CHECK(fh.type() == 0);
    MultiPoly Ph = fh.pullback();
    MultiPoly wanth(F3, 2);
    wanth.add_term({0, 8}, F3->one());
    wanth.add_term({8, 0}, F3->from_uint(2));
    CHECK(Ph == wanth);

    // odd type
    IsobaricForm fo(ws, GenSet::gh, F3, {{{2, 1}, F3->one()}});
    CHECK(fo.weight() == 8);
    CHECK(fo.type() == 1);
}

TEST_CASE("isobaric validation failures name the monomials", "[multipoly]")
{
    auto F3 = ExtensionField::create(3, 1, 1);
    WeightSystem ws(3, 2);

    try {
        IsobaricForm bad(ws, GenSet::g, F3, {{{1, 0}, F3->one()}, {{0, 1}, F3->one()}});
        FAIL("expected invalid_input");
    } catch (const invalid_input& ex) {
        std::string msg = ex.what();
        CHECK(msg.find("g1") != std::string::npos);
        CHECK(msg.find("g2") != std::string::npos);
        CHECK(msg.find("weight") != std::string::npos);
    }

    // g_1^2 h and g_1^4 share weight 8 but differ in h-exponent parity
    try {
        IsobaricForm bad(ws, GenSet::gh, F3, {{{2, 1}, F3->one()}, {{4, 0}, F3->one()}});
        FAIL("expected invalid_input");
    } catch (const invalid_input& ex) {
        std::string msg = ex.what();
        CHECK(msg.find("mixed type") != std::string::npos);
        CHECK(msg.find("h") != std::string::npos);
        CHECK(msg.find("g1^4") != std::string::npos);
    }

    CHECK_THROWS_AS(IsobaricForm(ws, GenSet::g, F3, {}), invalid_input);
    auto F9 = ExtensionField::create(3, 2, 1);
    CHECK_THROWS_AS(IsobaricForm(ws, GenSet::g, F9, {{{4, 0}, F9->one()}}), invalid_input);
}

TEST_CASE("pullback scaling covariance", "[multipoly]")
{
    // scaling X_i by a w_i-th root of unity fixes a pure-g pullback exactly,
    // and multiplies a gh pullback by a (q-1)-th root of unity to the power type
    auto rng = detail::seeded_rng({0x6d700404ULL});
    for (uint64_t q : {2u, 3u}) {
        uint32_t r = 2;
        WeightSystem ws(q, r);
        auto Fq = ExtensionField::create((uint32_t)q, 1, 1);
        uint32_t M = 2;   // lcm(1,2): mu_{w_1}, mu_{w_2} both live in F_{q^2}
        auto FM = ExtensionField::create((uint32_t)q, 1, M);
        uint64_t QM = q * q;

        IsobaricForm f(ws, GenSet::g, Fq,
                       {{{(uint32_t)ws.weight(2) / (uint32_t)ws.weight(1), 0}, Fq->one()},
                        {{0, 1}, Fq->one()}});
        MultiPoly P = f.pullback().lift_to(FM);

        IsobaricForm fh(ws, GenSet::gh, Fq, {{{0, 1}, Fq->one()}});   // plain h, type 1 mod q-1
        MultiPoly Ph = fh.pullback().lift_to(FM);

        for (int it = 0; it < 10; ++it) {
            std::vector<FieldElement> eps;
            for (uint32_t i = 1; i <= r; ++i) {
                // random element of mu_{w_i}: xi^{(Q-1)/w_i} for random nonzero xi
                FieldElement xi = FM->zero();
                while (xi.is_zero()) xi = FM->random_element(rng);
                eps.push_back(FM->pow(xi, BigInt((QM - 1) / ws.weight(i))));
            }
            CHECK(P.scale_vars(eps) == P);

            FieldElement chi = FM->pow(eps[r - 1], BigInt(ws.h_weight));
            CHECK(FM->pow(chi, BigInt(q - 1)) == FM->one());
            MultiPoly scaled = Ph.scale_vars(eps);
            CHECK(scaled == Ph.scaled(FM->pow(chi, BigInt(fh.type()))));
        }
    }
}

TEST_CASE("dehomogenize at a point", "[multipoly]")
{
    auto F2 = ExtensionField::create(2, 1, 1);
    // X_1 X_2 (X_1 + X_2) at (1:0): v + v^2 in the surviving variable
    MultiPoly X1 = MultiPoly::variable(F2, 2, 0);
    MultiPoly X2 = MultiPoly::variable(F2, 2, 1);
    MultiPoly P = X1 * X2 * (X1 + X2);
    MultiPoly Q = dehomogenize_at(P, {F2->one(), F2->zero()}, 0);
    MultiPoly want(F2, 1);
    want.add_term({1}, F2->one());
    want.add_term({2}, F2->one());
    CHECK(Q == want);
    CHECK(Q.evaluate({F2->zero()}).is_zero());

    // point with a translation: X_1^2 + X_1 X_2 at (1:2) over F_3
    auto F3 = ExtensionField::create(3, 1, 1);
    MultiPoly A = MultiPoly::monomial(F3, {2, 0}, F3->one()) +
                  MultiPoly::monomial(F3, {1, 1}, F3->one());
    MultiPoly QA = dehomogenize_at(A, {F3->one(), F3->from_uint(2)}, 0);
    CHECK(QA.evaluate({F3->zero()}).is_zero());

    // residue-extension point: X_1^2 + X_2^2 vanishes at (i : 1) with i^2 = -1
    UPoly g = UPoly::from_uints(F3, {1, 0, 1});
    auto F9 = ExtensionField::residue_extension(F3, g);
    MultiPoly B = MultiPoly::monomial(F3, {2, 0}, F3->one()) +
                  MultiPoly::monomial(F3, {0, 2}, F3->one());
    MultiPoly QB = dehomogenize_at(B, {F9->generator(), F9->one()}, 1);
    CHECK(QB.evaluate({F9->zero()}).is_zero());
    CHECK_FALSE(QB.is_zero());

    CHECK_THROWS_AS(dehomogenize_at(P, {F2->zero(), F2->one()}, 0), invalid_input);
    CHECK_THROWS_AS(dehomogenize_at(P, {F2->one()}, 0), invalid_input);
}

TEST_CASE("dehomogenize origin value matches projective evaluation", "[multipoly]")
{
    auto rng = detail::seeded_rng({0x6d700505ULL});
    auto F = ExtensionField::create(3, 1, 2);
    for (int it = 0; it < 30; ++it) {
        // random homogeneous cubic in 3 variables
        MultiPoly P(F, 3);
        for (int t = 0; t < 6; ++t) {
            uint32_t a = rng() % 4, b = rng() % (4 - a);
            Exps e{a, b, 3 - a - b};
            P.add_term(e, F->random_element(rng));
        }
        if (P.is_zero()) continue;
        auto x = random_point(F, 3, rng);
        uint32_t chart = rng() % 3;
        if (x[chart].is_zero()) x[chart] = F->one();
        MultiPoly Q = dehomogenize_at(P, x, chart);
        FieldElement lhs = Q.evaluate({F->zero(), F->zero()});
        FieldElement scale = F->pow(F->inv(x[chart]), BigInt(3));
        CHECK(lhs == P.evaluate(x) * scale);
    }
}
