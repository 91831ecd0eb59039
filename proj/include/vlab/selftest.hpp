#ifndef VLAB_SELFTEST_HPP
#define VLAB_SELFTEST_HPP

#include "vlab/eisenstein.hpp"
#include "vlab/families.hpp"

namespace vlab
{
    struct SuiteResult
    {
        std::string name;
        uint64_t checks = 0;
        std::vector<std::string> failures;
    };

    struct SelftestReport
    {
        uint64_t seed = 0;
        std::vector<SuiteResult> suites;
        bool verdict = false;
    };

    namespace stdetail
    {
        struct Ctx
        {
            SuiteResult* cur = nullptr;
            void check(bool ok, const std::string& what)
            {
                ++cur->checks;
                if (!ok) cur->failures.push_back(what);
            }
        };
    }

    /**
     * Condensed property battery over every layer; a fast, seeded spot check
     * of the invariants the full test suite pins down exhaustively.
     */
    inline SelftestReport run_selftest(uint64_t seed = 0)
    {
        SelftestReport rep;
        rep.seed = seed;
        stdetail::Ctx t;
        auto suite = [&](const std::string& name, auto&& body) {
            rep.suites.push_back(SuiteResult{name, 0, {}});
            t.cur = &rep.suites.back();
            try {
                body();
            } catch (const std::exception& ex) {
                t.cur->failures.push_back(std::string("exception: ") + ex.what());
            }
        };

        suite("field-arithmetic", [&] {
            auto rng = detail::seeded_rng({0x73656c01ULL, seed});
            for (auto [p, e, m] : {std::tuple<uint32_t, uint32_t, uint32_t>{2, 1, 4},
                                   {3, 1, 3},
                                   {2, 2, 2},
                                   {5, 1, 2}}) {
                auto F = ExtensionField::create(p, e, m);
                for (int i = 0; i < 25; ++i) {
                    FieldElement x = F->random_element(rng), y = F->random_element(rng),
                                 z = F->random_element(rng);
                    t.check((x + y) * z == x * z + y * z, "distributivity");
                    t.check(x * y == y * x, "commutativity");
                    if (!x.is_zero()) t.check(x * F->inv(x) == F->one(), "inverse");
                    t.check(F->frobenius(x + y, 1) == F->frobenius(x, 1) + F->frobenius(y, 1),
                            "frobenius additivity");
                    t.check(F->pow(x, F->size()) == x, "q^m power identity");
                }
            }
        });

        suite("upoly-factorization", [&] {
            auto rng = detail::seeded_rng({0x73656c02ULL, seed});
            for (auto [p, e] : {std::pair<uint32_t, uint32_t>{2, 1}, {3, 1}, {2, 2}}) {
                auto F = ExtensionField::create(p, e, 1);
                for (int i = 0; i < 8; ++i) {
                    UPoly f = UPoly::random_monic(F, 2 + (uint32_t)(rng() % 6), rng);
                    auto fac = upoly_factor(f);
                    UPoly prod = UPoly::constant(F, F->one());
                    for (const auto& [g, mult] : fac) {
                        t.check(upoly_irreducible(g), "factor irreducible");
                        for (uint32_t k = 0; k < mult; ++k) prod = prod * g;
                    }
                    t.check(prod == f, "factor product reconstructs");
                }
            }
        });

        suite("multipoly-ring", [&] {
            auto rng = detail::seeded_rng({0x73656c03ULL, seed});
            auto F = ExtensionField::create(3, 1, 1);
            for (int i = 0; i < 10; ++i) {
                auto rand_poly = [&] {
                    MultiPoly P(F, 2);
                    for (int k = 0; k < 4; ++k)
                        P.add_term({(uint32_t)(rng() % 3), (uint32_t)(rng() % 3)},
                                   F->element_at(rng() % 3));
                    return P;
                };
                MultiPoly A = rand_poly(), B = rand_poly(), C = rand_poly();
                t.check((A + B) * C == A * C + B * C, "distributivity");
                std::vector<FieldElement> at{F->element_at(rng() % 3), F->element_at(rng() % 3)};
                t.check((A * B).evaluate(at) == A.evaluate(at) * B.evaluate(at),
                        "evaluation is a ring map");
            }
        });

        suite("groebner-membership", [&] {
            auto rng = detail::seeded_rng({0x73656c04ULL, seed});
            auto F = ExtensionField::create(2, 1, 1);
            for (int i = 0; i < 5; ++i) {
                std::vector<MultiPoly> gens;
                for (int g = 0; g < 2; ++g) {
                    MultiPoly P(F, 2);
                    for (int k = 0; k < 3; ++k)
                        P.add_term({(uint32_t)(rng() % 3), (uint32_t)(rng() % 3)},
                                   F->element_at(rng() % 2));
                    if (P == MultiPoly(F, 2)) P = MultiPoly::variable(F, 2, 0);
                    gens.push_back(P);
                }
                auto G = groebner(gens, MonOrder::grevlex);
                for (const auto& g : gens)
                    t.check(reduce_by(g, G) == MultiPoly(F, 2), "generator reduces to zero");
            }
        });

        suite("local-multiplicity", [&] {
            auto F = ExtensionField::create(3, 1, 1);
            for (uint32_t a = 1; a <= 3; ++a)
                for (uint32_t b = 1; b <= 3; ++b) {
                    std::vector<MultiPoly> gens{MultiPoly::monomial(F, {a, 0}, F->one()),
                                                MultiPoly::monomial(F, {0, b}, F->one())};
                    auto lm = local_multiplicity(gens, (uint64_t)a * b);
                    t.check(lm.nu == (uint64_t)a * b, "monomial pair multiplicity");
                }
            std::vector<MultiPoly> gens{
                MultiPoly::monomial(F, {1, 1}, F->one()),
                MultiPoly::variable(F, 2, 0) + MultiPoly::variable(F, 2, 1)};
            t.check(local_multiplicity(gens, 4).nu == 2, "tangent line pair");
        });

        suite("valence-identities", [&] {
            for (auto [q, r, j] : {std::tuple<uint64_t, uint32_t, uint32_t>{2, 2, 1},
                                   {2, 2, 2},
                                   {3, 2, 1},
                                   {3, 2, 2}}) {
                auto [p, e] = factor_prime_power(q);
                auto Fq = ExtensionField::create(p, e, 1);
                WeightSystem ws(q, r);
                auto R = verify_valence(omitted_generator_family(ws, Fq, j));
                t.check(R.verdict, "single-generator family verdict");
                t.check(R.rhs == make_frac(BigInt(q - 1), big_pow(BigInt(q), j) - 1),
                        "single-generator family rhs");
            }
            auto F2 = ExtensionField::create(2, 1, 1);
            WeightSystem ws(2, 2);
            IsobaricForm h(ws, GenSet::gh, F2, {{{0, 1}, F2->one()}});
            t.check(verify_valence({h}).verdict, "h family verdict");
        });

        suite("eisenstein-identities", [&] {
            for (auto [q, r, n] : {std::tuple<uint64_t, uint32_t, uint32_t>{2, 2, 2},
                                   {2, 2, 3},
                                   {3, 2, 2},
                                   {2, 3, 3}})
                t.check(count_identity_check(q, r, n).verdict, "counting identity");
            t.check(zero_locus_check(2, 2, 2, 4).verdict, "zero locus");

            auto rng = detail::seeded_rng({0x73656c05ULL, seed});
            auto F = ExtensionField::create(2, 1, 3);
            for (int i = 0; i < 10; ++i) {
                std::vector<FieldElement> basis;
                GroundSolver solver(F);
                while (basis.size() < 2) {
                    FieldElement v = F->random_element(rng);
                    if (solver.add(v)) basis.push_back(v);
                }
                FLattice L(F, basis);
                FieldElement c = F->zero();
                while (c.is_zero()) c = F->random_element(rng);
                std::vector<FieldElement> scaled{c * basis[0], c * basis[1]};
                t.check(eisenstein_value(FLattice(F, scaled), 1) * F->pow(c, BigInt(1)) ==
                            eisenstein_value(L, 1),
                        "value homogeneity");
            }
        });

        rep.verdict = true;
        for (const auto& s : rep.suites)
            if (!s.failures.empty()) rep.verdict = false;
        return rep;
    }
}

#endif
