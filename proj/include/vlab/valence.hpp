#ifndef VLAB_VALENCE_HPP
#define VLAB_VALENCE_HPP

/**
 * @file valence.hpp
 * The weighted valence identity for families of r-1 isobaric forms: zero
 * records are grouped into conjugation classes of scaling-group orbits, each
 * class is certified complete against the stabilizer formula, and the mass
 * identity  sum(interior) + sum(boundary) = prod(weights) / #H  is checked
 * exactly in rational arithmetic.  Also: scaling-group orders via integer
 * lattice indices, and a brute-force stabilizer counter used as an oracle.
 */

#include "zeros.hpp"

namespace vlab
{
    /** index of the lattice spanned by the rows in Z^r; 0 when not full rank */
    inline BigInt lattice_index(std::vector<std::vector<BigInt>> rows, uint32_t r)
    {
        for (const auto& v : rows)
            if (v.size() != r) throw invalid_input("lattice_index: ragged rows");
        size_t top = 0;
        for (uint32_t col = 0; col < r && top < rows.size(); ++col) {
            while (true) {
                size_t best = rows.size();
                for (size_t i = top; i < rows.size(); ++i)
                    if (rows[i][col] != 0 &&
                        (best == rows.size() ||
                         abs(rows[i][col]) < abs(rows[best][col])))
                        best = i;
                if (best == rows.size()) return 0;   // rank deficiency in this column
                std::swap(rows[top], rows[best]);
                bool clean = true;
                for (size_t i = top + 1; i < rows.size(); ++i) {
                    if (rows[i][col] == 0) continue;
                    BigInt f = rows[i][col] / rows[top][col];
                    for (uint32_t c2 = 0; c2 < r; ++c2) rows[i][c2] -= f * rows[top][c2];
                    if (rows[i][col] != 0) clean = false;
                }
                if (clean) break;
            }
            ++top;
        }
        if (top < r) return 0;
        BigInt det = 1;
        for (uint32_t i = 0; i < r; ++i) det *= rows[i][i];
        return abs(det);
    }

    struct GroupOrders
    {
        BigInt order_H;           // via lattice index
        BigInt order_H_closed;    // prod of w_2..w_r
        BigInt order_Hprime;
        BigInt index;             // [H : H']
        uint64_t expected_index;  // gcd(q-1, r)
        bool match = false;
    };

    /**
     * H is (mu_{w_1} x ... x mu_{w_r}) modulo the diagonal mu_{q-1}; H' is
     * the subgroup generated by the first r-1 factors and the (q-1)-th
     * powers of the last.  Both orders come from Z^r lattice indices, with
     * the diagonal contributing the row (w_1/(q-1), ..., w_r/(q-1)).
     */
    inline GroupOrders group_orders(const WeightSystem& ws)
    {
        uint32_t r = ws.r;
        GroupOrders G;
        std::vector<BigInt> diag;
        for (uint32_t i = 1; i <= r; ++i) diag.push_back(BigInt(ws.weight(i) / (ws.q - 1)));

        std::vector<std::vector<BigInt>> H;
        for (uint32_t i = 0; i < r; ++i) {
            std::vector<BigInt> row(r, 0);
            row[i] = BigInt(ws.weight(i + 1));
            H.push_back(std::move(row));
        }
        H.push_back(diag);
        G.order_H = lattice_index(std::move(H), r);

        G.order_H_closed = 1;
        for (uint32_t i = 2; i <= r; ++i) G.order_H_closed *= BigInt(ws.weight(i));

        std::vector<std::vector<BigInt>> Q;
        for (uint32_t i = 0; i + 1 < r; ++i) {
            std::vector<BigInt> row(r, 0);
            row[i] = 1;
            Q.push_back(std::move(row));
        }
        std::vector<BigInt> last(r, 0);
        last[r - 1] = BigInt(ws.q - 1);
        Q.push_back(std::move(last));
        std::vector<BigInt> d2;
        for (uint32_t i = 1; i <= r; ++i) d2.push_back(BigInt(ws.weight(i) / (ws.q - 1)));
        Q.push_back(std::move(d2));
        G.index = lattice_index(std::move(Q), r);

        G.expected_index = std::gcd(ws.q - 1, (uint64_t)r);
        if (G.index != 0 && G.order_H % G.index == 0)
            G.order_Hprime = G.order_H / G.index;
        G.match = G.order_H == G.order_H_closed && G.index == BigInt(G.expected_index) &&
                  G.order_Hprime * G.index == G.order_H;
        return G;
    }

    /** #H_x for a point with the given 1-based support */
    inline BigInt stabilizer_order(const WeightSystem& ws, const std::vector<uint32_t>& S)
    {
        if (S.empty()) throw invalid_input("stabilizer_order: empty support");
        uint64_t s = 0;
        for (uint32_t i : S) s = std::gcd(s, (uint64_t)i);
        BigInt n = BigInt(ws.weight((uint32_t)s)) / BigInt(ws.weight(1));
        std::vector<bool> in(ws.r + 1, false);
        for (uint32_t i : S) {
            if (i < 1 || i > ws.r) throw invalid_input("stabilizer_order: support out of range");
            in[i] = true;
        }
        for (uint32_t i = 1; i <= ws.r; ++i)
            if (!in[i]) n *= BigInt(ws.weight(i));
        return n;
    }

    /** deterministic multiplicative generator of F^* (small fields only) */
    inline FieldElement primitive_element(const FieldPtr& F, uint64_t seed = 0)
    {
        if (!F->size_fits_u64() || F->size_u64() > (uint64_t(1) << 40))
            throw cap_exceeded("primitive_element: field too large");
        uint64_t n = F->size_u64() - 1;
        std::vector<uint64_t> primes;
        uint64_t t = n;
        for (uint64_t d = 2; d * d <= t; ++d)
            if (t % d == 0) {
                primes.push_back(d);
                while (t % d == 0) t /= d;
            }
        if (t > 1) primes.push_back(t);
        auto rng = detail::seeded_rng({0x7072696dULL, F->p(), F->e(), F->m(), seed});
        for (int tries = 0; tries < 4000; ++tries) {
            FieldElement x = F->random_element(rng);
            if (x.is_zero()) continue;
            bool prim = true;
            for (uint64_t pr : primes)
                if (F->pow(x, BigInt(n / pr)) == F->one()) {
                    prim = false;
                    break;
                }
            if (prim) return x;
        }
        throw cap_exceeded("primitive_element: search budget exhausted");
    }

    /**
     * Brute-force #H_x: enumerate every tuple in mu_{w_1} x ... x mu_{w_r}
     * as actual field elements of F_{q^lcm(1..r)}, count those fixing the 0/1
     * test point with the given support projectively, divide by the diagonal.
     */
    inline BigInt stabilizer_order_brute(const WeightSystem& ws, const std::vector<uint32_t>& S,
                                         uint64_t tuple_cap = 2000000)
    {
        auto [p, e] = factor_prime_power(ws.q);
        uint32_t M = 1;
        for (uint32_t i = 2; i <= ws.r; ++i) M = (uint32_t)std::lcm(M, i);
        auto F = ExtensionField::create(p, e, M);
        uint64_t tuples = 1;
        for (uint32_t i = 1; i <= ws.r; ++i) {
            tuples *= ws.weight(i);
            if (tuples > tuple_cap) throw cap_exceeded("stabilizer_order_brute: too many tuples");
        }
        if (!F->size_fits_u64()) throw cap_exceeded("stabilizer_order_brute: field too large");
        uint64_t Q = F->size_u64();
        FieldElement xi = primitive_element(F);

        std::vector<std::vector<FieldElement>> table(ws.r);
        for (uint32_t i = 0; i < ws.r; ++i) {
            FieldElement g = F->pow(xi, BigInt((Q - 1) / ws.weight(i + 1)));
            FieldElement v = F->one();
            for (uint64_t a = 0; a < ws.weight(i + 1); ++a) {
                table[i].push_back(v);
                v = v * g;
            }
        }
        std::vector<FieldElement> x;
        std::vector<bool> in(ws.r + 1, false);
        for (uint32_t i : S) in[i] = true;
        for (uint32_t i = 1; i <= ws.r; ++i) x.push_back(in[i] ? F->one() : F->zero());

        std::vector<uint64_t> a(ws.r, 0);
        uint64_t hits = 0;
        while (true) {
            // eta fixes x projectively iff eps_i x_i = lambda x_i for one lambda
            FieldElement lambda = F->zero();
            bool ok = true;
            for (uint32_t i = 0; i < ws.r && ok; ++i) {
                if (x[i].is_zero()) continue;
                FieldElement v = table[i][a[i]] * x[i];
                if (lambda.is_zero()) lambda = v * F->inv(x[i]);
                else if (!(v == lambda * x[i])) ok = false;
            }
            if (ok) ++hits;
            uint32_t c = 0;
            while (c < ws.r) {
                if (++a[c] < ws.weight(c + 1)) break;
                a[c] = 0;
                ++c;
            }
            if (c == ws.r) break;
        }
        if (hits % (ws.q - 1) != 0)
            throw check_failed("stabilizer_order_brute: count not divisible by the diagonal");
        return BigInt(hits / (ws.q - 1));
    }

    // ---------------------------------------------------------------------------
    //  the valence identity
    // ---------------------------------------------------------------------------
    struct OrbitEntry
    {
        PointKey z_key;                   // canonical key of the image point
        std::vector<uint32_t> support;    // common 1-based support of the class
        uint32_t s = 1;                   // gcd of the support
        bool boundary = false;            // last index missing from the support
        BigInt stab_order;                // #H_x
        uint64_t orbit_count = 1;         // conjugate orbits in this class (= image degree)
        uint64_t record_count = 0;        // zero records absorbed by the class
        uint64_t nu_x = 0;                // common multiplicity of those records
        Rational nu_z;                    // nu_x / #H_x
        Rational nu_omega;                // nu_z * w_s / w_1 (integral on the interior)
        size_t rep_index = 0;             // representative record in the locus
    };

    struct ValenceReport
    {
        WeightSystem ws;
        std::vector<uint64_t> weights;    // weights of the family members
        ZeroLocus locus;
        std::vector<OrbitEntry> orbits;
        Rational lhs_interior;
        Rational lhs_boundary;
        Rational rhs;
        bool verdict = false;
    };

    /** the orbit-grouping map: i-th coordinate to the w_i-th power */
    inline std::vector<FieldElement> pi_image(const WeightSystem& ws,
                                              const std::vector<FieldElement>& x)
    {
        const FieldPtr& F = x.at(0).field();
        std::vector<FieldElement> z;
        for (uint32_t i = 0; i < ws.r; ++i) z.push_back(F->pow(x[i], BigInt(ws.weight(i + 1))));
        return z;
    }

    inline ValenceReport verify_valence(const std::vector<IsobaricForm>& family,
                                        uint64_t degree_cap = 64, uint32_t nmax_cap = 0)
    {
        if (family.empty()) throw invalid_input("empty family");
        const WeightSystem& ws = family[0].weights();
        uint32_t r = ws.r;
        if (family.size() != (size_t)r - 1)
            throw invalid_input("family must have exactly r-1 members");
        for (const auto& f : family) {
            if (f.weights().q != ws.q || f.weights().r != r)
                throw invalid_input("family members disagree on the weight system");
            if (!f.field()->same_field(*family[0].field()))
                throw invalid_input("family members from different coefficient fields");
        }

        ValenceReport rep;
        rep.ws = ws;
        std::vector<MultiPoly> forms;
        for (const auto& f : family) {
            forms.push_back(f.pullback());
            rep.weights.push_back(f.weight());
        }
        auto ind = independence_check(forms);
        if (!ind.independent)
            throw invalid_input("family is not independent (chart " +
                                std::to_string(ind.failing_chart) + " is not finite)");
        rep.locus = locate_zeros(forms, degree_cap, nmax_cap);

        std::map<PointKey, std::vector<size_t>> buckets;
        for (size_t i = 0; i < rep.locus.records.size(); ++i)
            buckets[canonical_point_key(pi_image(ws, rep.locus.records[i].point))].push_back(i);

        BigInt order_H = 1;
        for (uint32_t i = 2; i <= r; ++i) order_H *= BigInt(ws.weight(i));

        for (auto& [zkey, members] : buckets) {
            const ZeroRecord& R0 = rep.locus.records[members[0]];
            OrbitEntry E;
            E.z_key = zkey;
            E.rep_index = members[0];
            E.support = support_of(R0.point);
            uint64_t s = 0;
            for (uint32_t i : E.support) s = std::gcd(s, (uint64_t)i);
            E.s = (uint32_t)s;
            E.boundary = std::find(E.support.begin(), E.support.end(), r) == E.support.end();
            E.stab_order = stabilizer_order(ws, E.support);
            E.nu_x = R0.nu_x;
            E.record_count = members.size();
            E.orbit_count = point_min_degree(pi_image(ws, R0.point));

            for (size_t i : members) {
                const ZeroRecord& R = rep.locus.records[i];
                if (support_of(R.point) != E.support)
                    throw check_failed("orbit class mixes supports");
                if (R.nu_x != E.nu_x)
                    throw check_failed("orbit class mixes multiplicities");
            }
            // completeness: the class must hold one full scaling orbit per
            // conjugate of the image point
            BigInt expect = BigInt(E.orbit_count) * order_H;
            if (expect % E.stab_order != 0)
                throw check_failed("stabilizer order does not divide the orbit mass");
            if (BigInt(E.record_count) != expect / E.stab_order)
                throw check_failed("orbit class incomplete: found " +
                                   std::to_string(E.record_count) + " records");

            E.nu_z = make_frac(BigInt(E.nu_x), E.stab_order);
            E.nu_omega = E.nu_z * make_frac(BigInt(ws.weight(E.s)), BigInt(ws.weight(1)));
            if (!E.boundary && boost::multiprecision::denominator(E.nu_omega) != 1)
                throw check_failed("interior class with non-integral normalized multiplicity");

            Rational mass = Rational(BigInt(E.orbit_count)) * E.nu_z;
            if (E.boundary) rep.lhs_boundary += mass;
            else rep.lhs_interior += mass;
            rep.orbits.push_back(std::move(E));
        }

        BigInt num = 1;
        for (uint64_t k : rep.weights) num *= BigInt(k);
        rep.rhs = make_frac(num, order_H);
        rep.verdict = (rep.lhs_interior + rep.lhs_boundary) == rep.rhs;
        return rep;
    }
}

#endif
