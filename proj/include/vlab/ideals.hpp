#ifndef VLAB_IDEALS_HPP
#define VLAB_IDEALS_HPP

/**
 * @file ideals.hpp
 * Groebner bases over tower fields (Buchberger, normal pair selection, first
 * criterion), staircase dimension of zero-dimensional quotients, and local
 * intersection multiplicities at the origin via maximal-ideal-power
 * truncation with a stabilization certificate.
 */

#include <functional>
#include <set>

#include "multipoly.hpp"

namespace vlab
{
    namespace gb
    {
        // term lists kept strictly descending under the active order
        using Terms = std::vector<std::pair<Exps, FieldElement>>;

        inline Terms from_multipoly(const MultiPoly& P, MonOrder ord, uint32_t trunc)
        {
            Terms t;
            for (const auto& [e, c] : P.terms()) {
                if (trunc && exps_degree(e) >= trunc) continue;
                t.emplace_back(e, c);
            }
            std::sort(t.begin(), t.end(), [ord](const auto& a, const auto& b) {
                return mon_cmp(a.first, b.first, ord) > 0;
            });
            return t;
        }

        inline MultiPoly to_multipoly(const FieldPtr& F, uint32_t n, const Terms& t)
        {
            MultiPoly P(F, n);
            for (const auto& [e, c] : t) P.add_term(e, c);
            return P;
        }

        /** a - s * x^shift * b, merged in descending order; terms of degree >= trunc dropped */
        inline Terms sub_scaled(const Terms& a, size_t a_from, const FieldElement& s,
                                const Exps& shift, const Terms& b, MonOrder ord,
                                const FieldPtr& F, uint32_t trunc)
        {
            Terms r;
            r.reserve(a.size() - a_from + b.size());
            size_t i = a_from, j = 0;
            Exps eb(shift.size());
            auto shifted = [&](size_t jj) -> const Exps& {
                const Exps& e = b[jj].first;
                for (size_t k = 0; k < eb.size(); ++k) eb[k] = e[k] + shift[k];
                return eb;
            };
            while (i < a.size() && j < b.size()) {
                const Exps& bj = shifted(j);
                int c = mon_cmp(a[i].first, bj, ord);
                if (c > 0) {
                    r.push_back(a[i++]);
                } else if (c < 0) {
                    if (!trunc || exps_degree(bj) < trunc)
                        r.emplace_back(bj, F->neg(s * b[j].second));
                    ++j;
                } else {
                    FieldElement v = a[i].second - s * b[j].second;
                    if (!v.is_zero()) r.emplace_back(a[i].first, v);
                    ++i;
                    ++j;
                }
            }
            for (; i < a.size(); ++i) r.push_back(a[i]);
            for (; j < b.size(); ++j) {
                const Exps& bj = shifted(j);
                if (!trunc || exps_degree(bj) < trunc)
                    r.emplace_back(bj, F->neg(s * b[j].second));
            }
            return r;
        }

        /**
         * Full normal form of f against basis: every surviving term is
         * divisible by no basis leading monomial.
         */
        inline Terms normal_form(Terms f, const std::vector<Terms>& basis, MonOrder ord,
                                 const FieldPtr& F, uint32_t trunc)
        {
            Terms rem;
            size_t head = 0;
            while (head < f.size()) {
                const Exps& lm = f[head].first;
                const Terms* hit = nullptr;
                for (const Terms& g : basis)
                    if (!g.empty() && mon_divides(g[0].first, lm)) {
                        hit = &g;
                        break;
                    }
                if (!hit) {
                    rem.push_back(f[head]);
                    ++head;
                    continue;
                }
                const Terms& g = *hit;
                FieldElement s = f[head].second * F->inv(g[0].second);
                Exps shift(lm.size());
                for (size_t k = 0; k < shift.size(); ++k) shift[k] = lm[k] - g[0].first[k];
                // cancellation of the head is exact; everything new is smaller
                Terms next = sub_scaled(f, head, s, shift, g, ord, F, trunc);
                f = std::move(next);
                head = 0;
                if (!f.empty() && !rem.empty() && mon_cmp(rem.back().first, f[0].first, ord) <= 0)
                    throw check_failed("normal_form: reduction failed to decrease");
            }
            return rem;
        }

        inline Terms s_polynomial(const Terms& f, const Terms& g, MonOrder ord, const FieldPtr& F,
                                  uint32_t trunc)
        {
            const Exps& lf = f[0].first;
            const Exps& lg = g[0].first;
            Exps lcm(lf.size()), sf(lf.size()), sg(lf.size());
            for (size_t k = 0; k < lf.size(); ++k) {
                lcm[k] = std::max(lf[k], lg[k]);
                sf[k] = lcm[k] - lf[k];
                sg[k] = lcm[k] - lg[k];
            }
            // (x^sf f)/lc(f) - (x^sg g)/lc(g): build first half, subtract second
            Terms left;
            left.reserve(f.size());
            FieldElement ci = F->inv(f[0].second);
            for (const auto& [e, c] : f) {
                Exps ee(e.size());
                for (size_t k = 0; k < e.size(); ++k) ee[k] = e[k] + sf[k];
                if (trunc && exps_degree(ee) >= trunc) continue;
                left.emplace_back(ee, c * ci);
            }
            return sub_scaled(left, 0, F->inv(g[0].second), sg, g, ord, F, trunc);
        }
    }

    struct GroebnerBasis
    {
        MonOrder ord = MonOrder::grevlex;
        FieldPtr field;
        uint32_t nvars = 0;
        std::vector<MultiPoly> polys;   // reduced: monic, self-reduced, lm-descending

        bool is_unit_ideal() const
        {
            return polys.size() == 1 && polys[0].term_count() == 1 &&
                   exps_degree(polys[0].terms().begin()->first) == 0;
        }
        bool is_zero_ideal() const { return polys.empty(); }

        std::vector<Exps> leading_monomials() const
        {
            std::vector<Exps> L;
            for (const auto& P : polys) {
                Exps best;
                for (const auto& [e, c] : P.terms())
                    if (best.empty() || mon_cmp(e, best, ord) > 0) best = e;
                L.push_back(best);
            }
            return L;
        }
    };

    /**
     * Reduced Groebner basis by Buchberger's algorithm.  Pairs are handled in
     * (lcm degree, lcm, index) order; coprime leading monomials are skipped.
     * If trunc > 0, all terms of degree >= trunc are discarded throughout:
     * this is only sound when the ideal is known to contain every monomial of
     * degree trunc (the truncated-multiplicity path ensures it).
     */
    inline GroebnerBasis groebner(const std::vector<MultiPoly>& gens, MonOrder ord,
                                  uint32_t trunc = 0)
    {
        if (gens.empty()) throw invalid_input("groebner: no generators");
        const FieldPtr& F = gens[0].field();
        uint32_t n = gens[0].nvars();
        for (const auto& g : gens)
            if (!g.field()->same_field(*F) || g.nvars() != n)
                throw invalid_input("groebner: generators from mixed rings");

        std::vector<gb::Terms> basis;
        for (const auto& g : gens) {
            gb::Terms t = gb::from_multipoly(g, ord, trunc);
            if (!t.empty()) basis.push_back(std::move(t));
        }
        if (basis.empty()) {
            // zero ideal (possibly after truncation)
            GroebnerBasis R;
            R.ord = ord;
            R.field = F;
            R.nvars = n;
            return R;
        }

        struct Pair
        {
            uint64_t deg;
            Exps lcm;
            size_t i, j;
            bool operator<(const Pair& o) const
            {
                if (deg != o.deg) return deg < o.deg;
                if (lcm != o.lcm) return lcm < o.lcm;
                if (i != o.i) return i < o.i;
                return j < o.j;
            }
        };
        std::set<Pair> queue;
        auto push_pair = [&](size_t i, size_t j) {
            const Exps& a = basis[i][0].first;
            const Exps& b = basis[j][0].first;
            bool coprime = true;
            Exps lcm(a.size());
            for (size_t k = 0; k < a.size(); ++k) {
                lcm[k] = std::max(a[k], b[k]);
                if (a[k] && b[k]) coprime = false;
            }
            if (coprime) return;   // first criterion: S-pair reduces to zero
            queue.insert(Pair{exps_degree(lcm), lcm, i, j});
        };
        for (size_t i = 0; i < basis.size(); ++i)
            for (size_t j = i + 1; j < basis.size(); ++j) push_pair(i, j);

        size_t guard = 0;
        while (!queue.empty()) {
            if (++guard > 200000) throw cap_exceeded("groebner: pair budget exhausted");
            Pair pr = *queue.begin();
            queue.erase(queue.begin());
            gb::Terms S = gb::s_polynomial(basis[pr.i], basis[pr.j], ord, F, trunc);
            gb::Terms r = gb::normal_form(std::move(S), basis, ord, F, trunc);
            if (r.empty()) continue;
            size_t idx = basis.size();
            basis.push_back(std::move(r));
            for (size_t i = 0; i < idx; ++i) push_pair(i, idx);
        }

        // minimalize: drop members whose lm is divisible by another member's lm
        std::vector<bool> keep(basis.size(), true);
        for (size_t i = 0; i < basis.size(); ++i)
            for (size_t j = 0; j < basis.size() && keep[i]; ++j) {
                if (i == j || !keep[j]) continue;
                if (mon_divides(basis[j][0].first, basis[i][0].first) &&
                    (basis[j][0].first != basis[i][0].first || j < i))
                    keep[i] = false;
            }
        std::vector<gb::Terms> minimal;
        for (size_t i = 0; i < basis.size(); ++i)
            if (keep[i]) minimal.push_back(std::move(basis[i]));

        // tail-reduce each member against the others, then make monic
        std::vector<gb::Terms> reduced;
        for (size_t i = 0; i < minimal.size(); ++i) {
            std::vector<gb::Terms> others;
            for (size_t j = 0; j < minimal.size(); ++j)
                if (j != i) others.push_back(minimal[j]);
            gb::Terms r = others.empty()
                              ? minimal[i]
                              : gb::normal_form(minimal[i], others, ord, F, trunc);
            if (r.empty()) throw check_failed("groebner: minimal member reduced to zero");
            FieldElement ci = F->inv(r[0].second);
            for (auto& [e, c] : r) c = c * ci;
            reduced.push_back(std::move(r));
        }
        std::sort(reduced.begin(), reduced.end(), [ord](const gb::Terms& a, const gb::Terms& b) {
            return mon_cmp(a[0].first, b[0].first, ord) > 0;
        });

        GroebnerBasis R;
        R.ord = ord;
        R.field = F;
        R.nvars = n;
        for (const auto& t : reduced) R.polys.push_back(gb::to_multipoly(F, n, t));
        return R;
    }

    /** normal form of an arbitrary polynomial against a reduced basis */
    inline MultiPoly reduce_by(const MultiPoly& f, const GroebnerBasis& G)
    {
        if (G.polys.empty()) return f;
        std::vector<gb::Terms> basis;
        for (const auto& g : G.polys) basis.push_back(gb::from_multipoly(g, G.ord, 0));
        gb::Terms r = gb::normal_form(gb::from_multipoly(f, G.ord, 0), basis, G.ord, G.field, 0);
        return gb::to_multipoly(G.field, G.nvars, r);
    }

    /**
     * Dimension of F[x]/I from a reduced basis: finite iff each variable has a
     * pure power among the leading monomials; then the staircase below the
     * pure-power box is counted directly.
     */
    inline std::optional<uint64_t> quotient_dimension(const GroebnerBasis& G)
    {
        if (G.is_unit_ideal()) return 0;
        if (G.nvars == 0) return 1;   // F itself (no generators can be nonzero constants here)
        auto L = G.leading_monomials();
        std::vector<uint32_t> box(G.nvars, 0);
        for (uint32_t v = 0; v < G.nvars; ++v) {
            bool found = false;
            for (const Exps& e : L) {
                bool pure = e[v] > 0;
                for (uint32_t u = 0; u < G.nvars && pure; ++u)
                    if (u != v && e[u] > 0) pure = false;
                if (pure) {
                    box[v] = found ? std::min(box[v], e[v]) : e[v];
                    found = true;
                }
            }
            if (!found) return std::nullopt;   // infinite-dimensional quotient
        }
        uint64_t cells = 1;
        for (uint32_t v = 0; v < G.nvars; ++v) {
            cells *= box[v];
            if (cells > 20000000) throw cap_exceeded("quotient_dimension: staircase box too large");
        }
        uint64_t count = 0;
        Exps mono(G.nvars, 0);
        std::function<void(uint32_t)> scan = [&](uint32_t v) {
            if (v == G.nvars) {
                for (const Exps& e : L)
                    if (mon_divides(e, mono)) return;
                ++count;
                return;
            }
            for (uint32_t t = 0; t < box[v]; ++t) {
                mono[v] = t;
                scan(v + 1);
            }
            mono[v] = 0;
        };
        scan(0);
        return count;
    }

    /** all monomials of total degree exactly N in nvars variables */
    inline std::vector<MultiPoly> degree_monomials(const FieldPtr& F, uint32_t nvars, uint32_t N)
    {
        std::vector<MultiPoly> out;
        Exps e(nvars, 0);
        std::function<void(uint32_t, uint32_t)> rec = [&](uint32_t v, uint32_t left) {
            if (v + 1 == nvars) {
                e[v] = left;
                out.push_back(MultiPoly::monomial(F, e, F->one()));
                e[v] = 0;
                return;
            }
            for (uint32_t t = 0; t <= left; ++t) {
                e[v] = t;
                rec(v + 1, left - t);
            }
            e[v] = 0;
        };
        if (nvars == 0) return out;
        rec(0, N);
        return out;
    }

    struct LocalMultiplicity
    {
        uint64_t nu = 0;                  // dim of the local quotient
        std::vector<uint64_t> profile;    // dim at truncation level N = 1, 2, ...
        uint32_t stabilized_at = 0;       // first N with profile[N-1] == profile[N-2]
    };

    /**
     * Intersection multiplicity at the origin of affine generators: the
     * stabilized dimension of F[u]/(I + m^N).  The sequence is nondecreasing
     * and one equal consecutive pair certifies exactness.  Generators not
     * vanishing at the origin give multiplicity 0; if the sequence is still
     * growing at N = 4*bezout_bound + 4 (or the explicit override nmax_cap)
     * the origin is not an isolated zero.
     */
    inline LocalMultiplicity local_multiplicity(const std::vector<MultiPoly>& gens,
                                                uint64_t bezout_bound, uint32_t nmax_cap = 0)
    {
        if (gens.empty()) throw invalid_input("local_multiplicity: no generators");
        const FieldPtr& F = gens[0].field();
        uint32_t n = gens[0].nvars();
        std::vector<FieldElement> origin(n, F->zero());
        for (const auto& g : gens)
            if (!g.evaluate(origin).is_zero()) return LocalMultiplicity{0, {}, 0};

        if (n == 0) throw invalid_input("local_multiplicity: no variables");
        uint32_t nmax = (uint32_t)std::min<uint64_t>(4 * bezout_bound + 4, 100000);
        if (nmax_cap) nmax = std::min(nmax, nmax_cap);
        LocalMultiplicity R;
        for (uint32_t N = 1; N <= nmax; ++N) {
            std::vector<MultiPoly> full = gens;
            for (auto& M : degree_monomials(F, n, N)) full.push_back(std::move(M));
            // truncate above N, not at N: the degree-N monomial generators must
            // survive, and every dropped term is divisible by one of them
            GroebnerBasis G = groebner(full, MonOrder::grevlex, N + 1);
            // the truncated ideal contains m^N, so the quotient is always finite
            auto d = quotient_dimension(G);
            if (!d) throw check_failed("local_multiplicity: truncated quotient not finite");
            R.profile.push_back(*d);
            if (N >= 2 && R.profile[N - 1] == R.profile[N - 2]) {
                R.nu = *d;
                R.stabilized_at = N;
                return R;
            }
        }
        throw cap_exceeded("local_multiplicity: no stabilization below cap; zero is not isolated");
    }

    /**
     * For a lex basis (x_1 > ... > x_k): the unique monic generator of the
     * elimination ideal in F[x_k] alone, if that ideal is nonzero.
     */
    inline std::optional<UPoly> eliminant_last_var(const GroebnerBasis& G)
    {
        if (G.ord != MonOrder::lex) throw invalid_input("eliminant needs a lex basis");
        std::optional<UPoly> best;
        for (const auto& P : G.polys) {
            bool uni = true;
            for (const auto& [e, c] : P.terms())
                for (uint32_t v = 0; v + 1 < G.nvars && uni; ++v)
                    if (e[v]) uni = false;
            if (!uni) continue;
            std::vector<FieldElement> cs;
            for (const auto& [e, c] : P.terms()) {
                uint32_t d = e[G.nvars - 1];
                while (cs.size() <= d) cs.push_back(G.field->zero());
                cs[d] = c;
            }
            UPoly u(G.field, cs);
            if (!best || u.deg() < best->deg()) best = u;
        }
        return best;
    }
}

#endif
