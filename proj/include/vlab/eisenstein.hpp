#ifndef VLAB_EISENSTEIN_HPP
#define VLAB_EISENSTEIN_HPP

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "vlab/pointkey.hpp"

namespace vlab
{
    /**
     * A finite F_q-lattice: the span of an F_q-independent basis inside an
     * explicit extension of F_q.  The ambient field's ground field plays the
     * role of F_q; the basis length r is the rank.
     *
     * Construction verifies independence twice: by Gaussian rank over the
     * ground field and by scanning all q^r combinations for an unexpected
     * zero.  The scan bounds the lattice size to 4096 elements, which keeps
     * every value-sum below exact, desk-scale cost.
     */
    class FLattice
    {
    public:
        FLattice(FieldPtr ambient, std::vector<FieldElement> basis)
            : F_(std::move(ambient)), basis_(std::move(basis))
        {
            if (basis_.empty()) throw invalid_input("FLattice: empty basis");
            for (const auto& b : basis_)
                if (!F_->same_field(*b.field()))
                    throw invalid_input("FLattice: basis element from a different field");
            uint32_t r = (uint32_t)basis_.size();
            BigInt sz = big_pow(BigInt(F_->ground_field()->size()), r);
            if (sz > 4096) throw cap_exceeded("FLattice: lattice larger than 4096 elements");
            GroundSolver solver(F_);
            for (const auto& b : basis_)
                if (!solver.add(b)) throw invalid_input("FLattice: basis is not F-independent");
            elements_ = combinations();
            for (size_t i = 1; i < elements_.size(); ++i)
                if (elements_[i].is_zero())
                    throw invalid_input("FLattice: basis is not F-independent");
        }

        const FieldPtr& field() const { return F_; }
        const std::vector<FieldElement>& basis() const { return basis_; }
        uint32_t rank() const { return (uint32_t)basis_.size(); }
        uint64_t ground_q() const { return F_->ground_field()->size_u64(); }

        /** all q^r lattice elements; index 0 is zero, in mixed-radix a-order */
        const std::vector<FieldElement>& elements() const { return elements_; }

        /**
         * coefficient tuples a in F_q^r aligned with elements(): entry t of
         * the result is the ground-field tuple whose combination is
         * elements()[t]
         */
        std::vector<std::vector<FieldElement>> coefficient_tuples() const
        {
            FieldPtr gf = F_->ground_field();
            uint64_t q = gf->size_u64();
            uint32_t r = rank();
            std::vector<std::vector<FieldElement>> out;
            std::vector<uint64_t> idx(r, 0);
            for (;;) {
                std::vector<FieldElement> a;
                for (uint32_t j = 0; j < r; ++j) a.push_back(gf->element_at(idx[j]));
                out.push_back(std::move(a));
                uint32_t j = 0;
                while (j < r && ++idx[j] == q) idx[j++] = 0;
                if (j == r) break;
            }
            return out;
        }

    private:
        std::vector<FieldElement> combinations() const
        {
            FieldPtr gf = F_->ground_field();
            uint64_t q = gf->size_u64();
            uint32_t r = rank();
            std::vector<FieldElement> lifted;
            for (uint64_t i = 0; i < q; ++i)
                lifted.push_back(F_->lift_ground(gf->element_at(i)));
            std::vector<FieldElement> out;
            std::vector<uint64_t> idx(r, 0);
            for (;;) {
                FieldElement s = F_->zero();
                for (uint32_t j = 0; j < r; ++j) s = s + lifted[idx[j]] * basis_[j];
                out.push_back(s);
                uint32_t j = 0;
                while (j < r && ++idx[j] == q) idx[j++] = 0;
                if (j == r) break;
            }
            return out;
        }

        FieldPtr F_;
        std::vector<FieldElement> basis_;
        std::vector<FieldElement> elements_;
    };

    /**
     * Reduced special value: the sum over nonzero lattice elements s of
     * s^(1-q^i), computed as the inverse of s^(q^i - 1).
     */
    inline FieldElement eisenstein_value(const FLattice& L, uint32_t i)
    {
        if (i == 0) throw invalid_input("eisenstein_value: index must be positive");
        const FieldPtr& F = L.field();
        BigInt ex = big_pow(BigInt(L.ground_q()), i) - 1;
        FieldElement acc = F->zero();
        const auto& elems = L.elements();
        for (size_t t = 1; t < elems.size(); ++t) {
            if (elems[t].is_zero()) throw check_failed("eisenstein_value: zero lattice element");
            acc = acc + F->inv(F->pow(elems[t], ex));
        }
        return acc;
    }

    /**
     * Determinant of the matrix of formal partials d E_{q^i-1} / d omega_j,
     * rows i in S (sorted), columns j = 1..r-1; the last basis slot is the
     * dehomogenized coordinate and is not differentiated.  Since 1 - q^i is
     * congruent to 1 mod p, the partial in slot j is the sum over nonzero
     * combinations of a_j * s^(-q^i).
     */
    inline FieldElement eisenstein_jacobian_det(const FLattice& L, std::vector<uint32_t> S)
    {
        uint32_t r = L.rank();
        std::sort(S.begin(), S.end());
        if (S.size() + 1 != r || std::adjacent_find(S.begin(), S.end()) != S.end())
            throw invalid_input("eisenstein_jacobian_det: need r-1 distinct indices");
        for (uint32_t i : S)
            if (i == 0) throw invalid_input("eisenstein_jacobian_det: indices must be positive");

        const FieldPtr& F = L.field();
        const auto& elems = L.elements();
        auto tuples = L.coefficient_tuples();
        uint32_t n = r - 1;
        std::vector<std::vector<FieldElement>> M(n, std::vector<FieldElement>(n, F->zero()));
        for (uint32_t row = 0; row < n; ++row) {
            BigInt ex = big_pow(BigInt(L.ground_q()), S[row]);
            for (size_t t = 1; t < elems.size(); ++t) {
                FieldElement inv_pow = F->inv(F->pow(elems[t], ex));
                for (uint32_t j = 0; j < n; ++j) {
                    if (tuples[t][j].is_zero()) continue;
                    M[row][j] = M[row][j] + F->lift_ground(tuples[t][j]) * inv_pow;
                }
            }
        }

        // Gaussian elimination
        FieldElement det = F->one();
        for (uint32_t c = 0; c < n; ++c) {
            uint32_t piv = c;
            while (piv < n && M[piv][c].is_zero()) ++piv;
            if (piv == n) return F->zero();
            if (piv != c) {
                std::swap(M[piv], M[c]);
                det = F->neg(det);
            }
            det = det * M[c][c];
            FieldElement inv = F->inv(M[c][c]);
            for (uint32_t rr = c + 1; rr < n; ++rr) {
                if (M[rr][c].is_zero()) continue;
                FieldElement f = M[rr][c] * inv;
                for (uint32_t cc = c; cc < n; ++cc) M[rr][cc] = M[rr][cc] - f * M[c][cc];
            }
        }
        return det;
    }

    /**
     * An additive polynomial: nonzero coefficients only at exponents q^i,
     * stored as i -> alpha_i.
     */
    struct AdditivePolynomial
    {
        FieldPtr field;
        std::map<uint32_t, FieldElement> alpha;

        FieldElement evaluate(const FieldElement& z) const
        {
            FieldElement acc = field->zero();
            uint64_t q = field->ground_field()->size_u64();
            for (const auto& [i, a] : alpha) acc = acc + a * field->pow(z, big_pow(BigInt(q), i));
            return acc;
        }
    };

    /**
     * The lattice exponential e(z) = z * prod over nonzero lambda of
     * (1 - z/lambda), expanded and checked to be additive: coefficients may
     * appear only at exponents q^0, ..., q^r.
     */
    inline AdditivePolynomial lattice_exponential(const FLattice& L)
    {
        const FieldPtr& F = L.field();
        UPoly e = UPoly::x(F);
        const auto& elems = L.elements();
        for (size_t t = 1; t < elems.size(); ++t) {
            FieldElement c = F->neg(F->inv(elems[t]));
            e = e * UPoly(F, {F->one(), c});   // 1 - z/lambda
        }
        AdditivePolynomial out{F, {}};
        uint64_t q = L.ground_q();
        for (int d = 0; d <= e.deg(); ++d) {
            if (e.coeffs()[(size_t)d].is_zero()) continue;
            // d must be a q-power; recover its exponent
            uint64_t pw = 1;
            uint32_t i = 0;
            while (pw < (uint64_t)d) pw *= q, ++i;
            if (pw != (uint64_t)d)
                throw check_failed("lattice_exponential: non-additive coefficient");
            out.alpha.emplace(i, e.coeffs()[(size_t)d]);
        }
        return out;
    }

    namespace edetail
    {
        /**
         * Visit every projective class of F-independent r-tuples over F,
         * normalized to first coordinate 1, in a fixed deterministic order.
         * The callback receives the coordinates and a solver holding exactly
         * their span.
         */
        template <class Fn>
        inline void visit_classes(const FieldPtr& F, uint32_t r, Fn&& fn)
        {
            std::vector<FieldElement> coords{F->one()};
            GroundSolver solver(F);
            solver.add(F->one());
            auto rec = [&](auto&& self) -> void {
                if (coords.size() == r) {
                    fn((const std::vector<FieldElement>&)coords, (const GroundSolver&)solver);
                    return;
                }
                uint64_t Q = F->size_u64();
                for (uint64_t idx = 0; idx < Q; ++idx) {
                    FieldElement v = F->element_at(idx);
                    if (solver.express(v).has_value()) continue;
                    GroundSolver saved = solver;
                    solver.add(v);
                    coords.push_back(v);
                    self(self);
                    coords.pop_back();
                    solver = std::move(saved);
                }
            };
            rec(rec);
        }

        /**
         * Closure probes for the strata: for each s | g with s >= 2, one
         * element of exact degree s over the ground field, largest s first.
         * An F_q-span closed under multiplication by such an element is
         * closed under all of F_q[gamma] = F^(s), so one probe per s
         * suffices; no multiplicative generator is needed.
         */
        inline std::vector<std::pair<uint32_t, FieldElement>> stratum_probes(const FieldPtr& F,
                                                                             uint32_t g)
        {
            std::vector<std::pair<uint32_t, FieldElement>> out;
            for (uint32_t s = g; s >= 2; --s) {
                if (g % s) continue;
                bool found = false;
                for (uint64_t idx = 0; idx < F->size_u64() && !found; ++idx) {
                    FieldElement v = F->element_at(idx);
                    if (!v.is_zero() && F->degree_over_ground(v) == s) {
                        out.emplace_back(s, v);
                        found = true;
                    }
                }
                if (!found) throw check_failed("stratum_probes: degree has no element");
            }
            return out;
        }

        /** largest s dividing g such that the span is an F^(s)-vector space */
        inline uint32_t stratum_of(const std::vector<FieldElement>& coords,
                                   const GroundSolver& solver,
                                   const std::vector<std::pair<uint32_t, FieldElement>>& probes)
        {
            for (const auto& [s, gs] : probes) {
                bool closed = true;
                for (const auto& c : coords)
                    if (!solver.express(gs * c).has_value()) {
                        closed = false;
                        break;
                    }
                if (closed) return s;
            }
            return 1;
        }
    }

    /** order of the group of invertible r x r matrices over a q-element field */
    inline BigInt gl_order(uint64_t q, uint32_t r)
    {
        BigInt qr = big_pow(BigInt(q), r), out = 1;
        for (uint32_t i = 0; i < r; ++i) out *= qr - big_pow(BigInt(q), i);
        return out;
    }

    /**
     * Brute-force order of the stabilizer of the lattice basis's projective
     * class under right multiplication by invertible ground matrices.
     * Singular matrices produce dependent tuples and never match, so the
     * scan runs over all q^(r^2) matrices without an invertibility filter.
     */
    inline BigInt gl_stabilizer_order(const FLattice& L, uint64_t cap = (uint64_t)1 << 22)
    {
        const FieldPtr& F = L.field();
        FieldPtr gf = F->ground_field();
        uint64_t q = gf->size_u64();
        uint32_t r = L.rank();
        BigInt total = big_pow(BigInt(q), (uint32_t)r * r);
        if (total > cap) throw cap_exceeded("gl_stabilizer_order: matrix space too large");

        std::vector<FieldElement> lifted;
        for (uint64_t i = 0; i < q; ++i) lifted.push_back(F->lift_ground(gf->element_at(i)));
        const auto& w = L.basis();
        FieldElement inv_w1 = F->inv(w[0]);

        BigInt count = 0;
        std::vector<uint64_t> m((size_t)r * r, 0);   // column-major: m[i + r*j]
        for (;;) {
            std::vector<FieldElement> img;
            for (uint32_t j = 0; j < r; ++j) {
                FieldElement s = F->zero();
                for (uint32_t i = 0; i < r; ++i) s = s + lifted[m[i + (size_t)r * j]] * w[i];
                img.push_back(s);
            }
            if (!img[0].is_zero()) {
                FieldElement c = img[0] * inv_w1;
                bool match = true;
                for (uint32_t j = 1; j < r && match; ++j) match = (img[j] == c * w[j]);
                if (match) ++count;
            }
            size_t t = 0;
            while (t < m.size() && ++m[t] == q) m[t++] = 0;
            if (t == m.size()) break;
        }
        return count;
    }

    /**
     * Inventory of projective classes of F-independent r-tuples with
     * coordinates in the degree-n extension: total count, counts per stratum
     * s (the largest s | gcd(r,n) for which the span is an F^(s)-space), and
     * matrix-group orbit counts per stratum.
     */
    struct OmegaInventory
    {
        uint64_t q = 0;
        uint32_t r = 0, n = 0;
        BigInt total;
        BigInt gl;
        std::map<uint32_t, BigInt> strata;
        std::map<uint32_t, BigInt> orbits;
    };

    inline OmegaInventory enumerate_omega(uint64_t q, uint32_t r, uint32_t n,
                                          uint64_t size_cap = 4096)
    {
        auto [p, e] = factor_prime_power(q);
        if (r < 2) throw invalid_input("enumerate_omega: rank must be at least 2");
        if (n == 0) throw invalid_input("enumerate_omega: extension degree must be positive");
        OmegaInventory inv;
        inv.q = q;
        inv.r = r;
        inv.n = n;
        inv.gl = gl_order(q, r);
        inv.total = 0;
        if (r > n) return inv;
        BigInt Q = big_pow(BigInt(q), n);
        if (Q > size_cap) throw cap_exceeded("enumerate_omega: field larger than the size cap");
        if (big_pow(Q, r - 1) > (BigInt(1) << 24))
            throw cap_exceeded("enumerate_omega: class space too large");

        auto F = ExtensionField::create(p, e, n);
        auto probes = edetail::stratum_probes(F, std::gcd(r, n));
        edetail::visit_classes(F, r, [&](const std::vector<FieldElement>& coords,
                                         const GroundSolver& solver) {
            uint32_t s = edetail::stratum_of(coords, solver, probes);
            inv.strata[s] += 1;
            inv.total += 1;
        });

        // certify the closed form for the total
        BigInt expect = 1;
        for (uint32_t i = 1; i < r; ++i) expect *= Q - big_pow(BigInt(q), i);
        if (inv.total != expect)
            throw check_failed("enumerate_omega: class count disagrees with the closed form");

        for (const auto& [s, cnt] : inv.strata) {
            BigInt ws = big_pow(BigInt(q), s) - 1;
            BigInt num = cnt * ws;
            if (num % inv.gl != 0)
                throw check_failed("enumerate_omega: orbit count is not integral");
            inv.orbits[s] = num / inv.gl;
        }
        return inv;
    }

    /**
     * The orbit-mass identity: (q-1)/#GL * #classes, also accumulated
     * stratum-by-stratum as orbits(s) * (q-1)/(q^s-1), against the closed
     * product of weight ratios prod_{1<=i<=r-1} (q^(n-r+i)-1)/(q^(i+1)-1).
     */
    struct CountIdentity
    {
        OmegaInventory inventory;
        Rational lhs, rhs;
        bool verdict = false;
    };

    inline CountIdentity count_identity_check(uint64_t q, uint32_t r, uint32_t n,
                                              uint64_t size_cap = 4096)
    {
        if (r > n) throw invalid_input("count_identity_check: requires r <= n");
        CountIdentity out;
        out.inventory = enumerate_omega(q, r, n, size_cap);
        const OmegaInventory& inv = out.inventory;

        out.lhs = make_frac(BigInt(q - 1) * inv.total, inv.gl);
        Rational by_strata = 0;
        for (const auto& [s, cnt] : inv.orbits)
            by_strata += Rational(cnt) * make_frac(BigInt(q - 1), big_pow(BigInt(q), s) - 1);
        if (by_strata != out.lhs)
            throw check_failed("count_identity_check: stratum accumulation disagrees");

        out.rhs = 1;
        for (uint32_t i = 1; i < r; ++i)
            out.rhs *= make_frac(big_pow(BigInt(q), n - r + i) - 1, big_pow(BigInt(q), i + 1) - 1);
        out.verdict = (out.lhs == out.rhs);
        return out;
    }

    /**
     * One common zero of the selected value family: the ambient extension
     * degree m (exact: the coordinates generate the whole degree-m field),
     * the normalized coordinates, and the Jacobian determinant taken at the
     * last-coordinate-1 representative.
     */
    struct LatticeZero
    {
        uint32_t m = 0;
        FieldPtr field;
        std::vector<FieldElement> coords;
        FieldElement jac_det;
        bool in_expected_set = false;
    };

    struct ZeroLocusScan
    {
        uint64_t q = 0;
        uint32_t r = 0, n = 0, scan_bound = 0;
        std::vector<uint32_t> indices;
        BigInt expected;
        std::vector<LatticeZero> zeros;
        bool jacobians_nonzero = false;
        bool verdict = false;
    };

    /**
     * Scan every class over extensions of degree m <= scan_bound (each class
     * visited once, in its exact minimal field) for common vanishing of
     * E_{q^i-1}, n-r < i < n.  The verdict asserts that the common zeros are
     * exactly the classes with coordinates in the degree-n extension, whose
     * count has the closed form prod_{1<=i<=r-1} (q^n - q^i).
     */
    inline ZeroLocusScan zero_locus_check(uint64_t q, uint32_t r, uint32_t n, uint32_t scan_bound,
                                          uint64_t size_cap = 4096)
    {
        auto [p, e] = factor_prime_power(q);
        if (r < 2) throw invalid_input("zero_locus_check: rank must be at least 2");
        if (r > n) throw invalid_input("zero_locus_check: requires r <= n");
        if (scan_bound < n) throw invalid_input("zero_locus_check: scan bound must reach n");
        ZeroLocusScan out;
        out.q = q;
        out.r = r;
        out.n = n;
        out.scan_bound = scan_bound;
        for (uint32_t i = n - r + 1; i < n; ++i) out.indices.push_back(i);
        out.expected = 1;
        for (uint32_t i = 1; i < r; ++i)
            out.expected *= big_pow(BigInt(q), n) - big_pow(BigInt(q), i);

        bool all_divide = true;
        bool jac_ok = true;
        for (uint32_t m = 1; m <= scan_bound; ++m) {
            if (big_pow(BigInt(q), m) > size_cap)
                throw cap_exceeded("zero_locus_check: field larger than the size cap");
            auto F = ExtensionField::create(p, e, m);
            edetail::visit_classes(F, r, [&](const std::vector<FieldElement>& coords,
                                             const GroundSolver&) {
                if (point_min_degree(coords) != m) return;   // counted in its own field
                FLattice L(F, coords);
                for (uint32_t i : out.indices)
                    if (!eisenstein_value(L, i).is_zero()) return;

                LatticeZero z;
                z.m = m;
                z.field = F;
                z.coords = coords;
                z.in_expected_set = (n % m == 0);
                if (!z.in_expected_set) all_divide = false;

                // multiplicity-one witness at the last-coordinate-1 representative
                FieldElement inv_last = F->inv(coords[r - 1]);
                std::vector<FieldElement> rep;
                for (const auto& c : coords) rep.push_back(c * inv_last);
                z.jac_det = eisenstein_jacobian_det(FLattice(F, rep), out.indices);
                if (z.jac_det.is_zero()) jac_ok = false;
                out.zeros.push_back(std::move(z));
            });
        }
        out.jacobians_nonzero = jac_ok;
        out.verdict = all_divide && BigInt(out.zeros.size()) == out.expected;
        return out;
    }

    /**
     * Certificate that over every class scanned (degrees m <= scan_bound,
     * each class once) and every window of r consecutive indices inside
     * [1, scan_bound], at least one value E_{q^i-1} is nonzero.  The first
     * all-zero window found, if any, is returned as a counterexample.
     */
    struct WindowCounterexample
    {
        uint32_t m = 0;
        FieldPtr field;
        std::vector<FieldElement> coords;
        uint32_t window_start = 0;
    };

    struct ScanCertificate
    {
        uint64_t q = 0;
        uint32_t r = 0, scan_bound = 0;
        BigInt classes_checked;
        BigInt windows_checked;
        std::optional<WindowCounterexample> counterexample;
        bool verdict = false;
    };

    inline ScanCertificate consecutive_scan(uint64_t q, uint32_t r, uint32_t scan_bound,
                                            uint64_t size_cap = 4096)
    {
        auto [p, e] = factor_prime_power(q);
        if (r < 2) throw invalid_input("consecutive_scan: rank must be at least 2");
        if (scan_bound < r) throw invalid_input("consecutive_scan: bound admits no window");
        ScanCertificate out;
        out.q = q;
        out.r = r;
        out.scan_bound = scan_bound;
        out.classes_checked = 0;
        out.windows_checked = 0;

        for (uint32_t m = 1; m <= scan_bound && !out.counterexample; ++m) {
            if (big_pow(BigInt(q), m) > size_cap)
                throw cap_exceeded("consecutive_scan: field larger than the size cap");
            auto F = ExtensionField::create(p, e, m);
            edetail::visit_classes(F, r, [&](const std::vector<FieldElement>& coords,
                                             const GroundSolver&) {
                if (out.counterexample) return;
                if (point_min_degree(coords) != m) return;
                FLattice L(F, coords);
                std::vector<bool> is_zero;
                for (uint32_t i = 1; i <= scan_bound; ++i)
                    is_zero.push_back(eisenstein_value(L, i).is_zero());
                out.classes_checked += 1;
                for (uint32_t start = 1; start + r - 1 <= scan_bound; ++start) {
                    bool all = true;
                    for (uint32_t i = start; i < start + r; ++i)
                        if (!is_zero[i - 1]) {
                            all = false;
                            break;
                        }
                    out.windows_checked += 1;
                    if (all) {
                        out.counterexample = WindowCounterexample{m, F, coords, start};
                        return;
                    }
                }
            });
        }
        out.verdict = !out.counterexample.has_value();
        return out;
    }
}

#endif
