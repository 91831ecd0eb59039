#ifndef VLAB_POINTKEY_HPP
#define VLAB_POINTKEY_HPP

/**
 * @file pointkey.hpp
 * Canonical keys for geometric points of projective space over the ground
 * field.  Two coordinate tuples receive the same key exactly when they are
 * conjugate over the ground field, even when they live in independently
 * constructed extension towers.
 */

#include "gf.hpp"

namespace vlab
{
    struct PointKey
    {
        std::string bytes;
        bool operator<(const PointKey& o) const { return bytes < o.bytes; }
        bool operator==(const PointKey& o) const { return bytes == o.bytes; }
        bool operator!=(const PointKey& o) const { return bytes != o.bytes; }
    };

    namespace keydetail
    {
        inline void put_u32(std::string& s, uint32_t v)
        {
            for (int b = 3; b >= 0; --b) s.push_back((char)((v >> (8 * b)) & 0xff));
        }
        inline void put_u64(std::string& s, uint64_t v)
        {
            for (int b = 7; b >= 0; --b) s.push_back((char)((v >> (8 * b)) & 0xff));
        }

        /** exponent tuples of total degree exactly D in k slots, fixed order */
        inline void level_tuples(uint32_t k, uint32_t D, std::vector<std::vector<uint32_t>>& out)
        {
            std::vector<uint32_t> a(k, 0);
            std::function<void(uint32_t, uint32_t)> rec = [&](uint32_t v, uint32_t left) {
                if (v + 1 == k) {
                    a[v] = left;
                    out.push_back(a);
                    a[v] = 0;
                    return;
                }
                for (uint32_t t = 0; t <= left; ++t) {
                    a[v] = t;
                    rec(v + 1, left - t);
                }
                a[v] = 0;
            };
            if (k) rec(0, D);
        }
    }

    /** first index with a nonzero coordinate; throws on the zero tuple */
    inline uint32_t first_support(const std::vector<FieldElement>& coords)
    {
        for (uint32_t i = 0; i < coords.size(); ++i)
            if (!coords[i].is_zero()) return i;
        throw invalid_input("projective point has no nonzero coordinate");
    }

    /** 1-based indices of the nonzero coordinates */
    inline std::vector<uint32_t> support_of(const std::vector<FieldElement>& coords)
    {
        std::vector<uint32_t> S;
        for (uint32_t i = 0; i < coords.size(); ++i)
            if (!coords[i].is_zero()) S.push_back(i + 1);
        return S;
    }

    /**
     * Degree over the ground field of the point (not of the raw tuple): the
     * lcm of the coordinate degrees after scaling the first nonzero
     * coordinate to one.
     */
    inline uint32_t point_min_degree(const std::vector<FieldElement>& coords)
    {
        const FieldPtr& F = coords.at(0).field();
        uint32_t l = first_support(coords);
        FieldElement inv = F->inv(coords[l]);
        uint32_t m0 = 1;
        for (uint32_t i = l + 1; i < coords.size(); ++i)
            m0 = (uint32_t)std::lcm(m0, F->degree_over_ground(coords[i] * inv));
        return m0;
    }

    /**
     * Canonical conjugation-invariant key.
     *
     * The tuple is normalized (first nonzero coordinate scaled to one); the
     * affine part b_1..b_k generates a subfield of degree m0.  A basis of
     * that subfield is selected greedily from the monomials in the b_j in a
     * fixed enumeration order; since Frobenius preserves ground-linear
     * independence, conjugate tuples select the same monomial set.  The key
     * then records the multiplication-by-b_j matrices in that basis: their
     * entries are ground-field scalars, fixed by conjugation, and together
     * they pin down the tuple up to a ground-field isomorphism — which for
     * finite fields always extends to the ambient field.  Hence: equal keys
     * exactly for conjugate points.
     */
    inline PointKey canonical_point_key(const std::vector<FieldElement>& coords)
    {
        const FieldPtr& F = coords.at(0).field();
        const FieldPtr ground = F->ground_field();
        uint32_t r = (uint32_t)coords.size();
        uint32_t l = first_support(coords);
        uint32_t k = r - 1 - l;

        std::string s;
        keydetail::put_u32(s, r);
        keydetail::put_u32(s, l);
        keydetail::put_u32(s, k);

        FieldElement inv = F->inv(coords[l]);
        std::vector<FieldElement> b;
        uint32_t m0 = 1;
        for (uint32_t i = l + 1; i < r; ++i) {
            b.push_back(coords[i] * inv);
            m0 = (uint32_t)std::lcm(m0, F->degree_over_ground(b.back()));
        }
        keydetail::put_u32(s, m0);
        if (k == 0) return PointKey{std::move(s)};

        GroundSolver solver(F);
        std::vector<std::vector<uint32_t>> chosen;
        std::vector<FieldElement> basis;
        for (uint32_t D = 0; solver.rank() < m0; ++D) {
            if (D > 2 * m0 * k + 4)
                throw check_failed("point key: monomials failed to span the residue field");
            std::vector<std::vector<uint32_t>> level;
            keydetail::level_tuples(k, D, level);
            for (const auto& a : level) {
                FieldElement v = F->one();
                for (uint32_t j = 0; j < k; ++j)
                    for (uint32_t t = 0; t < a[j]; ++t) v = v * b[j];
                if (solver.add(v)) {
                    chosen.push_back(a);
                    basis.push_back(v);
                    if (solver.rank() == m0) break;
                }
            }
        }
        for (const auto& a : chosen)
            for (uint32_t j = 0; j < k; ++j) keydetail::put_u32(s, a[j]);
        for (uint32_t j = 0; j < k; ++j)
            for (uint32_t i = 0; i < m0; ++i) {
                auto cf = solver.express(b[j] * basis[i]);
                if (!cf) throw check_failed("point key: product left the selected basis span");
                for (const auto& c : *cf) keydetail::put_u64(s, ground->index_of(c));
            }
        return PointKey{std::move(s)};
    }
}

#endif
