#ifndef VLAB_FAMILIES_HPP
#define VLAB_FAMILIES_HPP

/**
 * @file families.hpp
 * Construction of isobaric form families: the classical one-generator-omitted
 * family, and seeded random families with representable weights, nonzero
 * monomial support and independent pullbacks.
 */

#include "valence.hpp"

namespace vlab
{
    /**
     * All exponent tuples of the given weight.  For the gh set the last slot
     * is the h-exponent and must be congruent to the requested type mod q-1.
     */
    inline std::vector<Exps> weight_tuples(const WeightSystem& ws, GenSet gens, uint64_t k,
                                           uint32_t type = 0)
    {
        uint32_t gcount = gens == GenSet::g ? ws.r : ws.r - 1;
        std::vector<Exps> out;
        Exps e(ws.r, 0);
        std::function<void(uint32_t, uint64_t)> rec = [&](uint32_t i, uint64_t left) {
            if (i == gcount) {
                if (left == 0) out.push_back(e);
                return;
            }
            uint64_t w = ws.weight(i + 1);
            for (uint64_t t = 0; t * w <= left; ++t) {
                e[i] = (uint32_t)t;
                rec(i + 1, left - t * w);
            }
            e[i] = 0;
        };
        if (gens == GenSet::g) {
            rec(0, k);
        } else {
            uint64_t qm1 = ws.q - 1;
            for (uint64_t eh = type % qm1; eh * ws.h_weight <= k; eh += qm1) {
                e[ws.r - 1] = (uint32_t)eh;
                rec(0, k - eh * ws.h_weight);
            }
            e[ws.r - 1] = 0;
        }
        return out;
    }

    /** the family {g_i : i != j}: r-1 one-monomial forms */
    inline std::vector<IsobaricForm> omitted_generator_family(const WeightSystem& ws,
                                                              const FieldPtr& Fq, uint32_t j)
    {
        if (j < 1 || j > ws.r) throw invalid_input("omitted generator index out of range");
        std::vector<IsobaricForm> fam;
        for (uint32_t i = 1; i <= ws.r; ++i) {
            if (i == j) continue;
            Exps e(ws.r, 0);
            e[i - 1] = 1;
            fam.emplace_back(ws, GenSet::g, Fq,
                             std::vector<std::pair<Exps, FieldElement>>{{e, Fq->one()}});
        }
        return fam;
    }

    /**
     * A random isobaric form of the given weight (and type, for gh): a
     * nonempty random subset of the weight's monomials with nonzero random
     * coefficients.  Returns nothing when the weight has no monomials.
     */
    inline std::optional<IsobaricForm> random_isobaric(const WeightSystem& ws, GenSet gens,
                                                       const FieldPtr& Fq, uint64_t k,
                                                       uint32_t type, std::mt19937_64& rng)
    {
        auto tuples = weight_tuples(ws, gens, k, type);
        if (tuples.empty()) return std::nullopt;
        std::vector<std::pair<Exps, FieldElement>> terms;
        auto nonzero = [&]() {
            FieldElement c = Fq->zero();
            while (c.is_zero()) c = Fq->random_element(rng);
            return c;
        };
        for (const auto& t : tuples)
            if (rng() & 1) terms.emplace_back(t, nonzero());
        if (terms.empty()) terms.emplace_back(tuples[rng() % tuples.size()], nonzero());
        return IsobaricForm(ws, gens, Fq, terms);
    }

    /**
     * A random independent family of r-1 forms with representable weights
     * and a Bezout product within the cap.
     */
    inline std::vector<IsobaricForm> random_family(const WeightSystem& ws, GenSet gens,
                                                   const FieldPtr& Fq, uint64_t max_weight,
                                                   std::mt19937_64& rng,
                                                   uint64_t degree_cap = 64)
    {
        std::vector<uint64_t> representable;
        for (uint64_t k = 1; k <= max_weight; ++k) {
            // representable for SOME type is all that matters here
            bool any = false;
            uint64_t types = gens == GenSet::g ? 1 : ws.q - 1;
            for (uint32_t t = 0; t < types && !any; ++t)
                any = !weight_tuples(ws, gens, k, t).empty();
            if (any) representable.push_back(k);
        }
        if (representable.empty())
            throw invalid_input("no representable weights at or below the requested maximum");

        for (int attempt = 0; attempt < 400; ++attempt) {
            std::vector<uint64_t> ks;
            uint64_t prod = 1;
            bool ok = true;
            for (uint32_t i = 0; i + 1 < ws.r && ok; ++i) {
                uint64_t k = representable[rng() % representable.size()];
                prod *= k;
                if (prod > degree_cap) ok = false;
                ks.push_back(k);
            }
            if (!ok) continue;
            std::vector<IsobaricForm> fam;
            for (uint64_t k : ks) {
                uint32_t type = (uint32_t)(rng() % (ws.q - 1));
                auto f = random_isobaric(ws, gens, Fq, k, type, rng);
                if (!f) break;
                fam.push_back(std::move(*f));
            }
            if (fam.size() != ks.size()) continue;
            std::vector<MultiPoly> forms;
            for (const auto& f : fam) forms.push_back(f.pullback());
            if (independence_check(forms).independent) return fam;
        }
        throw cap_exceeded("random_family: no independent family found within budget");
    }
}

#endif
