#ifndef VLAB_ZEROS_HPP
#define VLAB_ZEROS_HPP

/**
 * @file zeros.hpp
 * Exact enumeration of the projective zero locus of r-1 independent
 * homogeneous forms over F_q.  Points are found chart by chart on the
 * stratification by first nonzero coordinate, inside explicitly constructed
 * residue extensions, one record per geometric point; the run is accepted
 * only if the multiplicities sum to the full Bezout number.
 */

#include "ideals.hpp"
#include "pointkey.hpp"

namespace vlab
{
    struct ZeroRecord
    {
        FieldPtr field;                     // residue extension the point lives in
        std::vector<FieldElement> point;    // projective coordinates, chart coordinate = 1
        uint32_t chart = 0;                 // 0-based index of the first nonzero coordinate
        uint32_t min_degree = 1;            // degree of the point over F_q
        uint64_t nu_x = 0;                  // local intersection multiplicity
        PointKey key;                       // canonical conjugation-invariant key
    };

    struct ZeroLocus
    {
        uint64_t bezout = 1;                // product of the form degrees
        std::vector<ZeroRecord> records;    // sorted by (key, coordinate indices)
    };

    struct IndependenceReport
    {
        bool independent = true;
        uint32_t failing_chart = 0;         // 1-based, when not independent
    };

    /** deterministic irreducible of degree d over F (seeded search) */
    inline UPoly find_irreducible(const FieldPtr& F, uint32_t d, uint64_t seed = 0)
    {
        if (d == 0) throw invalid_input("find_irreducible: degree must be positive");
        if (d == 1) return UPoly::x(F);
        auto rng = detail::seeded_rng({0x69727234ULL, F->p(), F->e(), d, seed});
        for (int tries = 0; tries < 400 * (int)d; ++tries) {
            UPoly f = UPoly::random_monic(F, d, rng);
            if (upoly_irreducible(f)) return f;
        }
        throw cap_exceeded("find_irreducible: no irreducible found within budget");
    }

    namespace zdetail
    {
        inline void validate_forms(const std::vector<MultiPoly>& forms)
        {
            if (forms.empty()) throw invalid_input("no forms given");
            const FieldPtr& F = forms[0].field();
            if (F->m() != 1) throw invalid_input("forms must have coefficients in an m == 1 field");
            uint32_t r = (uint32_t)forms.size() + 1;
            for (const auto& f : forms) {
                if (!f.field()->same_field(*F) || f.nvars() != r)
                    throw invalid_input("forms must share one ring in r = (#forms + 1) variables");
                if (f.is_zero()) throw invalid_input("zero form given");
                auto d = f.homogeneous_degree();
                if (!d || *d == 0) throw invalid_input("forms must be homogeneous of positive degree");
            }
        }

        /** restrict to the stratum: X_j = 0 for j < c, X_c = 1; variables X_{c+1}.. */
        inline std::vector<MultiPoly> stratum_gens(const std::vector<MultiPoly>& forms, uint32_t c)
        {
            std::vector<MultiPoly> out;
            for (const auto& f : forms) {
                MultiPoly g = f;
                for (uint32_t j = 0; j < c; ++j)
                    g = g.substitute_value(j, g.field()->zero());
                g = g.substitute_value(c, g.field()->one());
                for (uint32_t j = c + 1; j-- > 0;) g = g.drop_var(0);
                if (!g.is_zero()) out.push_back(g);
            }
            return out;
        }

        /** all common zeros of a zero-dimensional system, coordinates in F */
        inline std::vector<std::vector<FieldElement>> solve_affine(
            const std::vector<MultiPoly>& gens, const FieldPtr& F, uint32_t nvars)
        {
            if (nvars == 0) {
                for (const auto& g : gens)
                    if (!g.is_zero()) return {};
                return {std::vector<FieldElement>{}};
            }
            std::vector<MultiPoly> live;
            for (const auto& g : gens)
                if (!g.is_zero()) live.push_back(g);
            if (live.empty())
                throw check_failed("solve_affine: system vanished identically");
            GroebnerBasis G = groebner(live, MonOrder::lex);
            if (G.is_unit_ideal()) return {};
            auto elim = eliminant_last_var(G);
            if (!elim) throw check_failed("solve_affine: no eliminant; system not zero-dimensional");
            std::vector<std::vector<FieldElement>> out;
            for (const auto& rt : roots_in_field(*elim)) {
                std::vector<MultiPoly> sub;
                for (const auto& g : G.polys)
                    sub.push_back(g.substitute_value(nvars - 1, rt).drop_var(nvars - 1));
                for (auto& sol : solve_affine(sub, F, nvars - 1)) {
                    sol.push_back(rt);
                    out.push_back(std::move(sol));
                }
            }
            return out;
        }
    }

    /**
     * Every chart of every form system must cut out a finite set: the
     * dehomogenization at each X_c = 1 must have a finite-dimensional
     * quotient.
     */
    inline IndependenceReport independence_check(const std::vector<MultiPoly>& forms)
    {
        zdetail::validate_forms(forms);
        uint32_t r = (uint32_t)forms.size() + 1;
        for (uint32_t c = 0; c < r; ++c) {
            std::vector<MultiPoly> gens;
            for (const auto& f : forms) {
                MultiPoly g = f.substitute_value(c, f.field()->one()).drop_var(c);
                if (!g.is_zero()) gens.push_back(g);
            }
            bool finite = false;
            if (gens.size() == forms.size()) {
                GroebnerBasis G = groebner(gens, MonOrder::grevlex);
                finite = quotient_dimension(G).has_value();
            }
            if (!finite) return IndependenceReport{false, c + 1};
        }
        return IndependenceReport{true, 0};
    }

    /**
     * Locate the full zero locus.  Charts are swept in order; within a chart
     * the points of each ground degree M are found inside one residue
     * extension F_{q^M}, and a point is accepted only when its degree is
     * exactly M, so every geometric point appears exactly once.  The sum of
     * the local multiplicities must reach the Bezout number, which certifies
     * completeness; the sweep stops early once it does.
     */
    inline ZeroLocus locate_zeros(const std::vector<MultiPoly>& forms, uint64_t degree_cap = 64,
                                  uint32_t nmax_cap = 0)
    {
        zdetail::validate_forms(forms);
        const FieldPtr& Fq = forms[0].field();
        uint32_t r = (uint32_t)forms.size() + 1;
        uint64_t B = 1;
        for (const auto& f : forms) {
            B *= *f.homogeneous_degree();
            if (B > degree_cap) throw cap_exceeded("bezout number exceeds the degree cap");
        }

        ZeroLocus L;
        L.bezout = B;
        uint64_t total = 0;

        for (uint32_t c = 0; c < r && total < B; ++c) {
            uint32_t k = r - 1 - c;
            std::vector<MultiPoly> gens = zdetail::stratum_gens(forms, c);

            auto record_point = [&](const FieldPtr& FM, std::vector<FieldElement> sol) {
                std::vector<FieldElement> coords(c, FM->zero());
                coords.push_back(FM->one());
                for (auto& v : sol) coords.push_back(std::move(v));
                ZeroRecord R;
                R.field = FM;
                R.point = std::move(coords);
                R.chart = c;
                R.min_degree = point_min_degree(R.point);
                R.key = canonical_point_key(R.point);
                std::vector<MultiPoly> local;
                for (const auto& f : forms) local.push_back(dehomogenize_at(f, R.point, c));
                R.nu_x = local_multiplicity(local, B, nmax_cap).nu;
                if (R.nu_x == 0)
                    throw check_failed("located point fails to be a zero of the system");
                total += R.nu_x;
                if (total > B) throw check_failed("multiplicities exceed the bezout number");
                L.records.push_back(std::move(R));
            };

            if (k == 0) {
                // single candidate (0 : ... : 0 : 1); stratum_gens kept only the
                // nonvanishing constants, so empty means the point is a zero
                if (gens.empty()) record_point(Fq, {});
                continue;
            }

            std::vector<MultiPoly> live;
            for (const auto& g : gens)
                if (!g.is_zero()) live.push_back(g);
            if (live.empty())
                throw invalid_input("forms vanish identically on a stratum; zero set not finite");
            GroebnerBasis G = groebner(live, MonOrder::lex);
            if (G.is_unit_ideal()) continue;
            if (!quotient_dimension(G).has_value())
                throw invalid_input("zero set not finite on a chart");
            auto elim = eliminant_last_var(G);
            if (!elim) throw check_failed("zero-dimensional lex basis without eliminant");

            auto factors = upoly_factor(*elim);
            std::set<uint64_t> degrees_seen;
            std::vector<uint64_t> sweep;
            for (const auto& [fac, mult] : factors)
                for (uint64_t M = fac.deg(); M <= B; M += fac.deg())
                    if (degrees_seen.insert(M).second) sweep.push_back(M);
            std::sort(sweep.begin(), sweep.end());

            for (uint64_t M : sweep) {
                if (total >= B) break;
                // build F_{q^M} over the forms' own field so lifts stay canonical
                std::optional<UPoly> modulus;
                for (const auto& [fac, mult] : factors)
                    if ((uint64_t)fac.deg() == M) {
                        modulus = fac;
                        break;
                    }
                FieldPtr FM = M == 1 ? Fq
                                     : ExtensionField::residue_extension(
                                           Fq, modulus ? *modulus : find_irreducible(Fq, (uint32_t)M));
                std::vector<MultiPoly> lifted;
                for (const auto& g : G.polys) lifted.push_back(g.lift_to(FM));
                for (const auto& [fac, mult] : factors) {
                    if (M % (uint64_t)fac.deg() != 0) continue;
                    UPoly fM = lift_upoly(fac, FM);
                    for (const auto& rt : roots_in_field(fM)) {
                        std::vector<MultiPoly> sub;
                        for (const auto& g : lifted)
                            sub.push_back(g.substitute_value(k - 1, rt).drop_var(k - 1));
                        for (auto& partial : zdetail::solve_affine(sub, FM, k - 1)) {
                            partial.push_back(rt);
                            std::vector<FieldElement> sol = partial;
                            // accept only points of ground degree exactly M
                            uint32_t m0 = 1;
                            for (const auto& v : sol)
                                m0 = (uint32_t)std::lcm(m0, FM->degree_over_ground(v));
                            if (m0 == M) record_point(FM, std::move(sol));
                        }
                    }
                }
            }
        }

        if (total != B)
            throw check_failed("zero locus incomplete: multiplicities sum to " +
                               std::to_string(total) + " of " + std::to_string(B));

        std::sort(L.records.begin(), L.records.end(), [](const ZeroRecord& a, const ZeroRecord& b) {
            if (a.key != b.key) return a.key < b.key;
            for (size_t i = 0; i < a.point.size(); ++i) {
                uint64_t ia = a.field->index_of(a.point[i]);
                uint64_t ib = b.field->index_of(b.point[i]);
                if (ia != ib) return ia < ib;
            }
            return false;
        });
        return L;
    }
}

#endif
