#ifndef VLAB_MULTIPOLY_HPP
#define VLAB_MULTIPOLY_HPP

/**
 * @file multipoly.hpp
 * Sparse multivariate polynomials over a tower field, weight systems
 * w_i = q^i - 1, and isobaric forms in the generator sets {g_1..g_r} or
 * {g_1..g_{r-1}, h} together with their weighted pullbacks to ordinary
 * homogeneous polynomials.
 */

#include <map>
#include <sstream>

#include "gf.hpp"

namespace vlab
{
    // ---------------------------------------------------------------------------
    //  weight systems
    // ---------------------------------------------------------------------------
    struct WeightSystem
    {
        uint64_t q = 0;                  // q = p^e
        uint32_t r = 0;
        std::vector<uint64_t> w;         // w[i-1] = q^i - 1, 1-based accessor below
        uint64_t h_weight = 0;           // (q^r - 1)/(q - 1)

        WeightSystem() = default;
        WeightSystem(uint64_t q_, uint32_t r_) : q(q_), r(r_)
        {
            if (q < 2) throw invalid_input("weight system needs q >= 2");
            if (r < 1 || r > 16) throw invalid_input("weight system needs 1 <= r <= 16");
            uint64_t pw = 1;
            for (uint32_t i = 1; i <= r; ++i) {
                if (pw > (uint64_t(1) << 62) / q) throw invalid_input("q^r too large");
                pw *= q;
                w.push_back(pw - 1);
            }
            h_weight = (pw - 1) / (q - 1);
        }

        uint64_t weight(uint32_t i) const   // 1-based
        {
            if (i < 1 || i > r) throw invalid_input("weight index out of range");
            return w[i - 1];
        }

        /** gcd of q^i - 1 over i in S equals q^{gcd S} - 1 */
        uint64_t weight_gcd(const std::vector<uint32_t>& S) const
        {
            if (S.empty()) throw invalid_input("weight_gcd of empty support");
            uint64_t g = 0;
            for (uint32_t i : S) g = std::gcd(g, (uint64_t)i);
            uint64_t pw = 1;
            for (uint64_t t = 0; t < g; ++t) pw *= q;
            return pw - 1;
        }
    };

    // ---------------------------------------------------------------------------
    //  monomial orders
    // ---------------------------------------------------------------------------
    enum class MonOrder { lex, grlex, grevlex };

    using Exps = std::vector<uint32_t>;

    inline uint64_t exps_degree(const Exps& a)
    {
        uint64_t d = 0;
        for (uint32_t v : a) d += v;
        return d;
    }

    /** -1 if a < b, 0 if equal, +1 if a > b under the given order */
    inline int mon_cmp(const Exps& a, const Exps& b, MonOrder ord)
    {
        switch (ord) {
        case MonOrder::lex:
            for (size_t i = 0; i < a.size(); ++i)
                if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
            return 0;
        case MonOrder::grlex: {
            uint64_t da = exps_degree(a), db = exps_degree(b);
            if (da != db) return da < db ? -1 : 1;
            return mon_cmp(a, b, MonOrder::lex);
        }
        case MonOrder::grevlex: {
            uint64_t da = exps_degree(a), db = exps_degree(b);
            if (da != db) return da < db ? -1 : 1;
            for (size_t i = a.size(); i-- > 0;)
                if (a[i] != b[i]) return a[i] > b[i] ? -1 : 1;
            return 0;
        }
        }
        return 0;
    }

    inline bool mon_divides(const Exps& a, const Exps& b)   // a | b
    {
        for (size_t i = 0; i < a.size(); ++i)
            if (a[i] > b[i]) return false;
        return true;
    }

    // ---------------------------------------------------------------------------
    //  sparse multivariate polynomials
    // ---------------------------------------------------------------------------
    class MultiPoly
    {
    public:
        using TermMap = std::map<Exps, FieldElement>;   // exponent-lex canonical storage

        MultiPoly() = default;
        MultiPoly(FieldPtr f, uint32_t nvars) : fld_(std::move(f)), n_(nvars) {}

        const FieldPtr& field() const { return fld_; }
        uint32_t nvars() const { return n_; }
        const TermMap& terms() const { return terms_; }
        bool is_zero() const { return terms_.empty(); }
        size_t term_count() const { return terms_.size(); }

        static MultiPoly monomial(const FieldPtr& f, const Exps& e, const FieldElement& c)
        {
            MultiPoly P(f, (uint32_t)e.size());
            P.add_term(e, c);
            return P;
        }
        static MultiPoly constant(const FieldPtr& f, uint32_t nvars, const FieldElement& c)
        {
            return monomial_of(f, nvars, c);
        }
        static MultiPoly variable(const FieldPtr& f, uint32_t nvars, uint32_t j)
        {
            Exps e(nvars, 0);
            e.at(j) = 1;
            return monomial(f, e, f->one());
        }

        void add_term(const Exps& e, const FieldElement& c)
        {
            if (e.size() != n_) throw invalid_input("term has wrong variable count");
            if (c.is_zero()) return;
            auto it = terms_.find(e);
            if (it == terms_.end()) {
                terms_.emplace(e, c);
            } else {
                it->second = it->second + c;
                if (it->second.is_zero()) terms_.erase(it);
            }
        }

        MultiPoly operator+(const MultiPoly& o) const
        {
            MultiPoly r = *this;
            for (const auto& [e, c] : o.terms_) r.add_term(e, c);
            return r;
        }
        MultiPoly operator-(const MultiPoly& o) const
        {
            MultiPoly r = *this;
            for (const auto& [e, c] : o.terms_) r.add_term(e, fld_->neg(c));
            return r;
        }
        MultiPoly operator*(const MultiPoly& o) const
        {
            MultiPoly r(fld_, n_);
            for (const auto& [ea, ca] : terms_)
                for (const auto& [eb, cb] : o.terms_) {
                    Exps e(n_);
                    for (uint32_t i = 0; i < n_; ++i) e[i] = ea[i] + eb[i];
                    r.add_term(e, ca * cb);
                }
            return r;
        }
        MultiPoly scaled(const FieldElement& s) const
        {
            MultiPoly r(fld_, n_);
            if (s.is_zero()) return r;
            for (const auto& [e, c] : terms_) r.terms_.emplace(e, c * s);
            return r;
        }
        MultiPoly negated() const
        {
            MultiPoly r(fld_, n_);
            for (const auto& [e, c] : terms_) r.terms_.emplace(e, fld_->neg(c));
            return r;
        }

        bool operator==(const MultiPoly& o) const
        {
            if (n_ != o.n_ || terms_.size() != o.terms_.size()) return false;
            auto i = terms_.begin();
            auto j = o.terms_.begin();
            for (; i != terms_.end(); ++i, ++j)
                if (i->first != j->first || !(i->second == j->second)) return false;
            return true;
        }
        bool operator!=(const MultiPoly& o) const { return !(*this == o); }

        uint64_t total_degree() const
        {
            uint64_t d = 0;
            for (const auto& [e, c] : terms_) d = std::max(d, exps_degree(e));
            return d;
        }

        /** homogeneous of a single degree? (zero counts as homogeneous) */
        std::optional<uint64_t> homogeneous_degree() const
        {
            std::optional<uint64_t> d;
            for (const auto& [e, c] : terms_) {
                uint64_t de = exps_degree(e);
                if (!d) d = de;
                else if (*d != de) return std::nullopt;
            }
            return d ? d : std::optional<uint64_t>(0);
        }

        FieldElement evaluate(const std::vector<FieldElement>& x) const
        {
            if (x.size() != n_) throw invalid_input("evaluate: wrong point length");
            // per-variable power cache
            std::vector<std::vector<FieldElement>> pw(n_);
            for (uint32_t i = 0; i < n_; ++i) pw[i].push_back(fld_->one());
            FieldElement acc = fld_->zero();
            for (const auto& [e, c] : terms_) {
                FieldElement t = c;
                for (uint32_t i = 0; i < n_; ++i) {
                    while (pw[i].size() <= e[i]) pw[i].push_back(pw[i].back() * x[i]);
                    if (e[i]) t = t * pw[i][e[i]];
                }
                acc = acc + t;
            }
            return acc;
        }

        /** coefficient-wise lift from a ground (m == 1) field into an extension */
        MultiPoly lift_to(const FieldPtr& ext) const
        {
            MultiPoly r(ext, n_);
            for (const auto& [e, c] : terms_) r.terms_.emplace(e, ext->lift_ground(c));
            return r;
        }

        /** set X_chart := 1 and drop that variable (others keep their relative order) */
        MultiPoly dehomogenize(uint32_t chart) const
        {
            if (chart >= n_) throw invalid_input("chart out of range");
            MultiPoly r(fld_, n_ - 1);
            for (const auto& [e, c] : terms_) {
                Exps f;
                f.reserve(n_ - 1);
                for (uint32_t i = 0; i < n_; ++i)
                    if (i != chart) f.push_back(e[i]);
                r.add_term(f, c);
            }
            return r;
        }

        /** substitute X_j := value (a constant), keeping the variable slot */
        MultiPoly substitute_value(uint32_t j, const FieldElement& val) const
        {
            if (j >= n_) throw invalid_input("substitute_value: variable out of range");
            MultiPoly r(fld_, n_);
            std::vector<FieldElement> pw{fld_->one()};
            for (const auto& [e, c] : terms_) {
                while (pw.size() <= e[j]) pw.push_back(pw.back() * val);
                Exps f = e;
                f[j] = 0;
                r.add_term(f, c * pw[e[j]]);
            }
            return r;
        }

        /** drop a variable slot entirely (must not occur in any term) */
        MultiPoly drop_var(uint32_t j) const
        {
            MultiPoly r(fld_, n_ - 1);
            for (const auto& [e, c] : terms_) {
                if (e[j] != 0) throw invalid_input("drop_var: variable still occurs");
                Exps f;
                f.reserve(n_ - 1);
                for (uint32_t i = 0; i < n_; ++i)
                    if (i != j) f.push_back(e[i]);
                r.add_term(f, c);
            }
            return r;
        }

        /** substitute X_j := X_j + a (translation) */
        MultiPoly translate_var(uint32_t j, const FieldElement& a) const
        {
            if (a.is_zero()) return *this;
            // binomial table mod p up to the max exponent of X_j
            uint32_t maxe = 0;
            for (const auto& [e, c] : terms_) maxe = std::max(maxe, e[j]);
            uint32_t p = fld_->p();
            std::vector<std::vector<uint32_t>> binom(maxe + 1);
            for (uint32_t k = 0; k <= maxe; ++k) {
                binom[k].assign(k + 1, 0);
                binom[k][0] = 1 % p;
                for (uint32_t t = 1; t <= k; ++t)
                    binom[k][t] = (binom[k - 1][t - 1] + (t <= k - 1 ? binom[k - 1][t] : 0)) % p;
            }
            std::vector<FieldElement> apow{fld_->one()};
            while (apow.size() <= maxe) apow.push_back(apow.back() * a);

            MultiPoly r(fld_, n_);
            for (const auto& [e, c] : terms_) {
                uint32_t k = e[j];
                for (uint32_t t = 0; t <= k; ++t) {
                    uint32_t bc = binom[k][t];
                    if (!bc) continue;
                    Exps f = e;
                    f[j] = t;
                    r.add_term(f, c * apow[k - t] * fld_->from_uint(bc));
                }
            }
            return r;
        }

        /** substitute X_i := eps_i * X_i for all i */
        MultiPoly scale_vars(const std::vector<FieldElement>& eps) const
        {
            if (eps.size() != n_) throw invalid_input("scale_vars: wrong length");
            MultiPoly r(fld_, n_);
            for (const auto& [e, c] : terms_) {
                FieldElement f = c;
                for (uint32_t i = 0; i < n_; ++i)
                    if (e[i]) f = f * fld_->pow(eps[i], BigInt(e[i]));
                r.add_term(e, f);
            }
            return r;
        }

        /** formal partial derivative in X_j (characteristic p) */
        MultiPoly partial_derivative(uint32_t j) const
        {
            if (j >= n_) throw invalid_input("partial_derivative: variable out of range");
            MultiPoly r(fld_, n_);
            for (const auto& [e, c] : terms_) {
                if (e[j] == 0) continue;
                FieldElement f = c * fld_->from_uint(e[j] % fld_->p());
                if (f.is_zero()) continue;
                Exps d = e;
                d[j] -= 1;
                r.add_term(d, f);
            }
            return r;
        }

        /** grlex-descending display, variables named X1..Xn */
        std::string str() const
        {
            if (terms_.empty()) return "0";
            std::ostringstream os;
            bool first = true;
            for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
                if (!first) os << " + ";
                first = false;
                os << "(" << it->second.field()->index_of(it->second) << ")";
                for (uint32_t i = 0; i < n_; ++i)
                    if (it->first[i]) {
                        os << "*X" << (i + 1);
                        if (it->first[i] > 1) os << "^" << it->first[i];
                    }
            }
            return os.str();
        }

    private:
        FieldPtr fld_;
        uint32_t n_ = 0;
        TermMap terms_;

        static MultiPoly monomial_of(const FieldPtr& f, uint32_t nvars, const FieldElement& c)
        {
            MultiPoly P(f, nvars);
            P.add_term(Exps(nvars, 0), c);
            return P;
        }
    };

    // ---------------------------------------------------------------------------
    //  isobaric forms over the weighted generators
    // ---------------------------------------------------------------------------
    enum class GenSet { g, gh };

    /**
     * Isobaric polynomial in g_1..g_r (GenSet::g) or g_1..g_{r-1}, h
     * (GenSet::gh), with F_q coefficients.  Exponent tuples have length r;
     * in the gh case the last slot is the h-exponent.  Every monomial must
     * carry the same weight, and in the gh case the h-exponents must agree
     * mod q-1 (their common residue is the type).
     */
    class IsobaricForm
    {
    public:
        IsobaricForm(WeightSystem ws, GenSet gens, FieldPtr fq,
                     const std::vector<std::pair<Exps, FieldElement>>& terms)
            : ws_(std::move(ws)), gens_(gens), fq_(std::move(fq))
        {
            if (fq_->m() != 1) throw invalid_input("form coefficients must live in an m == 1 field");
            if (fq_->q() != ws_.q) throw invalid_input("coefficient field size differs from weight system q");
            for (const auto& [e, c] : terms) {
                if (e.size() != ws_.r) throw invalid_input("form monomial has wrong arity");
                add(e, c);
            }
            if (terms_.empty()) throw invalid_input("isobaric form must be nonzero");
            validate();
        }

        const WeightSystem& weights() const { return ws_; }
        GenSet generator_set() const { return gens_; }
        const FieldPtr& field() const { return fq_; }
        const MultiPoly::TermMap& terms() const { return terms_; }
        uint64_t weight() const { return weight_; }
        uint32_t type() const { return type_; }

        uint64_t monomial_weight(const Exps& e) const
        {
            uint64_t w = 0;
            uint32_t gcount = gens_ == GenSet::g ? ws_.r : ws_.r - 1;
            for (uint32_t i = 0; i < gcount; ++i) w += (uint64_t)e[i] * ws_.weight(i + 1);
            if (gens_ == GenSet::gh) w += (uint64_t)e[ws_.r - 1] * ws_.h_weight;
            return w;
        }

        /**
         * The weighted pullback: g_i -> X_i^{w_i} and (gh case) h -> X_r^{w'_r}.
         * Homogeneous of degree weight() in r variables over F_q.
         */
        MultiPoly pullback() const
        {
            MultiPoly P(fq_, ws_.r);
            auto chk = [](uint64_t v) {
                if (v > 0xffffffffu) throw cap_exceeded("pullback exponent exceeds 2^32");
                return (uint32_t)v;
            };
            for (const auto& [e, c] : terms_) {
                Exps x(ws_.r, 0);
                uint32_t gcount = gens_ == GenSet::g ? ws_.r : ws_.r - 1;
                for (uint32_t i = 0; i < gcount; ++i)
                    x[i] = chk((uint64_t)e[i] * ws_.weight(i + 1));
                if (gens_ == GenSet::gh)
                    x[ws_.r - 1] = chk((uint64_t)e[ws_.r - 1] * ws_.h_weight);
                P.add_term(x, c);
            }
            if (P.is_zero() || !P.homogeneous_degree() || *P.homogeneous_degree() != weight_)
                throw check_failed("pullback: expected homogeneous image of degree = weight");
            return P;
        }

        std::string monomial_str(const Exps& e) const
        {
            std::ostringstream os;
            bool any = false;
            uint32_t gcount = gens_ == GenSet::g ? ws_.r : ws_.r - 1;
            for (uint32_t i = 0; i < gcount; ++i)
                if (e[i]) {
                    os << (any ? "*" : "") << "g" << (i + 1);
                    if (e[i] > 1) os << "^" << e[i];
                    any = true;
                }
            if (gens_ == GenSet::gh && e[ws_.r - 1]) {
                os << (any ? "*" : "") << "h";
                if (e[ws_.r - 1] > 1) os << "^" << e[ws_.r - 1];
                any = true;
            }
            if (!any) os << "1";
            return os.str();
        }

    private:
        void add(const Exps& e, const FieldElement& c)
        {
            if (c.is_zero()) return;
            if (!c.field()->same_field(*fq_)) throw invalid_input("form coefficient from wrong field");
            auto it = terms_.find(e);
            if (it == terms_.end()) terms_.emplace(e, c);
            else {
                it->second = it->second + c;
                if (it->second.is_zero()) terms_.erase(it);
            }
        }

        void validate()
        {
            auto it = terms_.begin();
            weight_ = monomial_weight(it->first);
            uint64_t qm1 = ws_.q - 1;
            type_ = gens_ == GenSet::gh ? (uint32_t)(it->first[ws_.r - 1] % qm1) : 0;
            for (const auto& [e, c] : terms_) {
                if (monomial_weight(e) != weight_)
                    throw invalid_input("not isobaric: monomials " + monomial_str(it->first) +
                                        " and " + monomial_str(e) + " have different weights");
                if (gens_ == GenSet::gh && (uint32_t)(e[ws_.r - 1] % qm1) != type_)
                    throw invalid_input("mixed type: monomials " + monomial_str(it->first) +
                                        " and " + monomial_str(e) +
                                        " have h-exponents that differ mod q-1");
            }
        }

        WeightSystem ws_;
        GenSet gens_;
        FieldPtr fq_;
        MultiPoly::TermMap terms_;
        uint64_t weight_ = 0;
        uint32_t type_ = 0;
    };

    /**
     * Dehomogenize P at a projective point: set X_chart := 1, then translate so
     * that the point maps to the origin.  The point may live in any tower over
     * P's coefficient field; the result lives over the point's field, in
     * nvars-1 variables (variable j of the result is X_j - x_j/x_chart for the
     * j-th non-chart variable).
     */
    inline MultiPoly dehomogenize_at(const MultiPoly& P, const std::vector<FieldElement>& point,
                                     uint32_t chart)
    {
        if (point.size() != P.nvars()) throw invalid_input("dehomogenize_at: point arity mismatch");
        if (chart >= P.nvars()) throw invalid_input("dehomogenize_at: chart out of range");
        const FieldPtr& Fx = point[0].field();
        if (point[chart].is_zero())
            throw invalid_input("dehomogenize_at: chart coordinate vanishes at the point");
        MultiPoly Q = P.field()->same_field(*Fx) ? P : P.lift_to(Fx);
        Q = Q.dehomogenize(chart);
        FieldElement inv = Fx->inv(point[chart]);
        uint32_t out_j = 0;
        for (uint32_t i = 0; i < P.nvars(); ++i) {
            if (i == chart) continue;
            FieldElement a = point[i] * inv;
            Q = Q.translate_var(out_j, a);
            ++out_j;
        }
        return Q;
    }
}

#endif
