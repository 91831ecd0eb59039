#ifndef VLAB_GF_HPP
#define VLAB_GF_HPP

/**
 * @file gf.hpp
 * Finite field towers F_p -> F_q = F_{p^e} -> F_{q^m}, with dense coordinate
 * representation, Frobenius powering, and univariate polynomial arithmetic /
 * factorization over either level of the tower.
 *
 * Towers are never nested deeper than two levels.  Fields built by independent
 * calls are independent objects; elements of different constructions are never
 * compared or embedded into each other (cross-degree questions go through
 * subfield_membership).
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "base.hpp"

namespace vlab
{
    class ExtensionField;
    class FieldElement;
    class UPoly;
    using FieldPtr = std::shared_ptr<const ExtensionField>;

    namespace detail
    {
        inline bool is_prime_u32(uint32_t n)
        {
            if (n < 2) return false;
            for (uint32_t d = 2; (uint64_t)d * d <= n; ++d)
                if (n % d == 0) return false;
            return true;
        }

        inline std::mt19937_64 seeded_rng(std::initializer_list<uint64_t> parts)
        {
            std::seed_seq sq(parts.begin(), parts.end());
            return std::mt19937_64(sq);
        }
    }

    /** q = p^e with p prime, or throws */
    inline std::pair<uint32_t, uint32_t> factor_prime_power(uint64_t q)
    {
        if (q < 2) throw invalid_input("not a prime power");
        uint64_t p = q;
        for (uint64_t d = 2; d * d <= q; ++d)
            if (q % d == 0) {
                p = d;
                break;
            }
        uint32_t e = 0;
        uint64_t t = q;
        while (t % p == 0) {
            t /= p;
            ++e;
        }
        if (t != 1) throw invalid_input("not a prime power");
        return {(uint32_t)p, e};
    }

    /**
     * An element of a two-level tower field.  Coordinates are stored densely:
     * m rows of e integers mod p; row i holds the F_q coordinate of z^i,
     * constant term first.
     */
    class FieldElement
    {
    public:
        FieldElement() = default;

        const FieldPtr& field() const { return fld_; }
        const std::vector<uint32_t>& coords() const { return c_; }

        bool is_zero() const
        {
            return std::all_of(c_.begin(), c_.end(), [](uint32_t v) { return v == 0; });
        }

        // canonical byte key (for hashing / deterministic ordering inside one field)
        std::string bytes() const
        {
            std::string s;
            s.reserve(c_.size() * 4);
            for (uint32_t v : c_) {
                s.push_back((char)(v & 0xff));
                s.push_back((char)((v >> 8) & 0xff));
                s.push_back((char)((v >> 16) & 0xff));
                s.push_back((char)((v >> 24) & 0xff));
            }
            return s;
        }

        FieldElement operator-() const;
        FieldElement operator+(const FieldElement& o) const;
        FieldElement operator-(const FieldElement& o) const;
        FieldElement operator*(const FieldElement& o) const;
        FieldElement operator/(const FieldElement& o) const;
        FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
        FieldElement& operator-=(const FieldElement& o) { return *this = *this - o; }
        FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }

        bool operator==(const FieldElement& o) const;
        bool operator!=(const FieldElement& o) const { return !(*this == o); }

    private:
        friend class ExtensionField;
        FieldElement(FieldPtr f, std::vector<uint32_t> c) : fld_(std::move(f)), c_(std::move(c)) {}

        FieldPtr fld_;
        std::vector<uint32_t> c_;   // m*e entries, [i*e + j] = F_p coeff of y^j in coordinate of z^i
    };

    class ExtensionField : public std::enable_shared_from_this<ExtensionField>
    {
    public:
        static constexpr uint32_t max_p = 65521;
        static constexpr uint32_t max_e = 8;
        static constexpr uint32_t max_m = 256;

        /**
         * Build F_{q^m}, q = p^e, with deterministic seeded search for the
         * irreducible moduli.  Equal (p,e,m,seed) always yields equal moduli;
         * the ground modulus depends only on (p,e,seed), so towers of different
         * m over the same seed share their ground level.
         */
        static FieldPtr create(uint32_t p, uint32_t e, uint32_t m, uint64_t seed = 0);

        /**
         * The residue field F_q[z]/(g) for a monic irreducible g over a ground
         * field (m == 1 tower).  generator() is then the class of z, i.e. a
         * root of g.
         */
        static FieldPtr residue_extension(const FieldPtr& ground, const UPoly& g);

        uint32_t p() const { return p_; }
        uint32_t e() const { return e_; }
        uint32_t m() const { return m_; }
        uint64_t q() const { return q_; }
        BigInt size() const { return big_pow(BigInt(q_), m_); }
        bool size_fits_u64() const;
        uint64_t size_u64() const;

        // ground modulus over F_p, constant term first, length e+1, monic
        const std::vector<uint32_t>& ground_modulus() const { return gmod_; }
        // modulus over F_q: (m+1) rows of e entries, constant row first, monic
        const std::vector<uint32_t>& modulus_flat() const { return mod_; }

        /** The m == 1 twin over the same ground modulus (F_q itself). */
        FieldPtr ground_field() const;

        bool same_field(const ExtensionField& o) const
        {
            if (this == &o) return true;
            return p_ == o.p_ && e_ == o.e_ && m_ == o.m_ && gmod_ == o.gmod_ && mod_ == o.mod_;
        }

        // ---- element factories -------------------------------------------------
        FieldElement zero() const { return FieldElement(shared_from_this(), std::vector<uint32_t>(m_ * e_, 0)); }
        FieldElement one() const { return from_uint(1); }
        FieldElement from_uint(uint64_t n) const
        {
            std::vector<uint32_t> c(m_ * e_, 0);
            c[0] = (uint32_t)(n % p_);
            return FieldElement(shared_from_this(), c);
        }
        /** element from explicit coordinate rows (each length e, mod p applied) */
        FieldElement from_coords(const std::vector<std::vector<uint32_t>>& rows) const;
        /** lift an element of the ground field (or of any same-(p,e,gmod) m==1 field) */
        FieldElement lift_ground(const FieldElement& g) const;
        /** coordinate i of x as an element of ground_field() */
        FieldElement coord(const FieldElement& x, uint32_t i) const;
        /** image of z in the quotient; for m == 1 this is the root of the modulus */
        FieldElement generator() const;

        /** mixed-radix enumeration: index in [0, p^{em}) -> element, canonical order */
        FieldElement element_at(uint64_t idx) const;
        uint64_t index_of(const FieldElement& x) const;
        FieldElement random_element(std::mt19937_64& rng) const;

        // ---- arithmetic --------------------------------------------------------
        FieldElement neg(const FieldElement& a) const;
        FieldElement add(const FieldElement& a, const FieldElement& b) const;
        FieldElement sub(const FieldElement& a, const FieldElement& b) const;
        FieldElement mul(const FieldElement& a, const FieldElement& b) const;
        FieldElement inv(const FieldElement& a) const;
        FieldElement pow(const FieldElement& a, const BigInt& n) const;

        /** x^{q^j}, by repeated q-th powering (j is reduced mod m) */
        FieldElement frobenius(const FieldElement& x, uint64_t j) const;
        /** whether x^{q^s} == x, i.e. x lies in F^{(s)} = F_{q^s} (intersected with this field) */
        bool subfield_membership(const FieldElement& x, uint64_t s) const;
        /** smallest s >= 1 with x^{q^s} == x; divides m */
        uint32_t degree_over_ground(const FieldElement& x) const;

        // ---- low-level F_q span ops (length-e uint32 spans), used by the linear
        // ---- algebra helpers; stride is e().
        void g_add(const uint32_t* a, const uint32_t* b, uint32_t* out) const;
        void g_sub(const uint32_t* a, const uint32_t* b, uint32_t* out) const;
        void g_mul(const uint32_t* a, const uint32_t* b, uint32_t* out) const;
        void g_inv(const uint32_t* a, uint32_t* out) const;
        bool g_is_zero(const uint32_t* a) const;

    private:
        ExtensionField(uint32_t p, uint32_t e, uint32_t m,
                       std::vector<uint32_t> gmod, std::vector<uint32_t> mod, FieldPtr ground)
            : p_(p), e_(e), m_(m), q_(1), gmod_(std::move(gmod)), mod_(std::move(mod)),
              ground_(std::move(ground))
        {
            for (uint32_t i = 0; i < e_; ++i) q_ *= p_;
        }

        void check_owner(const FieldElement& x) const
        {
            if (!x.field() || !same_field(*x.field()))
                throw invalid_input("field element belongs to a different field");
        }

        // F_p scalars
        uint32_t padd(uint32_t a, uint32_t b) const { uint32_t s = a + b; return s >= p_ ? s - p_ : s; }
        uint32_t psub(uint32_t a, uint32_t b) const { return a >= b ? a - b : a + p_ - b; }
        uint32_t pmul(uint32_t a, uint32_t b) const { return (uint32_t)(((uint64_t)a * b) % p_); }
        uint32_t pinv(uint32_t a) const;

        uint32_t p_, e_, m_;
        uint64_t q_;
        std::vector<uint32_t> gmod_;   // length e+1
        std::vector<uint32_t> mod_;    // (m+1)*e flat
        FieldPtr ground_;              // null iff m == 1 (self)
    };

    // ---------------------------------------------------------------------------
    //  FieldElement operator bodies
    // ---------------------------------------------------------------------------
    inline FieldElement FieldElement::operator-() const { return fld_->neg(*this); }
    inline FieldElement FieldElement::operator+(const FieldElement& o) const { return fld_->add(*this, o); }
    inline FieldElement FieldElement::operator-(const FieldElement& o) const { return fld_->sub(*this, o); }
    inline FieldElement FieldElement::operator*(const FieldElement& o) const { return fld_->mul(*this, o); }
    inline FieldElement FieldElement::operator/(const FieldElement& o) const { return fld_->mul(*this, fld_->inv(o)); }
    inline bool FieldElement::operator==(const FieldElement& o) const
    {
        if (!fld_ || !o.fld_) throw invalid_input("comparing default-constructed field element");
        if (!fld_->same_field(*o.fld_)) throw invalid_input("comparing elements of different fields");
        return c_ == o.c_;
    }

    // ---------------------------------------------------------------------------
    //  ground span arithmetic
    // ---------------------------------------------------------------------------
    inline uint32_t ExtensionField::pinv(uint32_t a) const
    {
        if (a == 0) throw invalid_input("inverse of zero in F_p");
        // extended euclid on integers
        int64_t t = 0, nt = 1, r = p_, nr = a;
        while (nr != 0) {
            int64_t qq = r / nr;
            std::swap(t -= qq * nt, nt);
            std::swap(r -= qq * nr, nr);
        }
        if (t < 0) t += p_;
        return (uint32_t)t;
    }

    inline void ExtensionField::g_add(const uint32_t* a, const uint32_t* b, uint32_t* out) const
    {
        for (uint32_t j = 0; j < e_; ++j) out[j] = padd(a[j], b[j]);
    }
    inline void ExtensionField::g_sub(const uint32_t* a, const uint32_t* b, uint32_t* out) const
    {
        for (uint32_t j = 0; j < e_; ++j) out[j] = psub(a[j], b[j]);
    }
    inline bool ExtensionField::g_is_zero(const uint32_t* a) const
    {
        for (uint32_t j = 0; j < e_; ++j)
            if (a[j]) return false;
        return true;
    }
    inline void ExtensionField::g_mul(const uint32_t* a, const uint32_t* b, uint32_t* out) const
    {
        uint32_t buf[2 * max_e] = {0};
        for (uint32_t i = 0; i < e_; ++i) {
            if (!a[i]) continue;
            for (uint32_t j = 0; j < e_; ++j)
                buf[i + j] = padd(buf[i + j], pmul(a[i], b[j]));
        }
        // reduce by monic gmod_
        for (int d = 2 * (int)e_ - 2; d >= (int)e_; --d) {
            uint32_t c = buf[d];
            if (!c) continue;
            buf[d] = 0;
            for (uint32_t j = 0; j < e_; ++j)
                buf[d - e_ + j] = psub(buf[d - e_ + j], pmul(c, gmod_[j]));
        }
        for (uint32_t j = 0; j < e_; ++j) out[j] = buf[j];
    }
    inline void ExtensionField::g_inv(const uint32_t* a, uint32_t* out) const
    {
        if (g_is_zero(a)) throw invalid_input("inverse of zero in F_q");
        if (e_ == 1) { out[0] = pinv(a[0]); return; }
        // extended euclid over F_p[y] for (a, gmod)
        std::vector<uint32_t> r0(gmod_), r1(a, a + e_), t0(e_ + 1, 0), t1(e_ + 1, 0);
        t1[0] = 1;
        auto degv = [](const std::vector<uint32_t>& v) {
            for (int i = (int)v.size() - 1; i >= 0; --i)
                if (v[i]) return i;
            return -1;
        };
        while (true) {
            int d1 = degv(r1);
            if (d1 < 0) throw invalid_input("g_inv: element not invertible");
            if (d1 == 0) break;
            int d0 = degv(r0);
            if (d0 < d1) { std::swap(r0, r1); std::swap(t0, t1); continue; }
            uint32_t f = pmul(r0[d0], pinv(r1[d1]));
            int sh = d0 - d1;
            for (int j = 0; j <= d1; ++j) r0[j + sh] = psub(r0[j + sh], pmul(f, r1[j]));
            for (int j = 0; (size_t)j <= e_ - (size_t)sh && j <= (int)e_; ++j)
                if (j + sh <= (int)e_) t0[j + sh] = psub(t0[j + sh], pmul(f, t1[j]));
        }
        uint32_t lead = pinv(r1[0]);
        for (uint32_t j = 0; j < e_; ++j) out[j] = pmul(lead, t1[j]);
    }

    // ---------------------------------------------------------------------------
    //  element arithmetic
    // ---------------------------------------------------------------------------
    inline FieldElement ExtensionField::neg(const FieldElement& a) const
    {
        check_owner(a);
        std::vector<uint32_t> c(a.coords());
        for (auto& v : c) v = v ? p_ - v : 0;
        return FieldElement(shared_from_this(), std::move(c));
    }
    inline FieldElement ExtensionField::add(const FieldElement& a, const FieldElement& b) const
    {
        check_owner(a); check_owner(b);
        std::vector<uint32_t> c(m_ * e_);
        for (uint32_t i = 0; i < m_ * e_; ++i) c[i] = padd(a.coords()[i], b.coords()[i]);
        return FieldElement(shared_from_this(), std::move(c));
    }
    inline FieldElement ExtensionField::sub(const FieldElement& a, const FieldElement& b) const
    {
        check_owner(a); check_owner(b);
        std::vector<uint32_t> c(m_ * e_);
        for (uint32_t i = 0; i < m_ * e_; ++i) c[i] = psub(a.coords()[i], b.coords()[i]);
        return FieldElement(shared_from_this(), std::move(c));
    }
    inline FieldElement ExtensionField::mul(const FieldElement& a, const FieldElement& b) const
    {
        check_owner(a); check_owner(b);
        const uint32_t* A = a.coords().data();
        const uint32_t* B = b.coords().data();
        std::vector<uint32_t> acc((2 * m_ - 1) * e_, 0);
        uint32_t tmp[max_e];
        for (uint32_t i = 0; i < m_; ++i) {
            if (g_is_zero(A + i * e_)) continue;
            for (uint32_t j = 0; j < m_; ++j) {
                if (g_is_zero(B + j * e_)) continue;
                g_mul(A + i * e_, B + j * e_, tmp);
                g_add(acc.data() + (i + j) * e_, tmp, acc.data() + (i + j) * e_);
            }
        }
        // reduce mod monic modulus
        for (int d = 2 * (int)m_ - 2; d >= (int)m_; --d) {
            uint32_t* cd = acc.data() + d * e_;
            if (g_is_zero(cd)) continue;
            for (uint32_t t = 0; t < m_; ++t) {
                if (g_is_zero(mod_.data() + t * e_)) continue;
                g_mul(cd, mod_.data() + t * e_, tmp);
                g_sub(acc.data() + (d - m_ + t) * e_, tmp, acc.data() + (d - m_ + t) * e_);
            }
            std::fill(cd, cd + e_, 0u);
        }
        acc.resize(m_ * e_);
        return FieldElement(shared_from_this(), std::move(acc));
    }
    inline FieldElement ExtensionField::inv(const FieldElement& a) const
    {
        check_owner(a);
        if (a.is_zero()) throw invalid_input("inverse of zero field element");
        if (m_ == 1) {
            std::vector<uint32_t> c(e_);
            g_inv(a.coords().data(), c.data());
            return FieldElement(shared_from_this(), std::move(c));
        }
        // extended euclid over F_q[z]: r0 = modulus, r1 = a
        uint32_t E = e_;
        auto degq = [&](const std::vector<uint32_t>& v) {
            for (int i = (int)(v.size() / E) - 1; i >= 0; --i)
                if (!g_is_zero(v.data() + (size_t)i * E)) return i;
            return -1;
        };
        std::vector<uint32_t> r0(mod_), r1(a.coords()), t0((m_ + 1) * E, 0), t1((m_ + 1) * E, 0);
        r1.resize((m_ + 1) * E, 0);
        t1[0] = 1;
        uint32_t tmp[max_e], fct[max_e];
        while (true) {
            int d1 = degq(r1);
            if (d1 < 0) throw check_failed("inv: zero remainder before unit (modulus not irreducible?)");
            if (d1 == 0) break;
            int d0 = degq(r0);
            if (d0 < d1) { std::swap(r0, r1); std::swap(t0, t1); continue; }
            g_inv(r1.data() + (size_t)d1 * E, tmp);
            g_mul(r0.data() + (size_t)d0 * E, tmp, fct);
            int sh = d0 - d1;
            for (int j = 0; j <= d1; ++j) {
                g_mul(fct, r1.data() + (size_t)j * E, tmp);
                g_sub(r0.data() + (size_t)(j + sh) * E, tmp, r0.data() + (size_t)(j + sh) * E);
            }
            for (int j = 0; j + sh <= (int)m_; ++j) {
                g_mul(fct, t1.data() + (size_t)j * E, tmp);
                g_sub(t0.data() + (size_t)(j + sh) * E, tmp, t0.data() + (size_t)(j + sh) * E);
            }
        }
        g_inv(r1.data(), tmp);
        std::vector<uint32_t> out(m_ * E, 0);
        for (uint32_t j = 0; j < m_; ++j)
            g_mul(tmp, t1.data() + (size_t)j * E, out.data() + (size_t)j * E);
        return FieldElement(shared_from_this(), std::move(out));
    }
    inline FieldElement ExtensionField::pow(const FieldElement& a, const BigInt& n) const
    {
        check_owner(a);
        if (n < 0) return pow(inv(a), -n);
        FieldElement r = one(), b = a;
        BigInt k = n;
        while (k > 0) {
            if (boost::multiprecision::bit_test(k, 0)) r = mul(r, b);
            b = mul(b, b);
            k >>= 1;
        }
        return r;
    }
    inline FieldElement ExtensionField::frobenius(const FieldElement& x, uint64_t j) const
    {
        check_owner(x);
        j %= m_;
        FieldElement r = x;
        for (uint64_t t = 0; t < j; ++t) r = pow(r, BigInt(q_));
        return r;
    }
    inline bool ExtensionField::subfield_membership(const FieldElement& x, uint64_t s) const
    {
        if (s == 0) throw invalid_input("subfield_membership: s must be >= 1");
        return frobenius(x, s) == x;
    }
    inline uint32_t ExtensionField::degree_over_ground(const FieldElement& x) const
    {
        for (uint32_t s = 1; s <= m_; ++s)
            if (m_ % s == 0 && subfield_membership(x, s)) return s;
        throw check_failed("degree_over_ground: no divisor of m fixed the element");
    }

    // ---------------------------------------------------------------------------
    //  element factories
    // ---------------------------------------------------------------------------
    inline FieldElement ExtensionField::from_coords(const std::vector<std::vector<uint32_t>>& rows) const
    {
        if (rows.size() != m_) throw invalid_input("from_coords: wrong number of coordinate rows");
        std::vector<uint32_t> c(m_ * e_, 0);
        for (uint32_t i = 0; i < m_; ++i) {
            if (rows[i].size() != e_) throw invalid_input("from_coords: wrong row length");
            for (uint32_t j = 0; j < e_; ++j) c[i * e_ + j] = rows[i][j] % p_;
        }
        return FieldElement(shared_from_this(), std::move(c));
    }
    inline FieldElement ExtensionField::lift_ground(const FieldElement& g) const
    {
        const ExtensionField& gf = *g.field();
        if (gf.p() != p_ || gf.e() != e_ || gf.m() != 1 || gf.ground_modulus() != gmod_)
            throw invalid_input("lift_ground: element is not from this tower's ground field");
        std::vector<uint32_t> c(m_ * e_, 0);
        for (uint32_t j = 0; j < e_; ++j) c[j] = g.coords()[j];
        return FieldElement(shared_from_this(), std::move(c));
    }
    inline FieldElement ExtensionField::coord(const FieldElement& x, uint32_t i) const
    {
        check_owner(x);
        if (i >= m_) throw invalid_input("coord index out of range");
        std::vector<uint32_t> c(x.coords().begin() + (size_t)i * e_, x.coords().begin() + (size_t)(i + 1) * e_);
        return FieldElement(ground_field(), std::move(c));
    }
    inline FieldElement ExtensionField::generator() const
    {
        if (m_ == 1) {
            // image of z under F_q[z]/(z + c): the root -c of the modulus
            std::vector<uint32_t> c(e_);
            for (uint32_t j = 0; j < e_; ++j) c[j] = mod_[j] ? p_ - mod_[j] : 0;
            return FieldElement(shared_from_this(), std::move(c));
        }
        std::vector<uint32_t> c(m_ * e_, 0);
        c[1 * e_ + 0] = 1;
        return FieldElement(shared_from_this(), std::move(c));
    }
    inline bool ExtensionField::size_fits_u64() const
    {
        BigInt s = size();
        return s <= BigInt(std::numeric_limits<uint64_t>::max() >> 1);
    }
    inline uint64_t ExtensionField::size_u64() const
    {
        if (!size_fits_u64()) throw cap_exceeded("field too large to enumerate");
        return (uint64_t)size();
    }
    inline FieldElement ExtensionField::element_at(uint64_t idx) const
    {
        std::vector<uint32_t> c(m_ * e_);
        for (uint32_t i = 0; i < m_ * e_; ++i) {
            c[i] = (uint32_t)(idx % p_);
            idx /= p_;
        }
        if (idx) throw invalid_input("element_at: index out of range");
        return FieldElement(shared_from_this(), std::move(c));
    }
    inline uint64_t ExtensionField::index_of(const FieldElement& x) const
    {
        check_owner(x);
        uint64_t idx = 0;
        for (int i = (int)(m_ * e_) - 1; i >= 0; --i) idx = idx * p_ + x.coords()[i];
        return idx;
    }
    inline FieldElement ExtensionField::random_element(std::mt19937_64& rng) const
    {
        std::vector<uint32_t> c(m_ * e_);
        for (auto& v : c) v = (uint32_t)(rng() % p_);
        return FieldElement(shared_from_this(), std::move(c));
    }

    // ---------------------------------------------------------------------------
    //  univariate polynomials over a tower field
    // ---------------------------------------------------------------------------

    /** Dense univariate polynomial, constant term first, no trailing zeros. */
    class UPoly
    {
    public:
        UPoly() = default;
        explicit UPoly(FieldPtr f) : fld_(std::move(f)) {}
        UPoly(FieldPtr f, std::vector<FieldElement> c) : fld_(std::move(f)), c_(std::move(c)) { trim(); }

        static UPoly constant(const FieldPtr& f, const FieldElement& a)
        {
            return UPoly(f, std::vector<FieldElement>{a});
        }
        static UPoly x(const FieldPtr& f)
        {
            return UPoly(f, std::vector<FieldElement>{f->zero(), f->one()});
        }
        static UPoly from_uints(const FieldPtr& f, const std::vector<uint64_t>& cs)
        {
            std::vector<FieldElement> v;
            v.reserve(cs.size());
            for (uint64_t u : cs) v.push_back(f->from_uint(u));
            return UPoly(f, std::move(v));
        }
        static UPoly random_monic(const FieldPtr& f, uint32_t deg, std::mt19937_64& rng)
        {
            std::vector<FieldElement> v;
            v.reserve(deg + 1);
            for (uint32_t i = 0; i < deg; ++i) v.push_back(f->random_element(rng));
            v.push_back(f->one());
            return UPoly(f, std::move(v));
        }

        const FieldPtr& field() const { return fld_; }
        int deg() const { return (int)c_.size() - 1; }
        bool is_zero() const { return c_.empty(); }
        bool is_one() const { return c_.size() == 1 && c_[0] == fld_->one(); }
        const std::vector<FieldElement>& coeffs() const { return c_; }
        const FieldElement& operator[](size_t i) const { return c_[i]; }
        FieldElement coeff_or_zero(size_t i) const { return i < c_.size() ? c_[i] : fld_->zero(); }
        const FieldElement& lead() const
        {
            if (c_.empty()) throw invalid_input("lead of zero polynomial");
            return c_.back();
        }

        bool operator==(const UPoly& o) const
        {
            if (c_.size() != o.c_.size()) return false;
            for (size_t i = 0; i < c_.size(); ++i)
                if (!(c_[i] == o.c_[i])) return false;
            return true;
        }
        bool operator!=(const UPoly& o) const { return !(*this == o); }

        UPoly operator+(const UPoly& o) const
        {
            std::vector<FieldElement> v(std::max(c_.size(), o.c_.size()), fld_->zero());
            for (size_t i = 0; i < c_.size(); ++i) v[i] = c_[i];
            for (size_t i = 0; i < o.c_.size(); ++i) v[i] = v[i] + o.c_[i];
            return UPoly(fld_, std::move(v));
        }
        UPoly operator-(const UPoly& o) const
        {
            std::vector<FieldElement> v(std::max(c_.size(), o.c_.size()), fld_->zero());
            for (size_t i = 0; i < c_.size(); ++i) v[i] = c_[i];
            for (size_t i = 0; i < o.c_.size(); ++i) v[i] = v[i] - o.c_[i];
            return UPoly(fld_, std::move(v));
        }
        UPoly operator*(const UPoly& o) const
        {
            if (is_zero() || o.is_zero()) return UPoly(fld_);
            std::vector<FieldElement> v(c_.size() + o.c_.size() - 1, fld_->zero());
            for (size_t i = 0; i < c_.size(); ++i) {
                if (c_[i].is_zero()) continue;
                for (size_t j = 0; j < o.c_.size(); ++j)
                    v[i + j] = v[i + j] + c_[i] * o.c_[j];
            }
            return UPoly(fld_, std::move(v));
        }
        UPoly scaled(const FieldElement& s) const
        {
            std::vector<FieldElement> v(c_);
            for (auto& a : v) a = a * s;
            return UPoly(fld_, std::move(v));
        }
        UPoly shifted(uint32_t k) const   // * X^k
        {
            if (is_zero()) return *this;
            std::vector<FieldElement> v(k, fld_->zero());
            v.insert(v.end(), c_.begin(), c_.end());
            return UPoly(fld_, std::move(v));
        }

        std::pair<UPoly, UPoly> divmod(const UPoly& den) const
        {
            if (den.is_zero()) throw invalid_input("division by zero polynomial");
            UPoly rem = *this;
            if (deg() < den.deg()) return {UPoly(fld_), rem};
            FieldElement li = fld_->inv(den.lead());
            std::vector<FieldElement> q(deg() - den.deg() + 1, fld_->zero());
            while (rem.deg() >= den.deg()) {
                int sh = rem.deg() - den.deg();
                FieldElement f = rem.lead() * li;
                q[sh] = f;
                for (int j = 0; j <= den.deg(); ++j)
                    rem.c_[j + sh] = rem.c_[j + sh] - f * den.c_[j];
                rem.trim();
                if (rem.is_zero()) break;
            }
            return {UPoly(fld_, std::move(q)), rem};
        }
        UPoly operator/(const UPoly& den) const { return divmod(den).first; }
        UPoly operator%(const UPoly& den) const { return divmod(den).second; }

        UPoly monic() const
        {
            if (is_zero()) return *this;
            return scaled(fld_->inv(lead()));
        }

        UPoly derivative() const
        {
            if (deg() < 1) return UPoly(fld_);
            std::vector<FieldElement> v;
            v.reserve(c_.size() - 1);
            for (size_t i = 1; i < c_.size(); ++i)
                v.push_back(c_[i] * fld_->from_uint(i % fld_->p()));
            return UPoly(fld_, std::move(v));
        }

        FieldElement eval(const FieldElement& a) const
        {
            FieldElement r = fld_->zero();
            for (size_t i = c_.size(); i-- > 0;) r = r * a + c_[i];
            return r;
        }

        /** substitute X -> X + a */
        UPoly taylor_shift(const FieldElement& a) const
        {
            UPoly res(fld_), pw = UPoly::constant(fld_, fld_->one());
            UPoly lin(fld_, {a, fld_->one()});
            for (size_t i = 0; i < c_.size(); ++i) {
                if (!c_[i].is_zero()) res = res + pw.scaled(c_[i]);
                if (i + 1 < c_.size()) pw = pw * lin;
            }
            return res;
        }

    private:
        void trim()
        {
            while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
        }
        FieldPtr fld_;
        std::vector<FieldElement> c_;
    };

    inline UPoly upoly_gcd(UPoly a, UPoly b)
    {
        if (a.is_zero()) return b.monic();
        if (b.is_zero()) return a.monic();
        while (!b.is_zero()) {
            UPoly r = a % b;
            a = std::move(b);
            b = std::move(r);
        }
        return a.monic();
    }

    inline UPoly upoly_pow_mod(const UPoly& base, const BigInt& n, const UPoly& mod)
    {
        const FieldPtr& F = base.field();
        UPoly r = UPoly::constant(F, F->one());
        UPoly b = base % mod;
        BigInt k = n;
        while (k > 0) {
            if (boost::multiprecision::bit_test(k, 0)) r = (r * b) % mod;
            b = (b * b) % mod;
            k >>= 1;
        }
        return r;
    }

    /** lift a polynomial over a ground (m == 1) field into an extension of the same tower */
    inline UPoly lift_upoly(const UPoly& f, const FieldPtr& ext)
    {
        std::vector<FieldElement> v;
        v.reserve(f.coeffs().size());
        for (const auto& c : f.coeffs()) v.push_back(ext->lift_ground(c));
        return UPoly(ext, std::move(v));
    }

    // ---------------------------------------------------------------------------
    //  factorization over a tower field
    // ---------------------------------------------------------------------------
    namespace detail
    {
        /** coefficient-wise p-th root of a polynomial in X^p */
        inline UPoly pth_root_poly(const UPoly& f)
        {
            const FieldPtr& F = f.field();
            uint32_t p = F->p();
            BigInt root_exp = F->size() / p;   // x -> x^{p^{em-1}} inverts x -> x^p
            std::vector<FieldElement> v;
            for (size_t i = 0; i < f.coeffs().size(); ++i) {
                if (i % p != 0) {
                    if (!f.coeffs()[i].is_zero())
                        throw check_failed("pth_root_poly: polynomial is not in X^p");
                    continue;
                }
                v.push_back(F->pow(f.coeffs()[i], root_exp));
            }
            return UPoly(F, std::move(v));
        }

        inline void squarefree_rec(const UPoly& f, uint32_t outer, std::vector<std::pair<UPoly, uint32_t>>& out)
        {
            const FieldPtr& F = f.field();
            if (f.deg() <= 0) return;
            UPoly fd = f.derivative();
            UPoly c = fd.is_zero() ? f : upoly_gcd(f, fd);
            UPoly w = f / c;
            uint32_t i = 1;
            while (!(w.deg() == 0)) {
                UPoly y = upoly_gcd(w, c);
                UPoly z = w / y;
                if (z.deg() > 0) out.emplace_back(z.monic(), i * outer);
                ++i;
                w = std::move(y);
                c = c / w;
            }
            if (c.deg() > 0)
                squarefree_rec(pth_root_poly(c), outer * F->p(), out);
        }
    }

    /** squarefree decomposition (char p aware); factors monic, multiplicities >= 1 */
    inline std::vector<std::pair<UPoly, uint32_t>> squarefree_decomposition(const UPoly& f)
    {
        if (f.is_zero()) throw invalid_input("squarefree decomposition of zero");
        std::vector<std::pair<UPoly, uint32_t>> out;
        detail::squarefree_rec(f.monic(), 1, out);
        return out;
    }

    /** distinct-degree split of a squarefree monic polynomial: list of (product, d) */
    inline std::vector<std::pair<UPoly, uint32_t>> distinct_degree_split(const UPoly& f0)
    {
        const FieldPtr& F = f0.field();
        BigInt Q = F->size();
        std::vector<std::pair<UPoly, uint32_t>> out;
        UPoly f = f0.monic();
        UPoly h = UPoly::x(F) % f;
        uint32_t d = 0;
        while (f.deg() > 0 && 2 * (int)(d + 1) <= f.deg()) {
            ++d;
            h = upoly_pow_mod(h, Q, f);
            UPoly g = upoly_gcd(h - UPoly::x(F), f);
            if (g.deg() > 0) {
                out.emplace_back(g, d);
                f = f / g;
                h = h % f;
            }
        }
        if (f.deg() > 0) out.emplace_back(f, (uint32_t)f.deg());
        return out;
    }

    /** split a monic squarefree product of degree-d irreducibles into its factors */
    inline void equal_degree_split(const UPoly& g, uint32_t d, std::mt19937_64& rng,
                                   std::vector<UPoly>& out)
    {
        const FieldPtr& F = g.field();
        if ((uint32_t)g.deg() == d) { out.push_back(g.monic()); return; }
        BigInt Q = F->size();
        for (int attempt = 0; attempt < 400; ++attempt) {
            UPoly a = UPoly::random_monic(F, (uint32_t)(1 + (rng() % (uint64_t)g.deg())), rng) % g;
            if (a.deg() < 1) continue;
            UPoly s(F);
            if (F->p() == 2) {
                // trace map over F_2: T(a) = sum a^{2^i}, i < log2(Q^d)
                uint64_t k = (uint64_t)F->e() * F->m() * d;
                UPoly t = a % g, T = t;
                for (uint64_t i = 1; i < k; ++i) {
                    t = (t * t) % g;
                    T = T + t;
                }
                s = upoly_gcd(T, g);
            } else {
                BigInt ex = (big_pow(Q, d) - 1) / 2;
                UPoly b = upoly_pow_mod(a, ex, g);
                s = upoly_gcd(b - UPoly::constant(F, F->one()), g);
            }
            if (s.deg() > 0 && s.deg() < g.deg()) {
                equal_degree_split(s, d, rng, out);
                equal_degree_split(g / s, d, rng, out);
                return;
            }
        }
        throw cap_exceeded("equal_degree_split: retry cap exhausted");
    }

    /** deterministic canonical order on monic polynomials over one field */
    inline bool upoly_canonical_less(const UPoly& a, const UPoly& b)
    {
        if (a.deg() != b.deg()) return a.deg() < b.deg();
        const FieldPtr& F = a.field();
        for (int i = a.deg(); i >= 0; --i) {
            uint64_t ia = F->index_of(a[i]), ib = F->index_of(b[i]);
            if (ia != ib) return ia < ib;
        }
        return false;
    }

    /** full factorization into monic irreducibles with multiplicities (deterministic) */
    inline std::vector<std::pair<UPoly, uint32_t>> upoly_factor(const UPoly& f, uint64_t seed = 0)
    {
        if (f.is_zero()) throw invalid_input("factor of zero polynomial");
        std::vector<std::pair<UPoly, uint32_t>> out;
        if (f.deg() == 0) return out;
        auto rng = detail::seeded_rng({0x66616374ULL, seed, (uint64_t)f.deg(),
                                       f.field()->p(), f.field()->e(), f.field()->m()});
        for (const auto& [sf, mult] : squarefree_decomposition(f)) {
            for (const auto& [part, d] : distinct_degree_split(sf)) {
                std::vector<UPoly> irr;
                equal_degree_split(part, d, rng, irr);
                for (auto& g : irr) out.emplace_back(g, mult);
            }
        }
        std::sort(out.begin(), out.end(), [](const auto& A, const auto& B) {
            return upoly_canonical_less(A.first, B.first);
        });
        return out;
    }

    /** (degree, multiplicity) multiset of the irreducible factors */
    inline std::vector<std::pair<uint32_t, uint32_t>> factor_degrees(const UPoly& f, uint64_t seed = 0)
    {
        std::vector<std::pair<uint32_t, uint32_t>> out;
        for (const auto& [g, mult] : upoly_factor(f, seed))
            out.emplace_back((uint32_t)g.deg(), mult);
        std::sort(out.begin(), out.end());
        return out;
    }

    /** Rabin irreducibility test */
    inline bool upoly_irreducible(const UPoly& f)
    {
        if (f.deg() < 1) return false;
        if (f.deg() == 1) return true;
        const FieldPtr& F = f.field();
        BigInt Q = F->size();
        uint32_t d = (uint32_t)f.deg();
        // prime divisors of d
        std::vector<uint32_t> primes;
        uint32_t dd = d;
        for (uint32_t t = 2; t * t <= dd; ++t)
            while (dd % t == 0) { if (primes.empty() || primes.back() != t) primes.push_back(t); dd /= t; }
        if (dd > 1) primes.push_back(dd);

        UPoly x = UPoly::x(F) % f;
        UPoly h = x;
        std::vector<UPoly> at(d + 1, UPoly(F));   // X^{Q^j} mod f for j we pass
        for (uint32_t j = 1; j <= d; ++j) {
            h = upoly_pow_mod(h, Q, f);
            at[j] = h;
        }
        if (!(at[d] == x)) return false;
        for (uint32_t pr : primes) {
            UPoly g = upoly_gcd(at[d / pr] - x, f);
            if (g.deg() != 0) return false;
        }
        return true;
    }

    /** all roots of f lying in its coefficient field, canonically ordered */
    inline std::vector<FieldElement> roots_in_field(const UPoly& f, uint64_t seed = 0)
    {
        if (f.is_zero()) throw invalid_input("roots of zero polynomial");
        const FieldPtr& F = f.field();
        std::vector<FieldElement> roots;
        if (f.deg() == 0) return roots;
        BigInt Q = F->size();
        UPoly x = UPoly::x(F);
        UPoly fr = f.monic();
        // strip X factors
        if (fr[0].is_zero()) {
            roots.push_back(F->zero());
            while (fr.deg() > 0 && fr[0].is_zero()) fr = fr / x;
        }
        if (fr.deg() > 0) {
            UPoly xq = upoly_pow_mod(x, Q, fr);
            UPoly lin = upoly_gcd(xq - x, fr);
            if (lin.deg() > 0) {
                auto rng = detail::seeded_rng({0x726f6f74ULL, seed, F->p(), F->e(), F->m()});
                std::vector<UPoly> parts;
                equal_degree_split(lin, 1, rng, parts);
                for (const auto& g : parts) roots.push_back(F->neg(g[0]));
            }
        }
        std::sort(roots.begin(), roots.end(), [&](const FieldElement& a, const FieldElement& b) {
            return F->index_of(a) < F->index_of(b);
        });
        return roots;
    }

    /** multiplicity of `root` in f (order of vanishing), by repeated division */
    inline uint32_t vanishing_order(const UPoly& f, const FieldElement& root)
    {
        if (f.is_zero()) throw invalid_input("vanishing order in zero polynomial");
        const FieldPtr& F = f.field();
        UPoly lin(F, {F->neg(root), F->one()});
        UPoly g = f;
        uint32_t ord = 0;
        while (g.deg() >= 1) {
            auto [q, r] = g.divmod(lin);
            if (!r.is_zero()) break;
            ++ord;
            g = q;
        }
        return ord;
    }

    // ---------------------------------------------------------------------------
    //  linear algebra over the ground field
    // ---------------------------------------------------------------------------

    /**
     * Incremental echelon solver over F_q for vectors in F_q^m presented as
     * elements of a tower field.  Supports rank growth and expressing a target
     * in the added vectors (used for minimal polynomials and canonical keys).
     */
    class GroundSolver
    {
    public:
        explicit GroundSolver(FieldPtr f) : F_(std::move(f)), e_(F_->e()), m_(F_->m()) {}

        uint32_t rank() const { return (uint32_t)rows_.size(); }
        uint32_t added() const { return added_; }

        /** add vector; returns true if the rank grew */
        bool add(const FieldElement& v)
        {
            std::vector<uint32_t> row(v.coords());
            std::vector<uint32_t> combo(((size_t)added_ + 1) * e_, 0);
            combo[(size_t)added_ * e_ + 0] = 1;   // coefficient 1 on the new vector
            ++added_;
            reduce(row, combo);
            for (auto& r : combos_) r.resize((size_t)added_ * e_, 0);
            if (row_is_zero(row)) {
                last_dependency_ = std::move(combo);
                return false;
            }
            int piv = pivot_of(row);
            normalize(row, combo, piv);
            rows_.push_back(std::move(row));
            combos_.push_back(std::move(combo));
            pivots_.push_back(piv);
            return true;
        }

        /**
         * F_q-coefficients on the added vectors reproducing the last dependent
         * add() (only valid right after add() returned false).  Length
         * added() ground elements; the last coefficient is 1.
         */
        std::vector<FieldElement> last_dependency() const
        {
            return unpack(last_dependency_);
        }

        /** express target in the added vectors, if possible */
        std::optional<std::vector<FieldElement>> express(const FieldElement& v) const
        {
            std::vector<uint32_t> row(v.coords());
            std::vector<uint32_t> combo((size_t)added_ * e_, 0);
            reduce(row, combo);
            if (!row_is_zero(row)) return std::nullopt;
            // row reduced to zero: v = -combo . added  (combo tracks v - sum)
            auto out = unpack(combo);
            FieldPtr gf = F_->ground_field();
            for (auto& c : out) c = gf->neg(c);
            return out;
        }

    private:
        bool row_is_zero(const std::vector<uint32_t>& row) const
        {
            for (uint32_t i = 0; i < m_; ++i)
                if (!F_->g_is_zero(row.data() + (size_t)i * e_)) return false;
            return true;
        }
        int pivot_of(const std::vector<uint32_t>& row) const
        {
            for (uint32_t i = 0; i < m_; ++i)
                if (!F_->g_is_zero(row.data() + (size_t)i * e_)) return (int)i;
            return -1;
        }
        void normalize(std::vector<uint32_t>& row, std::vector<uint32_t>& combo, int piv)
        {
            uint32_t invv[ExtensionField::max_e], tmp[ExtensionField::max_e];
            F_->g_inv(row.data() + (size_t)piv * e_, invv);
            for (uint32_t i = 0; i < m_; ++i) {
                F_->g_mul(row.data() + (size_t)i * e_, invv, tmp);
                std::copy(tmp, tmp + e_, row.data() + (size_t)i * e_);
            }
            for (size_t i = 0; i * e_ < combo.size(); ++i) {
                F_->g_mul(combo.data() + i * e_, invv, tmp);
                std::copy(tmp, tmp + e_, combo.data() + i * e_);
            }
        }
        void reduce(std::vector<uint32_t>& row, std::vector<uint32_t>& combo) const
        {
            uint32_t f[ExtensionField::max_e], tmp[ExtensionField::max_e];
            for (size_t k = 0; k < rows_.size(); ++k) {
                int piv = pivots_[k];
                const uint32_t* cell = row.data() + (size_t)piv * e_;
                if (F_->g_is_zero(cell)) continue;
                std::copy(cell, cell + e_, f);
                for (uint32_t i = 0; i < m_; ++i) {
                    F_->g_mul(rows_[k].data() + (size_t)i * e_, f, tmp);
                    F_->g_sub(row.data() + (size_t)i * e_, tmp, row.data() + (size_t)i * e_);
                }
                for (size_t i = 0; i * e_ < combos_[k].size() && i * e_ < combo.size(); ++i) {
                    F_->g_mul(combos_[k].data() + i * e_, f, tmp);
                    F_->g_sub(combo.data() + i * e_, tmp, combo.data() + i * e_);
                }
            }
        }
        std::vector<FieldElement> unpack(const std::vector<uint32_t>& combo) const
        {
            FieldPtr gf = F_->ground_field();
            std::vector<FieldElement> out;
            for (size_t i = 0; i * e_ < combo.size(); ++i) {
                std::vector<std::vector<uint32_t>> rows(1, std::vector<uint32_t>(
                    combo.begin() + i * e_, combo.begin() + (i + 1) * e_));
                out.push_back(gf->from_coords(rows));
            }
            return out;
        }

        FieldPtr F_;
        uint32_t e_, m_;
        std::vector<std::vector<uint32_t>> rows_, combos_;
        std::vector<int> pivots_;
        std::vector<uint32_t> last_dependency_;
        uint32_t added_ = 0;
    };

    /** minimal polynomial of x over the ground field F_q, monic, as a UPoly over ground_field() */
    inline UPoly minpoly_over_ground(const FieldElement& x)
    {
        const FieldPtr& F = x.field();
        GroundSolver solver(F);
        FieldElement pw = F->one();
        for (uint32_t t = 0; t <= F->m(); ++t) {
            if (!solver.add(pw)) {
                auto dep = solver.last_dependency();   // sum dep_j x^j = 0, dep_t = 1
                return UPoly(F->ground_field(), std::move(dep));
            }
            pw = pw * x;
        }
        throw check_failed("minpoly_over_ground: no dependency up to m");
    }

    // ---------------------------------------------------------------------------
    //  field construction
    // ---------------------------------------------------------------------------
    inline FieldPtr ExtensionField::ground_field() const
    {
        if (m_ == 1) return shared_from_this();
        return ground_;
    }

    inline FieldPtr ExtensionField::create(uint32_t p, uint32_t e, uint32_t m, uint64_t seed)
    {
        if (!detail::is_prime_u32(p) || p > max_p) throw invalid_input("p must be a small prime");
        if (e < 1 || e > max_e) throw invalid_input("e out of range");
        if (m < 1 || m > max_m) throw invalid_input("m out of range");
        if (std::pow((double)p, (double)e) > (double)(1u << 20)) throw invalid_input("q too large");

        // ground modulus over F_p (canonical y for e == 1; seeded search otherwise).
        std::vector<uint32_t> gmod;
        if (e == 1) {
            gmod = {0, 1};
        } else {
            auto fp = FieldPtr(new ExtensionField(p, 1, 1, {0, 1}, {0, 1}, nullptr));
            auto rng = detail::seeded_rng({0x67726d6fULL, p, e, seed});
            bool found = false;
            for (int tries = 0; tries < 400 * (int)e; ++tries) {
                UPoly cand = UPoly::random_monic(fp, e, rng);
                if (upoly_irreducible(cand)) {
                    gmod.assign(e + 1, 0);
                    for (int i = 0; i <= cand.deg(); ++i) gmod[i] = cand[i].coords()[0];
                    found = true;
                    break;
                }
            }
            if (!found) throw cap_exceeded("no irreducible ground modulus found within retry cap");
        }

        std::vector<uint32_t> zmod((size_t)2 * e, 0);   // canonical modulus z for m == 1
        zmod[e] = 1;                                    // rows: [0], [1]
        FieldPtr base(new ExtensionField(p, e, 1, gmod, zmod, nullptr));
        if (m == 1) return base;

        auto rng = detail::seeded_rng({0x6d6f6475ULL, p, e, m, seed});
        for (int tries = 0; tries < 400 * (int)m; ++tries) {
            UPoly cand = UPoly::random_monic(base, m, rng);
            if (!upoly_irreducible(cand)) continue;
            std::vector<uint32_t> mod((size_t)(m + 1) * e, 0);
            for (int i = 0; i <= cand.deg(); ++i)
                std::copy(cand[i].coords().begin(), cand[i].coords().end(), mod.begin() + (size_t)i * e);
            return FieldPtr(new ExtensionField(p, e, m, gmod, std::move(mod), base));
        }
        throw cap_exceeded("no irreducible modulus found within retry cap");
    }

    inline FieldPtr ExtensionField::residue_extension(const FieldPtr& ground, const UPoly& g)
    {
        if (ground->m() != 1) throw invalid_input("residue_extension: ground must be an m == 1 field");
        if (g.deg() < 1) throw invalid_input("residue_extension: modulus must have degree >= 1");
        if (!(g.lead() == ground->one())) throw invalid_input("residue_extension: modulus must be monic");
        uint32_t m = (uint32_t)g.deg(), e = ground->e();
        std::vector<uint32_t> mod((size_t)(m + 1) * e, 0);
        for (int i = 0; i <= g.deg(); ++i)
            std::copy(g[i].coords().begin(), g[i].coords().end(), mod.begin() + (size_t)i * e);
        if (m == 1)
            return FieldPtr(new ExtensionField(ground->p(), e, 1, ground->ground_modulus(),
                                               std::move(mod), nullptr));
        return FieldPtr(new ExtensionField(ground->p(), e, m, ground->ground_modulus(),
                                           std::move(mod), ground));
    }
}

#endif
