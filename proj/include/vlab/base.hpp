#ifndef VLAB_BASE_HPP
#define VLAB_BASE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <boost/multiprecision/cpp_int.hpp>

namespace vlab
{
    using BigInt   = boost::multiprecision::cpp_int;
    using Rational = boost::multiprecision::cpp_rational;

    // Bad user-supplied data (malformed files, out-of-domain parameters). CLI exit 2.
    struct invalid_input : std::invalid_argument
    {
        explicit invalid_input(const std::string& w) : std::invalid_argument(w) {}
    };

    // A configured resource cap was hit before the computation finished. CLI exit 3.
    struct cap_exceeded : std::runtime_error
    {
        explicit cap_exceeded(const std::string& w) : std::runtime_error(w) {}
    };

    // An internal completeness/consistency certificate failed.  Never swallowed:
    // callers either crash or surface the payload as a counterexample. CLI exit 1.
    struct check_failed : std::runtime_error
    {
        explicit check_failed(const std::string& w) : std::runtime_error(w) {}
    };

    // canonical "a/b" with b > 0 (cpp_rational already keeps gcd(a,b)=1, b>0)
    inline std::string frac_str(const Rational& r)
    {
        return boost::multiprecision::numerator(r).str() + "/" +
               boost::multiprecision::denominator(r).str();
    }

    inline Rational make_frac(const BigInt& num, const BigInt& den)
    {
        if (den == 0)
            throw invalid_input("rational with zero denominator");
        return Rational(num, den);
    }

    inline BigInt big_pow(BigInt base, uint64_t exp)
    {
        BigInt r = 1;
        while (exp) {
            if (exp & 1) r *= base;
            base *= base;
            exp >>= 1;
        }
        return r;
    }
}

#endif
