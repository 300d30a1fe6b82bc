#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "bcp/errors.hpp"

namespace bcp {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
    if (den == 0) throw InvalidInput("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Rational make_rational(const Integer& num, const Integer& den) {
    if (den == 0) throw InvalidInput("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline int sign_of(const Rational& q) { return sgn(q); }
inline int sign_of(const Integer& z) { return sgn(z); }

inline Rational rational_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

// Parses "n" or "n/d".
inline Rational parse_rational(const std::string& s) {
    try {
        Rational q(s);
        if (q.get_den() == 0) throw InvalidInput("zero denominator in '" + s + "'");
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw InvalidInput("cannot parse rational '" + s + "'");
    }
}

// Canonical text form: "n" when integral, else "n/d".
inline std::string rational_to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline double to_double(const Rational& q) { return q.get_d(); }

}  // namespace bcp
