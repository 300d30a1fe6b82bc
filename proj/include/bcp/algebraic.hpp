#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "bcp/polynomial.hpp"

namespace bcp {

// A real algebraic number: the unique root of a squarefree integer polynomial
// inside an open isolating interval.  The interval refines lazily under a lock,
// so values are shareable across threads.
class AlgebraicNumber {
public:
    AlgebraicNumber(UPoly squarefree_poly, Rational lo, Rational hi);

    const UPoly& poly() const { return poly_; }
    // Snapshot of the current isolating interval.
    void interval(Rational& lo, Rational& hi) const;
    // Shrinks the isolating interval below the given width.
    void refine_below(const Rational& width) const;
    // If bisection ever lands exactly on the root, the value is rational.
    std::optional<Rational> exact_value() const;

    // Total-order comparison against a rational: -1, 0, +1.
    int compare(const Rational& q) const;
    int compare(const AlgebraicNumber& other) const;

    // Sign of an arbitrary integer polynomial evaluated at this number.
    int sign_of_poly(const UPoly& f) const;

    double approx() const;
    std::string debug_string() const;

private:
    void refine_once_locked() const;

    UPoly poly_;  // squarefree, primitive, positive leading coefficient
    mutable SturmChain chain_;
    mutable std::mutex mu_;
    mutable Rational lo_, hi_;
    mutable std::optional<Rational> exact_;
};

using AlgebraicPtr = std::shared_ptr<const AlgebraicNumber>;

// Abscissa on the extended real line: -inf, a rational, an algebraic number, or +inf.
class Abscissa {
public:
    enum class Kind { NegInf, Rat, Alg, PosInf };

    Abscissa() : kind_(Kind::Rat), rat_(0) {}
    static Abscissa neg_inf() { return Abscissa(Kind::NegInf); }
    static Abscissa pos_inf() { return Abscissa(Kind::PosInf); }
    static Abscissa rational(Rational q) {
        Abscissa a(Kind::Rat);
        a.rat_ = std::move(q);
        return a;
    }
    static Abscissa algebraic(AlgebraicPtr p);

    Kind kind() const { return kind_; }
    bool finite() const { return kind_ == Kind::Rat || kind_ == Kind::Alg; }
    bool is_rational() const { return kind_ == Kind::Rat; }
    const Rational& rat() const { return rat_; }
    const AlgebraicPtr& alg() const { return alg_; }

    int compare(const Abscissa& o) const;
    int compare(const Rational& q) const;
    bool operator<(const Abscissa& o) const { return compare(o) < 0; }
    bool operator==(const Abscissa& o) const { return compare(o) == 0; }
    bool operator<=(const Abscissa& o) const { return compare(o) <= 0; }

    double approx() const;
    std::string debug_string() const;

private:
    explicit Abscissa(Kind k) : kind_(k), rat_(0) {}
    Kind kind_;
    Rational rat_;
    AlgebraicPtr alg_;
};

// A rational strictly between a < b (either may be infinite).
Rational rational_between(const Abscissa& a, const Abscissa& b);

// Roots of p as abscissae (rational where the isolator says so), increasing.
std::vector<Abscissa> poly_real_roots(const UPoly& p);

}  // namespace bcp
