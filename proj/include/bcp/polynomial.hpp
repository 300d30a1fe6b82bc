#pragma once

#include <optional>
#include <vector>

#include "bcp/rational.hpp"

namespace bcp {

// Univariate polynomial with integer coefficients, c[i] * x^i, no leading zeros.
struct UPoly {
    std::vector<Integer> c;

    UPoly() = default;
    explicit UPoly(std::vector<Integer> coeffs) : c(std::move(coeffs)) { trim(); }

    static UPoly constant(const Integer& v) { return UPoly({v}); }

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }
    const Integer& leading() const { return c.back(); }

    Rational eval(const Rational& x) const {
        Rational acc = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
        return acc;
    }
    Integer eval_int(const Integer& x) const {
        Integer acc = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
        return acc;
    }
    int sign_at(const Rational& x) const { return sign_of(eval(x)); }
    // Sign of the leading behaviour at +inf / -inf.
    int sign_at_pos_inf() const { return is_zero() ? 0 : sign_of(leading()); }
    int sign_at_neg_inf() const {
        if (is_zero()) return 0;
        int s = sign_of(leading());
        return (degree() % 2 == 0) ? s : -s;
    }
};

UPoly upoly_add(const UPoly& a, const UPoly& b);
UPoly upoly_sub(const UPoly& a, const UPoly& b);
UPoly upoly_mul(const UPoly& a, const UPoly& b);
UPoly upoly_neg(const UPoly& a);
UPoly upoly_scale(const UPoly& a, const Integer& k);
UPoly upoly_derivative(const UPoly& a);
bool upoly_equal(const UPoly& a, const UPoly& b);

Integer upoly_content(const UPoly& a);
// Divides out the content; leading coefficient made positive.
UPoly upoly_primitive(const UPoly& a);

// gcd of a and b, primitive with positive leading coefficient.  gcd(0,0) = 0.
UPoly upoly_gcd(const UPoly& a, const UPoly& b);
// a / gcd(a, a'): same real roots, all simple.
UPoly upoly_squarefree(const UPoly& a);

// Sturm chain of a squarefree polynomial (each entry primitive).
struct SturmChain {
    std::vector<UPoly> seq;
    static SturmChain build(const UPoly& squarefree);
    int variations_at(const Rational& x) const;
    int variations_neg_inf() const;
    int variations_pos_inf() const;
    // Number of roots in (a, b]; requires seq[0](a) != 0.
    int count_roots_half_open(const Rational& a, const Rational& b) const;
    // Number of roots in (-inf, b].
    int count_roots_below(const Rational& b) const;
    int count_real_roots() const;
};

// Strictly larger than the absolute value of every real root.
Rational cauchy_root_bound(const UPoly& p);

// Exact rational interval enclosing the polynomial's range over [lo, hi].
struct RatInterval {
    Rational lo, hi;
};
RatInterval upoly_range_on(const UPoly& p, const Rational& lo, const Rational& hi);

struct IsolatedRoot {
    // Either an exact rational root, or an open isolating interval (lo, hi)
    // with p(lo) != 0, p(hi) != 0 and exactly one root inside.
    std::optional<Rational> exact;
    Rational lo, hi;
};

// Isolating intervals for all distinct real roots of p (any p != 0), in increasing order.
std::vector<IsolatedRoot> upoly_isolate_roots(const UPoly& p);

}  // namespace bcp
