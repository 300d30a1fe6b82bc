#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "bcp/algebraic.hpp"
#include "bcp/polynomial.hpp"

namespace bcp {

// ── exact sign helpers for quadratic surds ──────────────────────────

// sign(a + b*sqrt(d)), d >= 0
int sign_lin_surd(const Rational& a, const Rational& b, const Rational& d);
// sign(a + b*sqrt(d) + c*sqrt(e)), d, e >= 0
int sign_two_surd(const Rational& a, const Rational& b, const Rational& d, const Rational& c,
                  const Rational& e);

// Value p + q*sqrt(d) with rational p, q and d >= 0.
struct SurdValue {
    Rational p, q, d;

    static SurdValue rational(Rational v) { return {std::move(v), Rational(0), Rational(0)}; }
    bool is_rational() const { return q == 0 || d == 0; }
    Rational rational_value() const { return p; }

    int compare(const SurdValue& o) const {
        return sign_two_surd(p - o.p, q, d, Rational(-o.q), o.d);
    }
    int compare(const Rational& t) const { return sign_lin_surd(p - t, q, d); }
    double approx() const;
};

// Rational strictly between two exact values a < b.
Rational rational_between_surds(const SurdValue& a, const SurdValue& b);
// Rational enclosure [lo, hi] of the value with hi - lo <= width.
void surd_enclosure(const SurdValue& v, const Rational& width, Rational& lo, Rational& hi);

// ── bivariate polynomials g(x, y), stored as polynomials in x per y-power ──

struct PolynomialXY {
    std::vector<UPoly> ycoef;  // ycoef[j] multiplies y^j

    void trim() {
        while (!ycoef.empty() && ycoef.back().is_zero()) ycoef.pop_back();
    }
    bool is_zero() const { return ycoef.empty(); }
    int deg_y() const { return static_cast<int>(ycoef.size()) - 1; }
    int total_degree() const;

    Rational eval(const Rational& x, const Rational& y) const;
    // Evaluate at (x, v) for a surd y-value; exact sign.  Requires deg_y <= 2.
    int sign_at_surd(const Rational& x, const SurdValue& v) const;
    // Coefficients of the univariate quadratic in y at a fixed x (deg_y <= 2).
    void subst_x(const Rational& x, Rational& A, Rational& B, Rational& C) const;
    // Coefficient polynomials as univariate in x (A y^2 + B y + C).
    void xpolys(UPoly& A, UPoly& B, UPoly& C) const;
    PolynomialXY reflected_y() const;  // g(x, -y)
    PolynomialXY negated() const;
    bool equal(const PolynomialXY& o) const;
    std::string debug_string() const;
};

// Resultant of f and g with respect to y: univariate in x.
UPoly resultant_y(const PolynomialXY& f, const PolynomialXY& g);

// Real y-values on the curve g(x0, .) = 0, ascending.  Requires deg_y(g) <= 2.
std::vector<SurdValue> y_roots_at(const PolynomialXY& g, const Rational& x0);

// ── points and ranges ───────────────────────────────────────────────

struct Point2 {
    Rational x, y;
    int id = -1;
};

enum class Family { halfplane, disk, parabolic, annulus, custom };
std::string family_name(Family f);
Family family_from_name(const std::string& s);
int family_dimension(Family f, int declared_params);

enum class AtomKind { halfplane, disk, parabola };

// Symbolic atom: a polynomial template in (x1, x2) and referenced parameters.
// negate flips the polynomial; strictness is tracked separately per instance.
struct AtomTemplate {
    AtomKind kind;
    std::vector<int> param_idx;  // halfplane: {a,b}; disk/parabola: {a,b,c}
    bool negate = false;
};

// Instantiated atom: integer-coefficient polynomial, compared to zero.
struct Atom {
    PolynomialXY g;
    bool strict = false;  // true: g > 0, false: g >= 0
};

// Boolean shape over atom indices (<= 8 leaves).
struct BoolShape {
    enum class Op { leaf, conj, disj, neg };
    Op op = Op::leaf;
    int atom = 0;                    // leaf
    std::vector<BoolShape> children;  // conj/disj: >=2, neg: 1

    static BoolShape leaf_of(int a) {
        BoolShape s;
        s.op = Op::leaf;
        s.atom = a;
        return s;
    }
    int leaf_count() const;
};

struct RangeRegion {
    int id = -1;
    Family family = Family::custom;
    std::vector<Rational> params;
    std::vector<AtomTemplate> templates;
    BoolShape shape;
    std::vector<Atom> atoms;  // instantiated from templates + params

    int parametric_dimension() const { return static_cast<int>(params.size()); }
};

RangeRegion make_halfplane(int id, const Rational& a, const Rational& b);
RangeRegion make_disk(int id, const Rational& cx, const Rational& cy, const Rational& r2);
RangeRegion make_parabolic(int id, const Rational& a, const Rational& b, const Rational& c);
RangeRegion make_annulus(int id, const Rational& cx, const Rational& cy, const Rational& r2,
                         const Rational& R2);
RangeRegion make_custom(int id, std::vector<Rational> params, std::vector<AtomTemplate> templates,
                        BoolShape shape);

// Instantiates atom polynomials from templates and parameters; validates degrees.
void instantiate_atoms(RangeRegion& r);

// Φ(σ, p): exact membership, boundary points of >=-atoms included.
bool point_in_range(const Point2& p, const RangeRegion& sigma);

// Evaluate the boolean shape given per-atom satisfaction values.
bool eval_shape(const BoolShape& s, const std::vector<bool>& atom_sat);

// Theorem size bound  m^{2s/(5s-4)} n^{(5s-6)/(5s-4)} + m^{2/3} n^{2/3} + m + n,
// subpolynomial factors set to one.  Rejects s < 2.
double evaluate_bound(long m, long n, int s);
// The pair of exponents (on m and n) of the leading mixed term, for reporting.
std::pair<double, double> bound_exponents(int s);

}  // namespace bcp
