#include "bcp/geometry.hpp"

#include <cmath>
#include <sstream>

#include "bcp/errors.hpp"

namespace bcp {

int sign_lin_surd(const Rational& a, const Rational& b, const Rational& d) {
    if (sign_of(d) < 0) throw InvariantViolation("negative radicand");
    if (b == 0 || d == 0) return sign_of(a);
    int sb = sign_of(b);
    int sa = sign_of(a);
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    int t = sign_of(Rational(a * a - b * b * d));
    return t == 0 ? 0 : (t > 0 ? sa : sb);
}

int sign_two_surd(const Rational& a, const Rational& b, const Rational& d, const Rational& c,
                  const Rational& e) {
    if (c == 0 || e == 0) return sign_lin_surd(a, b, d);
    if (b == 0 || d == 0) return sign_lin_surd(a, c, e);
    int s1 = sign_lin_surd(a, b, d);  // sign of a + b sqrt(d)
    int s2 = sign_of(c);              // sign of c sqrt(e)
    if (s1 == 0) return s2;
    if (s1 == s2) return s1;
    // compare |a + b sqrt(d)| with |c| sqrt(e):  (a+b sqrt d)^2 vs c^2 e
    int t = sign_lin_surd(a * a + b * b * d - c * c * e, 2 * a * b, d);
    return t == 0 ? 0 : (t > 0 ? s1 : s2);
}

double SurdValue::approx() const { return to_double(p) + to_double(q) * std::sqrt(to_double(d)); }

namespace {
// enclosure of sqrt(d) within width w
void sqrt_enclosure(const Rational& d, const Rational& w, Rational& lo, Rational& hi) {
    if (d == 0) {
        lo = hi = 0;
        return;
    }
    lo = 0;
    hi = d < 1 ? Rational(1) : d;
    while (hi - lo > w) {
        Rational mid = (lo + hi) / 2;
        if (mid * mid <= d)
            lo = mid;
        else
            hi = mid;
    }
}
}  // namespace

void surd_enclosure(const SurdValue& v, const Rational& width, Rational& lo, Rational& hi) {
    if (v.q == 0 || v.d == 0) {
        lo = hi = v.p;
        return;
    }
    Rational sl, sh;
    Rational w = width / (rational_abs(v.q) * 2 + 1);
    sqrt_enclosure(v.d, w, sl, sh);
    if (v.q > 0) {
        lo = v.p + v.q * sl;
        hi = v.p + v.q * sh;
    } else {
        lo = v.p + v.q * sh;
        hi = v.p + v.q * sl;
    }
}

Rational rational_between_surds(const SurdValue& a, const SurdValue& b) {
    if (a.compare(b) >= 0) throw InvariantViolation("rational_between_surds needs a < b");
    Rational w(1, 2);
    for (int round = 0; round < 512; ++round) {
        Rational alo, ahi, blo, bhi;
        surd_enclosure(a, w, alo, ahi);
        surd_enclosure(b, w, blo, bhi);
        if (ahi < blo) return Rational((ahi + blo) / 2);
        if (a.is_rational() && b.is_rational()) return Rational((a.p + b.p) / 2);
        w /= 4;
    }
    throw InvariantViolation("rational_between_surds failed to separate");
}

int PolynomialXY::total_degree() const {
    int best = -1;
    for (size_t j = 0; j < ycoef.size(); ++j)
        if (!ycoef[j].is_zero()) best = std::max(best, ycoef[j].degree() + static_cast<int>(j));
    return best;
}

Rational PolynomialXY::eval(const Rational& x, const Rational& y) const {
    Rational acc = 0;
    for (auto it = ycoef.rbegin(); it != ycoef.rend(); ++it) acc = acc * y + it->eval(x);
    return acc;
}

int PolynomialXY::sign_at_surd(const Rational& x, const SurdValue& v) const {
    if (deg_y() > 2) throw InvariantViolation("sign_at_surd requires deg_y <= 2");
    Rational A, B, C;
    subst_x(x, A, B, C);
    // A v^2 + B v + C with v = p + q sqrt(d):
    // v^2 = p^2 + q^2 d + 2pq sqrt(d)
    Rational rat = A * (v.p * v.p + v.q * v.q * v.d) + B * v.p + C;
    Rational irr = A * 2 * v.p * v.q + B * v.q;
    return sign_lin_surd(rat, irr, v.d);
}

void PolynomialXY::subst_x(const Rational& x, Rational& A, Rational& B, Rational& C) const {
    A = B = C = 0;
    if (ycoef.size() > 2) A = ycoef[2].eval(x);
    if (ycoef.size() > 1) B = ycoef[1].eval(x);
    if (ycoef.size() > 0) C = ycoef[0].eval(x);
    if (deg_y() > 2) throw InvariantViolation("subst_x requires deg_y <= 2");
}

void PolynomialXY::xpolys(UPoly& A, UPoly& B, UPoly& C) const {
    A = ycoef.size() > 2 ? ycoef[2] : UPoly();
    B = ycoef.size() > 1 ? ycoef[1] : UPoly();
    C = ycoef.size() > 0 ? ycoef[0] : UPoly();
}

PolynomialXY PolynomialXY::reflected_y() const {
    PolynomialXY r = *this;
    for (size_t j = 1; j < r.ycoef.size(); j += 2) r.ycoef[j] = upoly_neg(r.ycoef[j]);
    return r;
}

PolynomialXY PolynomialXY::negated() const {
    PolynomialXY r = *this;
    for (auto& c : r.ycoef) c = upoly_neg(c);
    return r;
}

bool PolynomialXY::equal(const PolynomialXY& o) const {
    if (ycoef.size() != o.ycoef.size()) return false;
    for (size_t i = 0; i < ycoef.size(); ++i)
        if (!upoly_equal(ycoef[i], o.ycoef[i])) return false;
    return true;
}

std::string PolynomialXY::debug_string() const {
    std::ostringstream os;
    os << "poly[deg_y=" << deg_y() << "]";
    return os.str();
}

UPoly resultant_y(const PolynomialXY& f, const PolynomialXY& g) {
    int df = f.deg_y(), dg = g.deg_y();
    if (df < 0 || dg < 0) return UPoly();
    if (df == 0) {
        // res(C_f, g) = C_f^{dg}
        UPoly r = UPoly::constant(1);
        for (int i = 0; i < dg; ++i) r = upoly_mul(r, f.ycoef[0]);
        return r;
    }
    if (dg == 0) {
        UPoly r = UPoly::constant(1);
        for (int i = 0; i < df; ++i) r = upoly_mul(r, g.ycoef[0]);
        return r;
    }
    int n = df + dg;
    // Sylvester matrix rows: dg rows of f-coefficients, df rows of g-coefficients.
    std::vector<std::vector<UPoly>> M(n, std::vector<UPoly>(n));
    for (int r = 0; r < dg; ++r)
        for (int j = 0; j <= df; ++j) M[r][r + j] = f.ycoef[df - j];
    for (int r = 0; r < df; ++r)
        for (int j = 0; j <= dg; ++j) M[dg + r][r + j] = g.ycoef[dg - j];
    // Laplace expansion; n <= 4 in practice.
    std::vector<int> cols(n);
    for (int i = 0; i < n; ++i) cols[i] = i;
    struct Det {
        static UPoly compute(const std::vector<std::vector<UPoly>>& M, std::vector<int>& cols,
                             int row) {
            int n = static_cast<int>(M.size());
            if (row == n) return UPoly::constant(1);
            UPoly acc;
            for (size_t k = 0; k < cols.size(); ++k) {
                int col = cols[k];
                if (M[row][col].is_zero()) continue;
                std::vector<int> rest;
                rest.reserve(cols.size() - 1);
                for (size_t t = 0; t < cols.size(); ++t)
                    if (t != k) rest.push_back(cols[t]);
                UPoly sub = compute(M, rest, row + 1);
                UPoly term = upoly_mul(M[row][col], sub);
                if (k % 2 == 1) term = upoly_neg(term);
                acc = upoly_add(acc, term);
            }
            return acc;
        }
    };
    return Det::compute(M, cols, 0);
}

std::vector<SurdValue> y_roots_at(const PolynomialXY& g, const Rational& x0) {
    Rational A, B, C;
    g.subst_x(x0, A, B, C);
    std::vector<SurdValue> out;
    if (A == 0) {
        if (B == 0) return out;  // no y-dependence at x0
        out.push_back(SurdValue::rational(Rational(-C / B)));
        return out;
    }
    Rational disc = B * B - 4 * A * C;
    int sd = sign_of(disc);
    if (sd < 0) return out;
    Rational half = Rational(-B / (2 * A));
    if (sd == 0) {
        out.push_back(SurdValue::rational(half));
        return out;
    }
    Rational mag = Rational(1 / (2 * A));
    SurdValue r1{half, -rational_abs(mag), disc};
    SurdValue r2{half, rational_abs(mag), disc};
    out.push_back(r1);
    out.push_back(r2);
    return out;
}

std::string family_name(Family f) {
    switch (f) {
        case Family::halfplane: return "halfplane";
        case Family::disk: return "disk";
        case Family::parabolic: return "parabolic";
        case Family::annulus: return "annulus";
        case Family::custom: return "custom";
    }
    return "?";
}

Family family_from_name(const std::string& s) {
    if (s == "halfplane") return Family::halfplane;
    if (s == "disk") return Family::disk;
    if (s == "parabolic") return Family::parabolic;
    if (s == "annulus") return Family::annulus;
    if (s == "custom") return Family::custom;
    throw InvalidInput("unknown family '" + s + "'");
}

int family_dimension(Family f, int declared_params) {
    switch (f) {
        case Family::halfplane: return 2;
        case Family::disk: return 3;
        case Family::parabolic: return 3;
        case Family::annulus: return 4;
        case Family::custom: return declared_params;
    }
    return declared_params;
}

int BoolShape::leaf_count() const {
    if (op == Op::leaf) return 1;
    int n = 0;
    for (const auto& c : children) n += c.leaf_count();
    return n;
}

namespace {

// Builds the integer polynomial of an atom template instantiated with parameters.
PolynomialXY instantiate_template(const AtomTemplate& t, const std::vector<Rational>& params) {
    auto P = [&](int i) -> const Rational& {
        if (i < 0 || i >= static_cast<int>(params.size()))
            throw InvalidInput("atom template references missing parameter");
        return params[static_cast<size_t>(i)];
    };
    // assemble with rational coefficients first: ycoef[j] as vector<Rational> in x
    std::vector<std::vector<Rational>> yc;
    auto set = [&](int j, int i, const Rational& v) {
        if (static_cast<int>(yc.size()) <= j) yc.resize(j + 1);
        if (static_cast<int>(yc[j].size()) <= i) yc[j].resize(i + 1, Rational(0));
        yc[j][i] += v;
    };
    switch (t.kind) {
        case AtomKind::halfplane: {
            // y - a x - b
            const Rational &a = P(t.param_idx.at(0)), &b = P(t.param_idx.at(1));
            set(1, 0, Rational(1));
            set(0, 1, Rational(-a));
            set(0, 0, Rational(-b));
            break;
        }
        case AtomKind::disk: {
            // c - (x-a)^2 - (y-b)^2
            const Rational &a = P(t.param_idx.at(0)), &b = P(t.param_idx.at(1)),
                           &c = P(t.param_idx.at(2));
            set(0, 0, Rational(c - a * a - b * b));
            set(0, 1, Rational(2 * a));
            set(0, 2, Rational(-1));
            set(1, 0, Rational(2 * b));
            set(2, 0, Rational(-1));
            break;
        }
        case AtomKind::parabola: {
            // y - a x^2 - b x - c
            const Rational &a = P(t.param_idx.at(0)), &b = P(t.param_idx.at(1)),
                           &c = P(t.param_idx.at(2));
            set(1, 0, Rational(1));
            set(0, 2, Rational(-a));
            set(0, 1, Rational(-b));
            set(0, 0, Rational(-c));
            break;
        }
    }
    // clear denominators
    Integer den(1);
    for (auto& row : yc)
        for (auto& v : row) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den().get_mpz_t());
    PolynomialXY g;
    g.ycoef.resize(yc.size());
    for (size_t j = 0; j < yc.size(); ++j) {
        std::vector<Integer> c(yc[j].size());
        for (size_t i = 0; i < yc[j].size(); ++i) {
            Rational scaled = yc[j][i] * Rational(den);
            c[i] = scaled.get_num();
        }
        g.ycoef[j] = UPoly(std::move(c));
    }
    g.trim();
    if (t.negate) g = g.negated();
    return g;
}

void validate_shape(const BoolShape& s, int atom_count) {
    switch (s.op) {
        case BoolShape::Op::leaf:
            if (s.atom < 0 || s.atom >= atom_count) throw InvalidInput("shape leaf out of range");
            return;
        case BoolShape::Op::neg:
            if (s.children.size() != 1) throw InvalidInput("negation needs one child");
            break;
        case BoolShape::Op::conj:
        case BoolShape::Op::disj:
            if (s.children.size() < 2) throw InvalidInput("conj/disj need >= 2 children");
            break;
    }
    for (const auto& c : s.children) validate_shape(c, atom_count);
}

}  // namespace

void instantiate_atoms(RangeRegion& r) {
    r.atoms.clear();
    for (const auto& t : r.templates) {
        Atom a;
        a.g = instantiate_template(t, r.params);
        a.strict = false;
        if (a.g.is_zero()) throw InvalidInput("atom polynomial is identically zero");
        if (a.g.total_degree() > 4) throw InvalidInput("atom degree exceeds 4");
        if (a.g.deg_y() < 1 || a.g.deg_y() > 2)
            throw InvalidInput("atom must have y-degree 1 or 2");
        r.atoms.push_back(std::move(a));
    }
    if (r.shape.leaf_count() > 8) throw InvalidInput("boolean shape exceeds 8 leaves");
    validate_shape(r.shape, static_cast<int>(r.atoms.size()));
}

RangeRegion make_halfplane(int id, const Rational& a, const Rational& b) {
    RangeRegion r;
    r.id = id;
    r.family = Family::halfplane;
    r.params = {a, b};
    r.templates = {{AtomKind::halfplane, {0, 1}, false}};
    r.shape = BoolShape::leaf_of(0);
    instantiate_atoms(r);
    return r;
}

RangeRegion make_disk(int id, const Rational& cx, const Rational& cy, const Rational& r2) {
    RangeRegion r;
    r.id = id;
    r.family = Family::disk;
    r.params = {cx, cy, r2};
    r.templates = {{AtomKind::disk, {0, 1, 2}, false}};
    r.shape = BoolShape::leaf_of(0);
    instantiate_atoms(r);
    return r;
}

RangeRegion make_parabolic(int id, const Rational& a, const Rational& b, const Rational& c) {
    RangeRegion r;
    r.id = id;
    r.family = Family::parabolic;
    r.params = {a, b, c};
    r.templates = {{AtomKind::parabola, {0, 1, 2}, false}};
    r.shape = BoolShape::leaf_of(0);
    instantiate_atoms(r);
    return r;
}

RangeRegion make_annulus(int id, const Rational& cx, const Rational& cy, const Rational& r2,
                         const Rational& R2) {
    RangeRegion r;
    r.id = id;
    r.family = Family::annulus;
    r.params = {cx, cy, r2, R2};
    r.templates = {{AtomKind::disk, {0, 1, 3}, false}, {AtomKind::disk, {0, 1, 2}, true}};
    BoolShape s;
    s.op = BoolShape::Op::conj;
    s.children = {BoolShape::leaf_of(0), BoolShape::leaf_of(1)};
    r.shape = s;
    instantiate_atoms(r);
    return r;
}

RangeRegion make_custom(int id, std::vector<Rational> params, std::vector<AtomTemplate> templates,
                        BoolShape shape) {
    RangeRegion r;
    r.id = id;
    r.family = Family::custom;
    r.params = std::move(params);
    r.templates = std::move(templates);
    r.shape = std::move(shape);
    instantiate_atoms(r);
    return r;
}

bool eval_shape(const BoolShape& s, const std::vector<bool>& atom_sat) {
    switch (s.op) {
        case BoolShape::Op::leaf: return atom_sat[static_cast<size_t>(s.atom)];
        case BoolShape::Op::neg: return !eval_shape(s.children[0], atom_sat);
        case BoolShape::Op::conj:
            for (const auto& c : s.children)
                if (!eval_shape(c, atom_sat)) return false;
            return true;
        case BoolShape::Op::disj:
            for (const auto& c : s.children)
                if (eval_shape(c, atom_sat)) return true;
            return false;
    }
    return false;
}

bool point_in_range(const Point2& p, const RangeRegion& sigma) {
    std::vector<bool> sat(sigma.atoms.size());
    for (size_t i = 0; i < sigma.atoms.size(); ++i) {
        int s = sign_of(sigma.atoms[i].g.eval(p.x, p.y));
        sat[i] = sigma.atoms[i].strict ? (s > 0) : (s >= 0);
    }
    return eval_shape(sigma.shape, sat);
}

std::pair<double, double> bound_exponents(int s) {
    if (s < 2) throw InvalidInput("parametric dimension must be >= 2");
    double den = 5.0 * s - 4.0;
    return {2.0 * s / den, (5.0 * s - 6.0) / den};
}

double evaluate_bound(long m, long n, int s) {
    auto [em, en] = bound_exponents(s);
    double dm = static_cast<double>(m), dn = static_cast<double>(n);
    double mixed = (m > 0 && n > 0) ? std::pow(dm, em) * std::pow(dn, en) : 0.0;
    double balanced = (m > 0 && n > 0) ? std::pow(dm, 2.0 / 3.0) * std::pow(dn, 2.0 / 3.0) : 0.0;
    return mixed + balanced + dm + dn;
}

}  // namespace bcp
