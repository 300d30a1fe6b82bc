#include "bcp/polynomial.hpp"

#include <algorithm>

#include "bcp/errors.hpp"

namespace bcp {

UPoly upoly_add(const UPoly& a, const UPoly& b) {
    std::vector<Integer> c(std::max(a.c.size(), b.c.size()), Integer(0));
    for (size_t i = 0; i < a.c.size(); ++i) c[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) c[i] += b.c[i];
    return UPoly(std::move(c));
}

UPoly upoly_sub(const UPoly& a, const UPoly& b) {
    std::vector<Integer> c(std::max(a.c.size(), b.c.size()), Integer(0));
    for (size_t i = 0; i < a.c.size(); ++i) c[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) c[i] -= b.c[i];
    return UPoly(std::move(c));
}

UPoly upoly_mul(const UPoly& a, const UPoly& b) {
    if (a.is_zero() || b.is_zero()) return UPoly();
    std::vector<Integer> c(a.c.size() + b.c.size() - 1, Integer(0));
    for (size_t i = 0; i < a.c.size(); ++i)
        for (size_t j = 0; j < b.c.size(); ++j) c[i + j] += a.c[i] * b.c[j];
    return UPoly(std::move(c));
}

UPoly upoly_neg(const UPoly& a) {
    UPoly r = a;
    for (auto& v : r.c) v = -v;
    return r;
}

UPoly upoly_scale(const UPoly& a, const Integer& k) {
    if (k == 0) return UPoly();
    UPoly r = a;
    for (auto& v : r.c) v *= k;
    return r;
}

UPoly upoly_derivative(const UPoly& a) {
    if (a.degree() <= 0) return UPoly();
    std::vector<Integer> c(a.c.size() - 1);
    for (size_t i = 1; i < a.c.size(); ++i) c[i - 1] = a.c[i] * static_cast<long>(i);
    return UPoly(std::move(c));
}

bool upoly_equal(const UPoly& a, const UPoly& b) { return a.c == b.c; }

Integer upoly_content(const UPoly& a) {
    Integer g = 0;
    for (const auto& v : a.c) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
        if (g == 1) break;
    }
    return g;
}

UPoly upoly_primitive(const UPoly& a) {
    if (a.is_zero()) return a;
    Integer g = upoly_content(a);
    if (sign_of(a.leading()) < 0) g = -g;
    UPoly r = a;
    for (auto& v : r.c) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
    return r;
}

namespace {

// Pseudo-remainder of a by b (b != 0), sign-consistent: lc(b)^k * a = q*b + r.
// k is chosen even so the remainder keeps the sign behaviour of the true remainder.
UPoly pseudo_rem(UPoly a, const UPoly& b) {
    int db = b.degree();
    const Integer& lb = b.leading();
    int steps = a.degree() - db + 1;
    if (steps <= 0) return a;
    int k = steps + (steps % 2);  // even power keeps signs
    // multiply a by lb^k up front, then do exact elimination steps
    Integer mult;
    mpz_pow_ui(mult.get_mpz_t(), lb.get_mpz_t(), static_cast<unsigned long>(k));
    for (auto& v : a.c) v *= mult;
    while (!a.is_zero() && a.degree() >= db) {
        int shift = a.degree() - db;
        Integer q = a.leading() / lb;  // exact by construction of mult
        if (q * lb != a.leading()) {
            // fall back: scale once more by lb (odd/even parity preserved by lb^2)
            Integer l2 = lb * lb;
            for (auto& v : a.c) v *= l2;
            continue;
        }
        for (int i = 0; i <= db; ++i) a.c[i + shift] -= q * b.c[i];
        a.trim();
    }
    return a;
}

}  // namespace

UPoly upoly_gcd(const UPoly& a, const UPoly& b) {
    UPoly u = upoly_primitive(a), v = upoly_primitive(b);
    if (u.is_zero()) return v;
    if (v.is_zero()) return u;
    if (u.degree() < v.degree()) std::swap(u, v);
    while (!v.is_zero()) {
        UPoly r = upoly_primitive(pseudo_rem(u, v));
        u = std::move(v);
        v = std::move(r);
    }
    return upoly_primitive(u);
}

UPoly upoly_squarefree(const UPoly& a) {
    if (a.degree() <= 1) return upoly_primitive(a);
    UPoly g = upoly_gcd(a, upoly_derivative(a));
    if (g.degree() == 0) return upoly_primitive(a);
    // exact division a / g over the rationals, renormalized to primitive
    UPoly num = upoly_primitive(a);
    std::vector<Rational> q(num.c.size() - g.c.size() + 1, Rational(0));
    std::vector<Rational> rem(num.c.begin(), num.c.end());
    Rational lg(g.leading());
    for (int i = static_cast<int>(rem.size()) - 1; i >= g.degree(); --i) {
        Rational coef = rem[i] / lg;
        q[i - g.degree()] = coef;
        if (coef != 0)
            for (int j = 0; j <= g.degree(); ++j) rem[i - g.degree() + j] -= coef * Rational(g.c[j]);
    }
    Integer den(1);
    for (const auto& x : q) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den().get_mpz_t());
    std::vector<Integer> ic(q.size());
    for (size_t i = 0; i < q.size(); ++i) {
        Rational scaled = q[i] * Rational(den);
        ic[i] = scaled.get_num();
    }
    return upoly_primitive(UPoly(std::move(ic)));
}

namespace {
// Content division only: scaling must stay positive inside a Sturm chain.
UPoly primitive_keep_sign(const UPoly& a) {
    if (a.is_zero()) return a;
    Integer g = upoly_content(a);
    UPoly r = a;
    for (auto& v : r.c) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
    return r;
}
}  // namespace

SturmChain SturmChain::build(const UPoly& squarefree) {
    SturmChain ch;
    ch.seq.push_back(upoly_primitive(squarefree));
    if (ch.seq[0].degree() <= 0) return ch;
    ch.seq.push_back(primitive_keep_sign(upoly_derivative(ch.seq[0])));
    while (ch.seq.back().degree() > 0) {
        const UPoly& s0 = ch.seq[ch.seq.size() - 2];
        const UPoly& s1 = ch.seq.back();
        UPoly r = pseudo_rem(s0, s1);
        if (r.is_zero()) break;
        ch.seq.push_back(primitive_keep_sign(upoly_neg(r)));
    }
    return ch;
}

namespace {
int count_variations(const std::vector<int>& signs) {
    int v = 0, prev = 0;
    for (int s : signs) {
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++v;
        prev = s;
    }
    return v;
}
}  // namespace

int SturmChain::variations_at(const Rational& x) const {
    std::vector<int> signs;
    signs.reserve(seq.size());
    for (const auto& p : seq) signs.push_back(p.sign_at(x));
    return count_variations(signs);
}

int SturmChain::variations_neg_inf() const {
    std::vector<int> signs;
    for (const auto& p : seq) signs.push_back(p.sign_at_neg_inf());
    return count_variations(signs);
}

int SturmChain::variations_pos_inf() const {
    std::vector<int> signs;
    for (const auto& p : seq) signs.push_back(p.sign_at_pos_inf());
    return count_variations(signs);
}

int SturmChain::count_roots_half_open(const Rational& a, const Rational& b) const {
    return variations_at(a) - variations_at(b);
}

int SturmChain::count_roots_below(const Rational& b) const {
    return variations_neg_inf() - variations_at(b);
}

int SturmChain::count_real_roots() const { return variations_neg_inf() - variations_pos_inf(); }

Rational cauchy_root_bound(const UPoly& p) {
    if (p.degree() <= 0) return Rational(1);
    Rational m(0);
    for (int i = 0; i < p.degree(); ++i) {
        Rational r = rational_abs(make_rational(p.c[i], p.leading()));
        if (r > m) m = r;
    }
    return m + 1;
}

RatInterval upoly_range_on(const UPoly& p, const Rational& lo, const Rational& hi) {
    // Horner with interval arithmetic.
    Rational alo(0), ahi(0);
    for (auto it = p.c.rbegin(); it != p.c.rend(); ++it) {
        // [alo, ahi] * [lo, hi]
        Rational c1 = alo * lo, c2 = alo * hi, c3 = ahi * lo, c4 = ahi * hi;
        Rational nlo = std::min(std::min(c1, c2), std::min(c3, c4));
        Rational nhi = std::max(std::max(c1, c2), std::max(c3, c4));
        alo = nlo + *it;
        ahi = nhi + *it;
    }
    return {alo, ahi};
}

std::vector<IsolatedRoot> upoly_isolate_roots(const UPoly& p) {
    std::vector<IsolatedRoot> out;
    if (p.is_zero()) throw InvalidInput("cannot isolate roots of the zero polynomial");
    UPoly sf = upoly_squarefree(p);
    if (sf.degree() <= 0) return out;
    if (sf.degree() == 1) {
        Rational r = make_rational(-sf.c[0], sf.c[1]);
        out.push_back({r, r, r});
        return out;
    }
    SturmChain ch = SturmChain::build(sf);
    Rational bound = cauchy_root_bound(sf);
    Rational lo = -bound, hi = bound;  // no roots at +-bound
    struct Seg {
        Rational lo, hi;
        int count;
    };
    std::vector<Seg> stack;
    int total = ch.count_roots_half_open(lo, hi);
    if (total > 0) stack.push_back({lo, hi, total});
    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        if (s.count == 1) {
            // every segment endpoint is verified non-root, so the root is interior
            out.push_back({std::nullopt, s.lo, s.hi});
            continue;
        }
        // split point where sf does not vanish; dodging keeps endpoints non-root
        Rational mid = (s.lo + s.hi) / 2;
        int guard = 0;
        while (sf.sign_at(mid) == 0) {
            mid = (s.lo + mid) / 2;
            if (++guard > 64) throw InvariantViolation("root isolation split stalled");
        }
        int left = ch.count_roots_half_open(s.lo, mid);
        int right = s.count - left;
        if (left > 0) stack.push_back({s.lo, mid, left});
        if (right > 0) stack.push_back({mid, s.hi, right});
    }
    std::sort(out.begin(), out.end(),
              [](const IsolatedRoot& a, const IsolatedRoot& b) { return a.lo < b.lo; });
    return out;
}

}  // namespace bcp
