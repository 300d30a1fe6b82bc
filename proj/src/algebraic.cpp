#include "bcp/algebraic.hpp"

#include <sstream>

#include "bcp/errors.hpp"

namespace bcp {

AlgebraicNumber::AlgebraicNumber(UPoly squarefree_poly, Rational lo, Rational hi)
    : poly_(upoly_primitive(squarefree_poly)), lo_(std::move(lo)), hi_(std::move(hi)) {
    if (poly_.degree() < 1) throw InvariantViolation("algebraic number needs degree >= 1");
    chain_ = SturmChain::build(poly_);
    if (lo_ == hi_) {
        exact_ = lo_;
    } else if (chain_.count_roots_half_open(lo_, hi_) != 1 || poly_.sign_at(hi_) == 0) {
        throw InvariantViolation("interval does not isolate exactly one interior root");
    }
}

void AlgebraicNumber::interval(Rational& lo, Rational& hi) const {
    std::lock_guard<std::mutex> g(mu_);
    lo = lo_;
    hi = hi_;
}

std::optional<Rational> AlgebraicNumber::exact_value() const {
    std::lock_guard<std::mutex> g(mu_);
    return exact_;
}

void AlgebraicNumber::refine_once_locked() const {
    if (exact_) return;
    Rational mid = (lo_ + hi_) / 2;
    int s = poly_.sign_at(mid);
    if (s == 0) {
        exact_ = mid;
        lo_ = hi_ = mid;
        return;
    }
    if (chain_.count_roots_half_open(lo_, mid) == 1)
        hi_ = mid;
    else
        lo_ = mid;
}

void AlgebraicNumber::refine_below(const Rational& width) const {
    std::lock_guard<std::mutex> g(mu_);
    while (!exact_ && hi_ - lo_ >= width) refine_once_locked();
}

int AlgebraicNumber::compare(const Rational& q) const {
    std::lock_guard<std::mutex> g(mu_);
    if (exact_) return sign_of(Rational(*exact_ - q));
    if (q <= lo_) return +1;  // root strictly above lo_
    if (q >= hi_) return -1;
    if (poly_.sign_at(q) == 0) return 0;
    return chain_.count_roots_half_open(lo_, q) == 1 ? -1 : +1;
}

int AlgebraicNumber::compare(const AlgebraicNumber& other) const {
    if (this == &other) return 0;
    if (auto e = other.exact_value()) return compare(*e);
    if (auto e = exact_value()) return -other.compare(*e);
    Rational alo, ahi, blo, bhi;
    interval(alo, ahi);
    other.interval(blo, bhi);
    if (ahi <= blo) return -1;
    if (bhi <= alo) return +1;
    // Equality test: gcd roots are common roots; one inside both isolating intervals
    // is necessarily both numbers.  Interval endpoints are never roots of either
    // polynomial, so the half-open Sturm count equals the open-interval count.
    UPoly g = upoly_gcd(poly_, other.poly_);
    if (g.degree() >= 1) {
        Rational ilo = std::max(alo, blo), ihi = std::min(ahi, bhi);
        SturmChain gch = SturmChain::build(g);
        if (gch.count_roots_half_open(ilo, ihi) > 0) return 0;
    }
    for (int round = 0; round < 4096; ++round) {
        {
            std::lock_guard<std::mutex> ga(mu_);
            refine_once_locked();
        }
        {
            std::lock_guard<std::mutex> gb(other.mu_);
            other.refine_once_locked();
        }
        if (auto e = exact_value()) return -other.compare(*e);
        if (auto e = other.exact_value()) return compare(*e);
        interval(alo, ahi);
        other.interval(blo, bhi);
        if (ahi <= blo) return -1;
        if (bhi <= alo) return +1;
    }
    throw InvariantViolation("algebraic comparison failed to separate distinct numbers");
}

int AlgebraicNumber::sign_of_poly(const UPoly& f) const {
    if (f.is_zero()) return 0;
    {
        std::lock_guard<std::mutex> g(mu_);
        if (exact_) return f.sign_at(*exact_);
    }
    // A root of gcd(poly_, f) inside the isolating interval is this number,
    // hence f vanishes here.  Isolating endpoints are never roots of poly_.
    UPoly g = upoly_gcd(poly_, f);
    if (g.degree() >= 1) {
        Rational lo, hi;
        interval(lo, hi);
        SturmChain gch = SturmChain::build(g);
        if (gch.count_roots_half_open(lo, hi) > 0) return 0;
    }
    for (int round = 0; round < 4096; ++round) {
        Rational lo, hi;
        interval(lo, hi);
        RatInterval r = upoly_range_on(f, lo, hi);
        if (sign_of(r.lo) > 0) return +1;
        if (sign_of(r.hi) < 0) return -1;
        std::lock_guard<std::mutex> g2(mu_);
        refine_once_locked();
        if (exact_) return f.sign_at(*exact_);
    }
    throw InvariantViolation("sign_of_poly failed to converge");
}

double AlgebraicNumber::approx() const {
    refine_below(Rational(1, 1 << 20));
    Rational lo, hi;
    interval(lo, hi);
    return to_double(Rational((lo + hi) / 2));
}

std::string AlgebraicNumber::debug_string() const {
    std::ostringstream os;
    os << "alg(~" << approx() << ")";
    return os.str();
}

Abscissa Abscissa::algebraic(AlgebraicPtr p) {
    if (auto e = p->exact_value()) return Abscissa::rational(*e);
    Abscissa a(Kind::Alg);
    a.alg_ = std::move(p);
    return a;
}

int Abscissa::compare(const Abscissa& o) const {
    if (kind_ == Kind::NegInf) return o.kind_ == Kind::NegInf ? 0 : -1;
    if (kind_ == Kind::PosInf) return o.kind_ == Kind::PosInf ? 0 : +1;
    if (o.kind_ == Kind::NegInf) return +1;
    if (o.kind_ == Kind::PosInf) return -1;
    if (kind_ == Kind::Rat && o.kind_ == Kind::Rat) return sign_of(Rational(rat_ - o.rat_));
    if (kind_ == Kind::Rat) return -o.alg_->compare(rat_);
    if (o.kind_ == Kind::Rat) return alg_->compare(o.rat_);
    return alg_->compare(*o.alg_);
}

int Abscissa::compare(const Rational& q) const {
    switch (kind_) {
        case Kind::NegInf: return -1;
        case Kind::PosInf: return +1;
        case Kind::Rat: return sign_of(Rational(rat_ - q));
        case Kind::Alg: return alg_->compare(q);
    }
    return 0;
}

double Abscissa::approx() const {
    switch (kind_) {
        case Kind::NegInf: return -1e300;
        case Kind::PosInf: return 1e300;
        case Kind::Rat: return to_double(rat_);
        case Kind::Alg: return alg_->approx();
    }
    return 0;
}

std::string Abscissa::debug_string() const {
    switch (kind_) {
        case Kind::NegInf: return "-inf";
        case Kind::PosInf: return "+inf";
        case Kind::Rat: return rational_to_string(rat_);
        case Kind::Alg: return alg_->debug_string();
    }
    return "?";
}

Rational rational_between(const Abscissa& a, const Abscissa& b) {
    if (a.compare(b) >= 0) throw InvariantViolation("rational_between needs a < b");
    const auto K = Abscissa::Kind::Rat;
    if (a.kind() == Abscissa::Kind::NegInf && b.kind() == Abscissa::Kind::PosInf) return Rational(0);
    if (a.kind() == Abscissa::Kind::NegInf) {
        if (b.kind() == K) return b.rat() - 1;
        Rational lo, hi;
        b.alg()->interval(lo, hi);
        return lo - 1;
    }
    if (b.kind() == Abscissa::Kind::PosInf) {
        if (a.kind() == K) return a.rat() + 1;
        Rational lo, hi;
        a.alg()->interval(lo, hi);
        return hi + 1;
    }
    if (a.kind() == K && b.kind() == K) return Rational((a.rat() + b.rat()) / 2);
    for (int round = 0; round < 4096; ++round) {
        // upper bound strictly above a, lower bound strictly below b
        Rational a_hi, b_lo;
        if (a.kind() == K) {
            a_hi = a.rat();
        } else {
            Rational lo, hi;
            a.alg()->interval(lo, hi);
            a_hi = hi;
        }
        if (b.kind() == K) {
            b_lo = b.rat();
        } else {
            Rational lo, hi;
            b.alg()->interval(lo, hi);
            b_lo = lo;
        }
        // a <= a_hi (strict when a algebraic), b_lo <= b (strict when b algebraic)
        if (a_hi < b_lo) return Rational((a_hi + b_lo) / 2);
        if (a_hi == b_lo && a.kind() != K && b.kind() != K) return a_hi;
        Rational gap = 1;
        for (int i = 0; i < round + 2; ++i) gap /= 2;
        if (a.kind() != K) a.alg()->refine_below(gap);
        if (b.kind() != K) b.alg()->refine_below(gap);
    }
    throw InvariantViolation("rational_between failed to separate");
}

std::vector<Abscissa> poly_real_roots(const UPoly& p) {
    std::vector<Abscissa> out;
    if (p.is_zero() || p.degree() == 0) return out;
    UPoly sf = upoly_squarefree(p);
    for (const auto& r : upoly_isolate_roots(sf)) {
        if (r.exact)
            out.push_back(Abscissa::rational(*r.exact));
        else
            out.push_back(Abscissa::algebraic(std::make_shared<AlgebraicNumber>(sf, r.lo, r.hi)));
    }
    return out;
}

}  // namespace bcp
