#include "bcp/arcs.hpp"

#include <algorithm>

#include "bcp/errors.hpp"

namespace bcp {

PolynomialXY canonical_support(const PolynomialXY& g) {
    PolynomialXY r = g;
    r.trim();
    if (r.is_zero()) return r;
    Integer content(0);
    for (const auto& c : r.ycoef) {
        Integer cc = upoly_content(c);
        mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), cc.get_mpz_t());
    }
    if (content == 0) content = 1;
    if (sign_of(r.ycoef.back().leading()) < 0) content = -content;
    for (auto& c : r.ycoef) {
        for (auto& v : c.c) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), content.get_mpz_t());
    }
    return r;
}

int abscissa_sign_of_poly(const Abscissa& x, const UPoly& p) {
    switch (x.kind()) {
        case Abscissa::Kind::Rat: return p.sign_at(x.rat());
        case Abscissa::Kind::Alg: return x.alg()->sign_of_poly(p);
        case Abscissa::Kind::NegInf: return p.sign_at_neg_inf();
        case Abscissa::Kind::PosInf: return p.sign_at_pos_inf();
    }
    return 0;
}

SurdValue arc_value_at(const XMonotoneArc& arc, const Rational& x) {
    auto roots = y_roots_at(arc.support, x);
    if (roots.empty()) throw InvariantViolation("arc has no point at queried abscissa");
    int k = std::min<int>(arc.branch, static_cast<int>(roots.size()) - 1);
    return roots[static_cast<size_t>(k)];
}

SideOf point_side_of_arc(const Point2& p, const XMonotoneArc& arc) {
    if (arc.lo.compare(p.x) > 0 || arc.hi.compare(p.x) < 0) return SideOf::OutsideSpan;
    SurdValue v = arc_value_at(arc, p.x);
    int c = v.compare(p.y);  // sign(v - p.y)
    if (c == 0) return SideOf::On;
    return c < 0 ? SideOf::Above : SideOf::Below;
}

namespace {

// sign of E(α) + W(α) * sqrt(F(α)); requires F(α) >= 0
int sign_poly_surd_at(const UPoly& E, const UPoly& W, const UPoly& F, const Abscissa& alpha) {
    int sF = abscissa_sign_of_poly(alpha, F);
    if (sF < 0) throw InvariantViolation("negative radicand at abscissa");
    int sW = abscissa_sign_of_poly(alpha, W);
    if (sF == 0 || sW == 0) return abscissa_sign_of_poly(alpha, E);
    int sE = abscissa_sign_of_poly(alpha, E);
    if (sE == 0) return sW;
    if (sE == sW) return sE;
    UPoly cmp = upoly_sub(upoly_mul(E, E), upoly_mul(upoly_mul(W, W), F));
    int t = abscissa_sign_of_poly(alpha, cmp);
    return t == 0 ? 0 : (t > 0 ? sE : sW);
}

// true iff E(α) + W1(α)√F(α) + W2(α)√G(α) == 0
bool zero_two_poly_surd_at(const UPoly& E, const UPoly& W1, const UPoly& F, const UPoly& W2,
                           const UPoly& G, const Abscissa& alpha) {
    int lhs = sign_poly_surd_at(E, W1, F, alpha);
    int sG = abscissa_sign_of_poly(alpha, G);
    int sW2 = abscissa_sign_of_poly(alpha, W2);
    int rhs = (sG == 0) ? 0 : -sW2;  // sign of -(W2 sqrt G)
    if (lhs != rhs) return false;
    if (lhs == 0 && rhs == 0) return true;
    // equal signs: compare magnitudes, (E + W1 sqrt F)^2 == W2^2 G
    UPoly rat = upoly_add(upoly_mul(E, E), upoly_mul(upoly_mul(W1, W1), F));
    UPoly diff = upoly_sub(rat, upoly_mul(upoly_mul(W2, W2), G));
    UPoly irr = upoly_scale(upoly_mul(E, W1), Integer(2));
    return sign_poly_surd_at(diff, irr, F, alpha) == 0;
}

// Pointwise description of one y-branch of a support at a fixed abscissa:
// either linear (y = -C/B) or quadratic ((-B + s sqrt(D)) / (2A), s = ±1).
struct BranchForm {
    bool linear;
    UPoly B, C;     // linear: y = -C/B
    UPoly A, D;     // quadratic
    int s = 0;      // ±1, or 0 when the discriminant vanishes at alpha
};

std::optional<BranchForm> branch_form_at(const XMonotoneArc& arc, const Abscissa& alpha) {
    UPoly A, B, C;
    arc.support.xpolys(A, B, C);
    int sA = abscissa_sign_of_poly(alpha, A);
    if (arc.support.deg_y() == 1 || sA == 0) {
        const UPoly& Bl = arc.support.deg_y() == 1 ? arc.support.ycoef[1] : B;
        const UPoly& Cl = arc.support.deg_y() == 1 ? arc.support.ycoef[0] : C;
        if (abscissa_sign_of_poly(alpha, Bl) == 0) return std::nullopt;
        BranchForm f;
        f.linear = true;
        f.B = Bl;
        f.C = Cl;
        return f;
    }
    UPoly D = upoly_sub(upoly_mul(B, B), upoly_scale(upoly_mul(A, C), Integer(4)));
    int sD = abscissa_sign_of_poly(alpha, D);
    if (sD < 0) return std::nullopt;
    BranchForm f;
    f.linear = false;
    f.A = A;
    f.B = B;
    f.D = D;
    if (sD == 0) {
        // double root: y = -B / (2A); fold into the linear form
        f.linear = true;
        f.C = B;
        f.B = upoly_scale(A, Integer(2));
        return f;
    }
    // ascending branches: branch 0 takes s = -sign(A), branch 1 takes s = +sign(A)
    f.s = (arc.branch == 0) ? -sA : sA;
    return f;
}

bool branches_meet_at(const XMonotoneArc& a, const XMonotoneArc& b, const Abscissa& alpha) {
    auto fa = branch_form_at(a, alpha);
    auto fb = branch_form_at(b, alpha);
    if (!fa || !fb) return false;
    if (fa->linear && fb->linear) {
        // -Ca/Ba == -Cb/Bb  <=>  Ca Bb - Cb Ba == 0
        UPoly diff = upoly_sub(upoly_mul(fa->C, fb->B), upoly_mul(fb->C, fa->B));
        return abscissa_sign_of_poly(alpha, diff) == 0;
    }
    if (fa->linear || fb->linear) {
        const BranchForm& L = fa->linear ? *fa : *fb;
        const BranchForm& Q = fa->linear ? *fb : *fa;
        // -CL/BL == (-BQ + s sqrt(DQ)) / (2 AQ)
        // <=>  BL*BQ - 2*AQ*CL - s*BL*sqrt(DQ) == 0
        UPoly E = upoly_sub(upoly_mul(L.B, Q.B), upoly_scale(upoly_mul(Q.A, L.C), Integer(2)));
        UPoly W = upoly_scale(L.B, Integer(-Q.s));
        return sign_poly_surd_at(E, W, Q.D, alpha) == 0;
    }
    // quad vs quad:  E + W1 sqrt(Da) + W2 sqrt(Db) == 0
    UPoly E = upoly_sub(upoly_mul(fa->A, fb->B), upoly_mul(fb->A, fa->B));
    UPoly W1 = upoly_scale(fb->A, Integer(fa->s));
    UPoly W2 = upoly_scale(fa->A, Integer(-fb->s));
    return zero_two_poly_surd_at(E, W1, fa->D, W2, fb->D, alpha);
}

bool is_endpoint_of(const Abscissa& x, const XMonotoneArc& arc) {
    return x.compare(arc.lo) == 0 || x.compare(arc.hi) == 0;
}

bool within_span(const Abscissa& x, const XMonotoneArc& arc) {
    return arc.lo.compare(x) <= 0 && arc.hi.compare(x) >= 0;
}

// Order of the two arcs strictly between blocked abscissae around alpha;
// used to distinguish transversal crossings from tangencies.
int order_near(const XMonotoneArc& a, const XMonotoneArc& b, const Rational& x) {
    SurdValue va = arc_value_at(a, x);
    SurdValue vb = arc_value_at(b, x);
    return va.compare(vb);
}

}  // namespace

std::vector<ArcIntersection> arc_arc_intersections(const XMonotoneArc& a, const XMonotoneArc& b) {
    std::vector<ArcIntersection> out;
    // span overlap of the closed spans
    Abscissa lo = a.lo.compare(b.lo) >= 0 ? a.lo : b.lo;
    Abscissa hi = a.hi.compare(b.hi) <= 0 ? a.hi : b.hi;
    if (lo.compare(hi) > 0) return out;

    if (a.support.equal(b.support)) {
        if (a.branch == b.branch) {
            if (lo.compare(hi) < 0)
                throw DegenerateOverlap("arcs share support and branch with overlapping spans");
            // single-point touch: endpoint of both
            return out;
        }
        // distinct branches of one curve meet where the discriminant vanishes
        UPoly A, B, C;
        a.support.xpolys(A, B, C);
        if (a.support.deg_y() < 2) return out;
        UPoly D = upoly_sub(upoly_mul(B, B), upoly_scale(upoly_mul(A, C), Integer(4)));
        for (auto& root : poly_real_roots(D)) {
            if (!(within_span(root, a) && within_span(root, b))) continue;
            if (is_endpoint_of(root, a) && is_endpoint_of(root, b)) continue;
            out.push_back({root, false});
        }
        return out;
    }

    UPoly res = resultant_y(a.support, b.support);
    if (res.is_zero()) throw DegenerateOverlap("arcs supports share a curve component");
    std::vector<Abscissa> candidates = poly_real_roots(res);
    std::vector<Abscissa> confirmed;
    for (auto& alpha : candidates) {
        if (!(within_span(alpha, a) && within_span(alpha, b))) continue;
        if (is_endpoint_of(alpha, a) && is_endpoint_of(alpha, b)) continue;
        if (!branches_meet_at(a, b, alpha)) continue;
        confirmed.push_back(alpha);
    }
    // classify transversal vs tangency via sampled order on both sides
    for (size_t i = 0; i < confirmed.size(); ++i) {
        const Abscissa& alpha = confirmed[i];
        Abscissa left_block = lo, right_block = hi;
        if (i > 0) left_block = confirmed[i - 1];
        if (i + 1 < confirmed.size()) right_block = confirmed[i + 1];
        bool has_left = left_block.compare(alpha) < 0;
        bool has_right = right_block.compare(alpha) > 0;
        bool transversal = false;
        if (has_left && has_right) {
            Rational xl = rational_between(left_block, alpha);
            Rational xr = rational_between(alpha, right_block);
            transversal = order_near(a, b, xl) * order_near(a, b, xr) < 0;
        }
        out.push_back({alpha, transversal});
    }
    return out;
}

int ArcSet::add(XMonotoneArc arc) {
    arc.id = static_cast<int>(arcs_.size());
    arcs_.push_back(std::move(arc));
    return arcs_.back().id;
}

const std::vector<ArcIntersection>& ArcSet::intersections(int i, int j) const {
    if (i > j) std::swap(i, j);
    auto key = std::make_pair(i, j);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const XMonotoneArc& a = arcs_[static_cast<size_t>(i)];
    const XMonotoneArc& b = arcs_[static_cast<size_t>(j)];
    // cheap span rejection before any resultant work
    if (a.lo.compare(b.hi) > 0 || b.lo.compare(a.hi) > 0)
        return cache_.emplace(key, std::vector<ArcIntersection>{}).first->second;
    auto res = arc_arc_intersections(a, b);
    return cache_.emplace(key, std::move(res)).first->second;
}

void ArcSet::seed_intersections(int i, int j, std::vector<ArcIntersection> xs) {
    if (i > j) std::swap(i, j);
    cache_[std::make_pair(i, j)] = std::move(xs);
}

}  // namespace bcp
