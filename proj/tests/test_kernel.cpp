#include <algorithm>
#include <random>

#include "bcp/arcs.hpp"
#include "bcp/geometry.hpp"
#include "bcp/pseudo.hpp"
#include "doctest.h"

using namespace bcp;

namespace {

Point2 pt(long x, long y, int id = -1) { return Point2{Rational(x), Rational(y), id}; }

// Upper or lower semicircle of a full circle, as produced by split_x_monotone.
XMonotoneArc circle_arc(ArcSet& store, const Rational& cx, const Rational& cy, const Rational& r2,
                        bool upper, int range_id = 0) {
    RangeRegion disk = make_disk(range_id, cx, cy, r2);
    ArcSet tmp;
    auto arcs = split_x_monotone(disk, tmp);
    REQUIRE(arcs.size() == 2);
    for (auto& a : arcs) {
        bool is_upper = a.branch == 1;
        if (is_upper == upper) {
            a.source_range = range_id;
            a.id = store.add(a);
            return store[a.id];
        }
    }
    FAIL("branch not found");
    return arcs[0];
}

}  // namespace

TEST_CASE("point_in_range basics") {
    RangeRegion disk = make_disk(0, Rational(0), Rational(0), Rational(1));
    CHECK(point_in_range(pt(0, 0), disk));
    CHECK(point_in_range(pt(1, 0), disk));  // boundary inclusive
    CHECK(!point_in_range(pt(2, 0), disk));
}

TEST_CASE("point_in_range boolean shapes and strict atoms") {
    RangeRegion ann = make_annulus(0, Rational(0), Rational(0), Rational(1), Rational(4));
    CHECK(!point_in_range(pt(0, 0), ann));
    CHECK(point_in_range(pt(1, 0), ann));  // inner boundary inclusive
    CHECK(point_in_range(pt(2, 0), ann));  // outer boundary inclusive
    CHECK(!point_in_range(pt(3, 0), ann));

    // crescent: disk minus smaller disk, negation makes the inner boundary open
    BoolShape shape;
    shape.op = BoolShape::Op::conj;
    BoolShape neg;
    neg.op = BoolShape::Op::neg;
    neg.children = {BoolShape::leaf_of(1)};
    shape.children = {BoolShape::leaf_of(0), neg};
    RangeRegion cres = make_custom(
        0, {Rational(0), Rational(0), Rational(4), Rational(1), Rational(0), Rational(1)},
        {{AtomKind::disk, {0, 1, 2}, false}, {AtomKind::disk, {3, 4, 5}, false}}, shape);
    CHECK(point_in_range(pt(-2, 0), cres));
    CHECK(!point_in_range(pt(1, 0), cres));   // inside the removed disk
    CHECK(!point_in_range(pt(2, 0), cres));   // on removed-disk boundary: not in ¬(g>=0)
    CHECK(point_in_range(pt(-1, 0), cres));
}

TEST_CASE("point_side_of_arc on the lower unit-circle arc") {
    ArcSet store;
    XMonotoneArc lower = circle_arc(store, Rational(0), Rational(0), Rational(1), false);
    CHECK(point_side_of_arc(pt(0, 0), lower) == SideOf::Above);
    CHECK(point_side_of_arc(pt(0, -1), lower) == SideOf::On);
    CHECK(point_side_of_arc(pt(5, 0), lower) == SideOf::OutsideSpan);
}

TEST_CASE("point_side_of_arc antisymmetric under y-reflection") {
    std::mt19937_64 rng(7);
    ArcSet store;
    for (int rep = 0; rep < 20; ++rep) {
        long cx = static_cast<long>(rng() % 11) - 5;
        long cy = static_cast<long>(rng() % 11) - 5;
        long r2 = 1 + static_cast<long>(rng() % 20);
        bool upper = rng() % 2;
        XMonotoneArc arc = circle_arc(store, Rational(cx), Rational(cy), Rational(r2), upper);
        XMonotoneArc refl = arc;
        refl.support = canonical_support(arc.support.reflected_y());
        refl.branch = 1 - arc.branch;
        refl.id = store.add(refl);
        long px = static_cast<long>(rng() % 9) - 4;
        long py = static_cast<long>(rng() % 9) - 4;
        SideOf s1 = point_side_of_arc(pt(px, py), arc);
        SideOf s2 = point_side_of_arc(pt(px, -py), store[refl.id]);
        if (s1 == SideOf::Above) CHECK(s2 == SideOf::Below);
        if (s1 == SideOf::Below) CHECK(s2 == SideOf::Above);
        if (s1 == SideOf::On) CHECK(s2 == SideOf::On);
        if (s1 == SideOf::OutsideSpan) CHECK(s2 == SideOf::OutsideSpan);
    }
}

TEST_CASE("arc_arc_intersections: two upper arcs meeting once at (3,4)") {
    ArcSet store;
    XMonotoneArc a = circle_arc(store, Rational(0), Rational(0), Rational(25), true, 0);
    XMonotoneArc b = circle_arc(store, Rational(6), Rational(0), Rational(25), true, 1);
    auto xs = arc_arc_intersections(a, b);
    REQUIRE(xs.size() == 1);
    CHECK(xs[0].x.compare(Rational(3)) == 0);
    // substitute into both circle equations: the point is (3,4)
    SurdValue va = arc_value_at(a, Rational(3));
    SurdValue vb = arc_value_at(b, Rational(3));
    CHECK(va.compare(Rational(4)) == 0);
    CHECK(vb.compare(Rational(4)) == 0);
}

TEST_CASE("arc_arc_intersections: upper vs lower arcs crossing twice at x=±sqrt(91)/2") {
    ArcSet store;
    XMonotoneArc up = circle_arc(store, Rational(0), Rational(0), Rational(25), true, 0);
    XMonotoneArc dn = circle_arc(store, Rational(0), Rational(3), Rational(25), false, 1);
    auto xs = arc_arc_intersections(up, dn);
    REQUIRE(xs.size() == 2);
    // 4x^2 - 91 = 0 at the crossings
    UPoly q(std::vector<Integer>{Integer(-91), Integer(0), Integer(4)});
    CHECK(abscissa_sign_of_poly(xs[0].x, q) == 0);
    CHECK(abscissa_sign_of_poly(xs[1].x, q) == 0);
    CHECK(xs[0].x.compare(xs[1].x) < 0);
    CHECK(xs[0].transversal);
    CHECK(xs[1].transversal);
}

TEST_CASE("arc_arc_intersections: parallel halfplane boundaries") {
    ArcSet store;
    RangeRegion h0 = make_halfplane(0, Rational(0), Rational(0));  // y >= 0
    RangeRegion h1 = make_halfplane(1, Rational(0), Rational(1));  // y >= 1
    auto a0 = split_x_monotone(h0, store);
    auto a1 = split_x_monotone(h1, store);
    REQUIRE(a0.size() == 1);
    REQUIRE(a1.size() == 1);
    CHECK(arc_arc_intersections(a0[0], a1[0]).empty());
}

TEST_CASE("arc_arc_intersections symmetric and circle-family count bound") {
    std::mt19937_64 rng(11);
    ArcSet store;
    const int k = 6;
    std::vector<XMonotoneArc> arcs;
    for (int i = 0; i < k; ++i) {
        long cx = static_cast<long>(rng() % 9) - 4;
        long cy = static_cast<long>(rng() % 9) - 4;
        long r2 = 4 + static_cast<long>(rng() % 12);
        arcs.push_back(circle_arc(store, Rational(cx), Rational(cy), Rational(r2), true, 2 * i));
        arcs.push_back(circle_arc(store, Rational(cx), Rational(cy), Rational(r2), false, 2 * i + 1));
    }
    long total = 0;
    for (size_t i = 0; i < arcs.size(); ++i) {
        for (size_t j = i + 1; j < arcs.size(); ++j) {
            if (arcs[i].support.equal(arcs[j].support)) continue;  // sibling arcs
            auto ab = arc_arc_intersections(arcs[i], arcs[j]);
            auto ba = arc_arc_intersections(arcs[j], arcs[i]);
            REQUIRE(ab.size() == ba.size());
            for (size_t t = 0; t < ab.size(); ++t) CHECK(ab[t].x.compare(ba[t].x) == 0);
            total += static_cast<long>(ab.size());
        }
    }
    CHECK(total <= 2 * (k * (k - 1) / 2));
}

TEST_CASE("degenerate overlap rejected") {
    ArcSet store;
    XMonotoneArc a = circle_arc(store, Rational(0), Rational(0), Rational(25), true, 0);
    XMonotoneArc b = a;
    b.lo = Abscissa::rational(Rational(-1));  // same support+branch, overlapping span
    b.id = store.add(b);
    CHECK_THROWS_AS(arc_arc_intersections(a, store[b.id]), DegenerateOverlap);
}

TEST_CASE("evaluate_bound") {
    auto [em3, en3] = bound_exponents(3);
    CHECK(em3 == doctest::Approx(6.0 / 11.0));
    CHECK(en3 == doctest::Approx(9.0 / 11.0));
    auto [em2, en2] = bound_exponents(2);
    CHECK(em2 == doctest::Approx(2.0 / 3.0));
    CHECK(en2 == doctest::Approx(2.0 / 3.0));
    CHECK(evaluate_bound(0, 10, 3) == doctest::Approx(10.0));
    CHECK_THROWS_AS(evaluate_bound(1, 1, 1), InvalidInput);
}

TEST_CASE("abscissa total order is a strict total order") {
    // roots of several quartics, sorted twice with permuted input order
    std::vector<Abscissa> xs;
    for (int a = 1; a <= 4; ++a) {
        UPoly p(std::vector<Integer>{Integer(-a), Integer(0), Integer(0), Integer(0), Integer(1)});
        for (auto& r : poly_real_roots(p)) xs.push_back(r);
        UPoly q(std::vector<Integer>{Integer(a), Integer(-3), Integer(1)});
        for (auto& r : poly_real_roots(q)) xs.push_back(r);
    }
    xs.push_back(Abscissa::rational(Rational(1)));
    xs.push_back(Abscissa::rational(Rational(-1)));
    auto cmp = [](const Abscissa& a, const Abscissa& b) { return a.compare(b) < 0; };
    std::vector<Abscissa> s1 = xs;
    std::sort(s1.begin(), s1.end(), cmp);
    std::vector<Abscissa> s2 = xs;
    std::mt19937_64 rng(3);
    std::shuffle(s2.begin(), s2.end(), rng);
    std::sort(s2.begin(), s2.end(), cmp);
    REQUIRE(s1.size() == s2.size());
    for (size_t i = 0; i < s1.size(); ++i) CHECK(s1[i].compare(s2[i]) == 0);
    // trichotomy on consecutive elements
    for (size_t i = 0; i + 1 < s1.size(); ++i) {
        int c = s1[i].compare(s1[i + 1]);
        CHECK(c <= 0);
        CHECK(c == -s1[i + 1].compare(s1[i]));
    }
}

TEST_CASE("rational_between separates abscissae") {
    UPoly p(std::vector<Integer>{Integer(-2), Integer(0), Integer(1)});  // x^2 - 2
    auto roots = poly_real_roots(p);
    REQUIRE(roots.size() == 2);
    Rational mid = rational_between(roots[0], roots[1]);
    CHECK(roots[0].compare(mid) < 0);
    CHECK(roots[1].compare(mid) > 0);
    Rational below = rational_between(Abscissa::neg_inf(), roots[0]);
    CHECK(roots[0].compare(below) > 0);
}
