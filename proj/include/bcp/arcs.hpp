#pragma once

#include <map>
#include <optional>
#include <vector>

#include "bcp/geometry.hpp"

namespace bcp {

enum class ArcRole { bottom, top };  // bottom: region locally above; top: region locally below

// Connected x-monotone piece of the zero set of `support`, selected by the index
// of its y-root (ascending) which is constant over the open span.
struct XMonotoneArc {
    int id = -1;
    PolynomialXY support;  // canonical form (primitive, positive highest coefficient)
    int branch = 0;
    Abscissa lo, hi;
    int source_range = -1;
    ArcRole role = ArcRole::bottom;
    bool boundary_closed = true;  // points on the arc belong to the region
};

enum class SideOf { Above, On, Below, OutsideSpan };

// Canonical scaling of a support polynomial so equal zero sets compare equal.
PolynomialXY canonical_support(const PolynomialXY& g);

int abscissa_sign_of_poly(const Abscissa& x, const UPoly& p);

// y-value of the arc at a rational abscissa inside its span.
SurdValue arc_value_at(const XMonotoneArc& arc, const Rational& x);

// Exact vertical position of p against the arc.
SideOf point_side_of_arc(const Point2& p, const XMonotoneArc& arc);

struct ArcIntersection {
    Abscissa x;
    bool transversal = true;  // false: tangency (counts as one crossing)
};

// All common points of two arcs within both spans, excluding points that are
// endpoints of both arcs.  Rejects identical-support same-branch overlaps.
std::vector<ArcIntersection> arc_arc_intersections(const XMonotoneArc& a, const XMonotoneArc& b);

// Arc container with a pairwise-intersection cache.
class ArcSet {
public:
    int add(XMonotoneArc arc);  // assigns id
    const XMonotoneArc& operator[](int id) const { return arcs_[static_cast<size_t>(id)]; }
    XMonotoneArc& operator[](int id) { return arcs_[static_cast<size_t>(id)]; }
    int size() const { return static_cast<int>(arcs_.size()); }
    const std::vector<XMonotoneArc>& all() const { return arcs_; }

    const std::vector<ArcIntersection>& intersections(int i, int j) const;
    // Install a precomputed intersection list (used when arcs are cut).
    void seed_intersections(int i, int j, std::vector<ArcIntersection> xs);

private:
    std::vector<XMonotoneArc> arcs_;
    mutable std::map<std::pair<int, int>, std::vector<ArcIntersection>> cache_;
};

}  // namespace bcp
