#pragma once

#include <vector>

#include "bcp/arcs.hpp"

namespace bcp {

struct PseudoTrapezoid {
    int id = -1;
    Abscissa left, right;
    int bottom_arc = -1;  // -1: unbounded below
    int top_arc = -1;     // -1: unbounded above
    int source_range = -1;
    bool leftmost = false;  // owns points on its left wall
};

struct ArcFamilyStats {
    long N = 0;    // |Ψ|
    long chi = 0;  // intersection points among the arcs
};

// Splits the boundary of sigma into x-monotone arcs covering ∂σ exactly once.
// Throws DegenerateRange for slivers/slits.  Empty result: σ is all or nothing
// (use range_is_everything to tell which).
std::vector<XMonotoneArc> split_x_monotone(const RangeRegion& sigma, ArcSet& store);

// For a range with no boundary arcs: constant membership over the plane.
bool range_is_everything(const RangeRegion& sigma);

// Cuts arcs until every pair intersects in at most one point.  Cuts are placed
// at rational abscissae strictly between consecutive crossings of a violating
// pair.  Returns the surviving arc ids (inputs replaced by their pieces).
std::vector<int> cut_to_pseudosegments(ArcSet& store, const std::vector<int>& arc_ids);

// Vertical decomposition of sigma from its boundary subarcs.
std::vector<PseudoTrapezoid> vertical_decompose(const RangeRegion& sigma, ArcSet& store,
                                                const std::vector<int>& boundary_ids);

// Point membership under the tie rules (right-closed walls, closedness flags on arcs).
bool point_in_trapezoid(const Point2& p, const PseudoTrapezoid& t, const ArcSet& store);

// Number of intersection points over all pairs (tangencies count once).
long count_crossings(const ArcSet& store, const std::vector<int>& arc_ids);

// Whole-instance geometry: all ranges split, cut and decomposed together.
struct PipelineGeometry {
    ArcSet arcs;
    std::vector<int> subarc_ids;               // pseudo-segment family
    std::vector<PseudoTrapezoid> trapezoids;   // global Ψ, id = position
    std::vector<std::vector<int>> by_range;    // trapezoid ids per range id
    std::vector<char> always_true;             // per range
    std::vector<char> always_false;            // per range
    long chi = 0;
};

PipelineGeometry build_geometry(const std::vector<RangeRegion>& ranges);

}  // namespace bcp
