#pragma once

#include <optional>
#include <tuple>

#include "bcp/primal.hpp"

namespace bcp {

// Range as a point in parameter space.
struct ParamPoint {
    std::vector<Rational> coords;
    int range_id = -1;
};

// Sparse polynomial in the s parameters.
struct MPoly {
    struct Term {
        std::vector<int> exp;  // size s
        Rational coef;
    };
    int nvars = 0;
    std::vector<Term> terms;

    Rational eval(const std::vector<Rational>& y) const;
};

// Closed interval with optional infinite ends.
struct ExtInterval {
    bool lo_inf = true, hi_inf = true;
    Rational lo = 0, hi = 0;
};

// Interval enclosure of the polynomial over a box.
struct ExtRange {
    bool lo_inf = false, hi_inf = false;
    Rational lo = 0, hi = 0;
};
ExtRange mpoly_range_on_box(const MPoly& g, const std::vector<ExtInterval>& box);

// The per-point dual region: one polynomial in y per atom template.
struct DualRegionPredicate {
    int point_id = -1;
    std::vector<MPoly> atom_polys;  // aligned with the family's templates
};

// Maps ranges to their parameter vectors; rejects mixed families/templates.
std::vector<ParamPoint> parametrize(const std::vector<RangeRegion>& ranges);
// Substitutes the point into every atom template of the family exemplar.
DualRegionPredicate lift_point(const Point2& p, const RangeRegion& exemplar);

// Product-of-median-splits partition: open boxes with at most |pts|/D members
// each; points on a chosen hyperplane go to that hyperplane's residue group.
struct MedianSplitResult {
    struct Cell {
        std::vector<ExtInterval> box;
        std::vector<int> members;  // indices into the input selection
    };
    std::vector<Cell> cells;
    // (coordinate, value, member indices): residue per split hyperplane
    std::vector<std::tuple<int, Rational, std::vector<int>>> residues;
};
MedianSplitResult partition_parameter_space(const std::vector<std::vector<Rational>>& pts,
                                            const std::vector<std::optional<Rational>>& fixed,
                                            int D);

// Full parameter-space strategy (handles boolean shapes; `auto` pipeline).
BicliquePartition biclique_param(const std::vector<RangeRegion>& ranges,
                                 const std::vector<Point2>& points, const BuildConfig& cfg,
                                 CuttingStats* stats);

// Boolean-predicate wrapper: disjunctions become disjoint conjunction chains.
// Same implementation surface as biclique_param, which delegates here.
BicliquePartition biclique_boolean(const std::vector<RangeRegion>& ranges,
                                   const std::vector<Point2>& points, const BuildConfig& cfg,
                                   CuttingStats* stats);

// 1-dimensional base case: ranges on a line, interval stabbing through a
// segment tree with canonical subsets.  Exposed for tests.
struct LineInterval {
    Abscissa lo, hi;
    bool lo_closed = true, hi_closed = true;
};
BicliquePartition base_case_curve(const std::vector<Rational>& sigma_positions,
                                  const std::vector<int>& sigma_range_ids,
                                  const std::vector<std::pair<int, std::vector<LineInterval>>>&
                                      point_intervals);

}  // namespace bcp
