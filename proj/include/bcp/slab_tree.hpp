#pragma once

#include <vector>

#include "bcp/pseudo.hpp"

namespace bcp {

// Segment-tree node over the elementary x-intervals of trapezoid projections.
// The slab is (lo, hi]; points with x on an interval endpoint route left.
struct SlabNode {
    int id = -1, parent = -1, child_left = -1, child_right = -1;
    Abscissa lo, hi;
    std::vector<int> stored;  // trapezoid ids whose projection covers this node but not its parent
    int pt_begin = 0, pt_end = 0;  // range into SlabTree::pt_order

    bool leaf() const { return child_left < 0; }
    int n_v() const { return static_cast<int>(stored.size()); }
    int m_v() const { return pt_end - pt_begin; }
};

struct SlabTree {
    std::vector<SlabNode> nodes;  // nodes[0] = root (when non-empty)
    std::vector<int> pt_order;    // point ids ordered leaf-by-leaf
    std::vector<Abscissa> endpoints;
    int levels = 0;

    static SlabTree build(const std::vector<PseudoTrapezoid>& trapezoids,
                          const std::vector<Point2>& points);

    long sum_n() const;
    long sum_m() const;
    int elementary_count() const { return static_cast<int>(endpoints.size()) + 1; }
};

}  // namespace bcp
