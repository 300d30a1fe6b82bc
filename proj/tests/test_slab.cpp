#include <cmath>
#include <random>

#include "bcp/instance.hpp"
#include "bcp/primal.hpp"
#include "bcp/slab_tree.hpp"
#include "doctest.h"

using namespace bcp;

namespace {

int incidence_node_count(const SlabTree& t, int trap_id, const Point2& p) {
    int count = 0;
    for (const auto& n : t.nodes) {
        bool stored = false;
        for (int s : n.stored)
            if (s == trap_id) stored = true;
        if (!stored) continue;
        if (n.lo.compare(p.x) < 0 && n.hi.compare(p.x) >= 0) ++count;
    }
    return count;
}

}  // namespace

TEST_CASE("slab tree simple cases") {
    ArcSet store;
    auto disk = make_disk(0, Rational(0), Rational(0), Rational(25));
    std::vector<int> ids;
    for (const auto& a : split_x_monotone(disk, store)) ids.push_back(a.id);
    auto cells = vertical_decompose(disk, store, ids);
    for (size_t i = 0; i < cells.size(); ++i) cells[i].id = static_cast<int>(i);
    std::vector<Point2> pts{{Rational(0), Rational(0), 0},
                            {Rational(1), Rational(1), 1},
                            {Rational(-1), Rational(2), 2}};
    SlabTree t = SlabTree::build(cells, pts);
    int stored_nodes = 0;
    for (const auto& n : t.nodes) stored_nodes += static_cast<int>(n.stored.size());
    CHECK(stored_nodes == 1);  // the full span is one elementary interval
    for (const auto& p : pts) CHECK(incidence_node_count(t, 0, p) == 1);

    SlabTree t0 = SlabTree::build({}, pts);
    CHECK(t0.nodes.size() == 1);
    CHECK(t0.nodes[0].stored.empty());
    CHECK(t0.nodes[0].m_v() == 3);

    // two disjoint-span trapezoids: never stored on a shared node
    ArcSet store2;
    std::vector<PseudoTrapezoid> cells2;
    auto d1 = make_disk(0, Rational(0), Rational(0), Rational(1));
    auto d2 = make_disk(1, Rational(10), Rational(0), Rational(1));
    std::vector<int> i1, i2;
    for (const auto& a : split_x_monotone(d1, store2)) i1.push_back(a.id);
    for (const auto& a : split_x_monotone(d2, store2)) i2.push_back(a.id);
    for (auto& c : vertical_decompose(d1, store2, i1)) {
        c.id = static_cast<int>(cells2.size());
        cells2.push_back(c);
    }
    for (auto& c : vertical_decompose(d2, store2, i2)) {
        c.id = static_cast<int>(cells2.size());
        cells2.push_back(c);
    }
    SlabTree t2 = SlabTree::build(cells2, {});
    for (const auto& n : t2.nodes) {
        bool has0 = false, has1 = false;
        for (int s : n.stored) (s == 0 ? has0 : has1) = true;
        CHECK(!(has0 && has1));
    }
}

TEST_CASE("slab tree sum bounds with explicit constants") {
    InstanceSpec inst = generate_instance("uniform-disks", 60, 40, 3);
    PipelineGeometry geo = build_geometry(inst.ranges);
    SlabTree t = SlabTree::build(geo.trapezoids, inst.points);
    long N = static_cast<long>(geo.trapezoids.size());
    long m = static_cast<long>(inst.points.size());
    long log_term = static_cast<long>(std::ceil(std::log2(static_cast<double>(2 * N + 2))));
    CHECK(t.sum_n() <= 2 * N * log_term + 2 * N);
    CHECK(t.sum_m() <= m * (log_term + 1));
    CHECK(t.levels <= log_term + 1);
}

TEST_CASE("slab tree: exactly one node owns each incidence") {
    InstanceSpec inst = generate_instance("uniform-disks", 50, 25, 7);
    PipelineGeometry geo = build_geometry(inst.ranges);
    SlabTree t = SlabTree::build(geo.trapezoids, inst.points);
    for (const auto& tr : geo.trapezoids) {
        for (const auto& p : inst.points) {
            int nodes_with_pair = 0;
            for (const auto& n : t.nodes) {
                bool stored = false;
                for (int s : n.stored)
                    if (s == tr.id) stored = true;
                if (!stored) continue;
                if (!(n.lo.compare(p.x) < 0 && n.hi.compare(p.x) >= 0)) continue;
                bool in_y = true;
                if (tr.bottom_arc >= 0) {
                    SideOf s = point_side_of_arc(p, geo.arcs[tr.bottom_arc]);
                    in_y = in_y && (s == SideOf::Above ||
                                    (s == SideOf::On && geo.arcs[tr.bottom_arc].boundary_closed));
                }
                if (tr.top_arc >= 0) {
                    SideOf s = point_side_of_arc(p, geo.arcs[tr.top_arc]);
                    in_y = in_y && (s == SideOf::Below ||
                                    (s == SideOf::On && geo.arcs[tr.top_arc].boundary_closed));
                }
                if (in_y) ++nodes_with_pair;
            }
            bool owned = pipeline_owns(p, tr, geo.arcs);
            CHECK(nodes_with_pair == (owned ? 1 : 0));
        }
    }
}
