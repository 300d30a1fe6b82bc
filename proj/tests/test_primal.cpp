#include <map>
#include <random>
#include <set>

#include "bcp/harness.hpp"
#include "bcp/primal.hpp"
#include "doctest.h"

using namespace bcp;

namespace {

std::set<std::pair<int, int>> expand_pairs(const BicliquePartition& part) {
    std::set<std::pair<int, int>> pairs;
    for (const auto& b : part.bicliques)
        for (int r : b.range_ids)
            for (int p : b.point_ids) {
                auto [it, fresh] = pairs.insert({r, p});
                REQUIRE(fresh);
            }
    return pairs;
}

}  // namespace

TEST_CASE("choose_r formula") {
    CHECK(choose_r(1000, 1000, 1000000) == 10);
    CHECK(choose_r(1000, 8000, 8000) == 1000);
    CHECK(choose_r(1000, 50, 0) == 1000);
    CHECK(choose_r(7, 3, 1) == 7);
}

TEST_CASE("primal_hierarchical_cutting: trivial cases") {
    BuildConfig cfg;
    std::mt19937_64 rng(1);
    InstanceSpec inst = generate_instance("uniform-disks", 30, 12, 5);
    PipelineGeometry geo = build_geometry(inst.ranges);
    std::vector<int> all_traps;
    for (const auto& t : geo.trapezoids) all_traps.push_back(t.id);

    // r = 1: depth 0, container cell only
    PrimalHierarchy h1 =
        primal_hierarchical_cutting(geo.arcs, geo.trapezoids, all_traps, inst.points,
                                    Abscissa::neg_inf(), Abscissa::pos_inf(), 1, 4, cfg, rng,
                                    nullptr);
    CHECK(h1.nu == 0);
    CHECK(h1.levels.size() == 1);

    // no arcs: the container persists at every level
    PrimalHierarchy h0 = primal_hierarchical_cutting(geo.arcs, geo.trapezoids, {}, inst.points,
                                                     Abscissa::neg_inf(), Abscissa::pos_inf(), 4,
                                                     4, cfg, rng, nullptr);
    for (const auto& lvl : h0.levels) CHECK(lvl.size() == 1);
}

TEST_CASE("primal_hierarchical_cutting: crossing bound and nesting on random arcs") {
    BuildConfig cfg;
    std::mt19937_64 rng(2);
    InstanceSpec inst = generate_instance("uniform-disks", 100, 60, 77);
    PipelineGeometry geo = build_geometry(inst.ranges);
    SlabTree tree = SlabTree::build(geo.trapezoids, inst.points);
    const SlabNode* best = nullptr;
    for (const auto& n : tree.nodes)
        if (!n.stored.empty() && (!best || n.n_v() > best->n_v())) best = &n;
    REQUIRE(best != nullptr);
    std::map<int, const Point2*> by_id;
    for (const auto& p : inst.points) by_id[p.id] = &p;
    std::vector<Point2> pv;
    for (int k = best->pt_begin; k < best->pt_end; ++k)
        pv.push_back(*by_id[tree.pt_order[static_cast<size_t>(k)]]);

    CuttingStats stats;
    PrimalHierarchy h =
        primal_hierarchical_cutting(geo.arcs, geo.trapezoids, best->stored, pv, best->lo,
                                    best->hi, 16, 4, cfg, rng, &stats);
    long N_v = static_cast<long>(best->stored.size());
    for (size_t lvl = 1; lvl < h.levels.size(); ++lvl) {
        long pw = 1;
        for (size_t i = 0; i < lvl; ++i) pw *= 4;
        long pts_total = 0;
        for (const auto& cell : h.levels[lvl]) {
            CHECK(static_cast<long>(cell.conflict.size()) <= N_v / pw);
            pts_total += static_cast<long>(cell.cell_points.size());
            // monotone refinement: nested x-ranges within the parent
            const auto& par = h.levels[lvl - 1][static_cast<size_t>(cell.parent)];
            CHECK(par.lo.compare(cell.lo) <= 0);
            CHECK(cell.hi.compare(par.hi) <= 0);
            // containers hold every cell point
            for (int t : cell.containers) {
                const auto& tr = geo.trapezoids[static_cast<size_t>(t)];
                for (int pid : cell.cell_points) {
                    Point2 p = *by_id[pid];
                    bool in = true;
                    if (tr.bottom_arc >= 0)
                        in = in && point_side_of_arc(p, geo.arcs[tr.bottom_arc]) != SideOf::Below;
                    if (tr.top_arc >= 0)
                        in = in && point_side_of_arc(p, geo.arcs[tr.top_arc]) != SideOf::Above;
                    CHECK(in);
                }
            }
        }
        CHECK(pts_total == static_cast<long>(pv.size()));
    }
    long sum_bottom = 0;
    for (const auto& cell : h.levels.back())
        sum_bottom += static_cast<long>(cell.conflict.size());
    CHECK(sum_bottom <= static_cast<long>(h.levels.back().size()) * N_v / h.r);
}

TEST_CASE("biclique_primal: small oracles") {
    BuildConfig cfg;
    {
        // one disk, ten points, six inside
        InstanceSpec inst;
        inst.ranges.push_back(make_disk(0, Rational(0), Rational(0), Rational(25)));
        for (int i = 0; i < 6; ++i)
            inst.points.push_back({Rational(i % 3 - 1), Rational(i / 3 - 1), i});
        for (int i = 6; i < 10; ++i)
            inst.points.push_back({Rational(100 + i), Rational(0), i});
        auto part = biclique_primal(inst.ranges, inst.points, cfg, nullptr);
        CHECK(expand_pairs(part).size() == 6);
    }
    {
        // all points outside all ranges
        InstanceSpec inst;
        inst.ranges.push_back(make_disk(0, Rational(0), Rational(0), Rational(1)));
        inst.ranges.push_back(make_disk(1, Rational(5), Rational(5), Rational(1)));
        inst.points.push_back({Rational(100), Rational(100), 0});
        auto part = biclique_primal(inst.ranges, inst.points, cfg, nullptr);
        CHECK(part.bicliques.empty());
    }
}

TEST_CASE("biclique_primal: random instances equal brute force") {
    BuildConfig cfg;
    for (uint64_t seed = 0; seed < 3; ++seed) {
        InstanceSpec inst = generate_instance("uniform-disks", 220, 70, 1000 + seed);
        auto part = biclique_primal(inst.ranges, inst.points, cfg, nullptr);
        auto pairs = expand_pairs(part);
        auto oracle = brute_force_incidences(inst);
        std::set<std::pair<int, int>> want(oracle.begin(), oracle.end());
        CHECK(pairs == want);
        // Eq.(1) structure: containment pairs and delegate pairs never overlap
        std::set<std::pair<int, int>> containment;
        for (const auto& b : part.bicliques) {
            if (b.stage != Stage::primal_container) continue;
            for (int r : b.range_ids)
                for (int p : b.point_ids) containment.insert({r, p});
        }
        for (const auto& b : part.bicliques) {
            if (b.stage != Stage::dual_cell) continue;
            for (int r : b.range_ids)
                for (int p : b.point_ids) CHECK(!containment.count({r, p}));
        }
    }
}

TEST_CASE("biclique_primal: halfplanes, annuli, parabolic") {
    BuildConfig cfg;
    for (const char* kind : {"uniform-halfplanes", "annuli", "parabolic"}) {
        InstanceSpec inst = generate_instance(kind, 120, 40, 42);
        auto part = biclique_primal(inst.ranges, inst.points, cfg, nullptr);
        auto pairs = expand_pairs(part);
        auto oracle = brute_force_incidences(inst);
        std::set<std::pair<int, int>> want(oracle.begin(), oracle.end());
        CHECK(pairs == want);
    }
}
