#include <map>
#include <random>

#include "bcp/instance.hpp"
#include "bcp/pseudo.hpp"
#include "doctest.h"

using namespace bcp;

TEST_CASE("split_x_monotone per-family counts") {
    ArcSet store;
    auto disk = make_disk(0, Rational(0), Rational(0), Rational(25));
    auto arcs = split_x_monotone(disk, store);
    REQUIRE(arcs.size() == 2);
    for (const auto& a : arcs) {
        CHECK(a.lo.compare(Rational(-5)) == 0);
        CHECK(a.hi.compare(Rational(5)) == 0);
        CHECK(a.boundary_closed);
    }
    CHECK(arcs[0].role != arcs[1].role);

    auto half = make_halfplane(1, Rational(0), Rational(0));
    auto harcs = split_x_monotone(half, store);
    REQUIRE(harcs.size() == 1);
    CHECK(harcs[0].lo.kind() == Abscissa::Kind::NegInf);
    CHECK(harcs[0].hi.kind() == Abscissa::Kind::PosInf);
    CHECK(harcs[0].role == ArcRole::bottom);

    auto para = make_parabolic(2, Rational(1), Rational(0), Rational(0));
    CHECK(split_x_monotone(para, store).size() == 1);

    auto ann = make_annulus(3, Rational(0), Rational(0), Rational(1), Rational(4));
    auto aarcs = split_x_monotone(ann, store);
    CHECK(aarcs.size() == 4);
}

TEST_CASE("split_x_monotone degenerate ranges") {
    ArcSet store;
    CHECK_THROWS_AS(split_x_monotone(make_disk(0, Rational(0), Rational(0), Rational(0)), store),
                    DegenerateRange);
    CHECK_THROWS_AS(
        split_x_monotone(make_annulus(0, Rational(0), Rational(0), Rational(4), Rational(4)),
                         store),
        DegenerateRange);
    // negative radius-squared: empty set, no boundary, handled as a special
    auto arcs = split_x_monotone(make_disk(0, Rational(0), Rational(0), Rational(-1)), store);
    CHECK(arcs.empty());
    CHECK(!range_is_everything(make_disk(0, Rational(0), Rational(0), Rational(-1))));
}

TEST_CASE("cut_to_pseudosegments on a two-crossing pair") {
    ArcSet store;
    auto d0 = make_disk(0, Rational(0), Rational(0), Rational(25));
    auto d1 = make_disk(1, Rational(0), Rational(3), Rational(25));
    std::vector<int> ids;
    for (const auto& a : split_x_monotone(d0, store))
        if (a.branch == 1) ids.push_back(a.id);  // upper arc of d0
    for (const auto& a : split_x_monotone(d1, store))
        if (a.branch == 0) ids.push_back(a.id);  // lower arc of d1
    REQUIRE(ids.size() == 2);
    REQUIRE(store.intersections(ids[0], ids[1]).size() == 2);
    auto out = cut_to_pseudosegments(store, ids);
    CHECK(out.size() == 3);
    for (size_t i = 0; i < out.size(); ++i)
        for (size_t j = i + 1; j < out.size(); ++j)
            CHECK(store.intersections(out[i], out[j]).size() <= 1);
}

TEST_CASE("cut_to_pseudosegments leaves single-crossing pairs alone") {
    ArcSet store;
    auto d0 = make_disk(0, Rational(0), Rational(0), Rational(25));
    auto d1 = make_disk(1, Rational(6), Rational(0), Rational(25));
    std::vector<int> ids;
    for (const auto& a : split_x_monotone(d0, store))
        if (a.branch == 1) ids.push_back(a.id);
    for (const auto& a : split_x_monotone(d1, store))
        if (a.branch == 1) ids.push_back(a.id);
    auto out = cut_to_pseudosegments(store, ids);
    CHECK(out.size() == 2);

    ArcSet store2;
    CHECK(cut_to_pseudosegments(store2, {}).empty());
}

TEST_CASE("cut conserves spans and crossings") {
    ArcSet store;
    std::vector<int> ids;
    std::mt19937_64 rng(5);
    for (int i = 0; i < 8; ++i) {
        long cx = static_cast<long>(rng() % 9) - 4;
        long cy = static_cast<long>(rng() % 5) - 2;
        auto d = make_disk(i, Rational(cx), Rational(cy), Rational(20 + (long)(rng() % 10)));
        for (const auto& a : split_x_monotone(d, store)) ids.push_back(a.id);
    }
    long chi_before = count_crossings(store, ids);
    auto out = cut_to_pseudosegments(store, ids);
    long chi_after = count_crossings(store, out);
    CHECK(chi_before == chi_after);  // cutting neither creates nor destroys intersections
    // the pieces of each input arc tile its span
    std::map<int, std::vector<const XMonotoneArc*>> groups;
    for (int id : out) {
        const auto& a = store[id];
        groups[a.source_range * 8 + a.branch].push_back(&a);
    }
    for (auto& [key, parts] : groups) {
        std::sort(parts.begin(), parts.end(), [](const XMonotoneArc* a, const XMonotoneArc* b) {
            return a->lo.compare(b->lo) < 0;
        });
        for (size_t k = 0; k + 1 < parts.size(); ++k)
            CHECK(parts[k]->hi.compare(parts[k + 1]->lo) == 0);
    }
    // pseudo-segment property holds exhaustively
    for (size_t i = 0; i < out.size(); ++i)
        for (size_t j = i + 1; j < out.size(); ++j)
            CHECK(store.intersections(out[i], out[j]).size() <= 1);
}

TEST_CASE("vertical_decompose: disk, halfplane, cut disk") {
    ArcSet store;
    auto disk = make_disk(0, Rational(0), Rational(0), Rational(25));
    std::vector<int> ids;
    for (const auto& a : split_x_monotone(disk, store)) ids.push_back(a.id);
    auto cells = vertical_decompose(disk, store, ids);
    REQUIRE(cells.size() == 1);
    CHECK(cells[0].bottom_arc >= 0);
    CHECK(cells[0].top_arc >= 0);
    CHECK(cells[0].left.compare(Rational(-5)) == 0);
    CHECK(cells[0].right.compare(Rational(5)) == 0);
    CHECK(cells[0].leftmost);

    auto half = make_halfplane(1, Rational(0), Rational(0));
    std::vector<int> hids;
    for (const auto& a : split_x_monotone(half, store)) hids.push_back(a.id);
    auto hcells = vertical_decompose(half, store, hids);
    REQUIRE(hcells.size() == 1);
    CHECK(hcells[0].top_arc == -1);
    CHECK(hcells[0].bottom_arc >= 0);

    // disk with the upper arc cut at x = 1: two trapezoids sharing the wall
    ArcSet store2;
    std::vector<int> ids2;
    auto disk2 = make_disk(0, Rational(0), Rational(0), Rational(25));
    for (const auto& a : split_x_monotone(disk2, store2)) {
        if (a.branch == 1) {
            XMonotoneArc left = a, right = a;
            left.hi = Abscissa::rational(Rational(1));
            right.lo = Abscissa::rational(Rational(1));
            ids2.push_back(store2.add(left));
            ids2.push_back(store2.add(right));
        } else {
            ids2.push_back(a.id);
        }
    }
    auto cells2 = vertical_decompose(disk2, store2, ids2);
    REQUIRE(cells2.size() == 2);
    CHECK(cells2[0].right.compare(Rational(1)) == 0);
    CHECK(cells2[1].left.compare(Rational(1)) == 0);
    CHECK(cells2[0].leftmost);
    CHECK(!cells2[1].leftmost);
    // direct construction check: disjoint ownership, union is the disk
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 500; ++rep) {
        Point2 q{make_rational(static_cast<long>(rng() % 161) - 80, 16),
                 make_rational(static_cast<long>(rng() % 161) - 80, 16), -1};
        int owners = 0;
        for (const auto& c : cells2)
            if (point_in_trapezoid(q, c, store2)) ++owners;
        bool inside = point_in_range(q, disk2);
        CHECK(owners == (inside ? 1 : 0));
    }
}

TEST_CASE("coverage: random ranges, ownership is a partition of the range") {
    std::mt19937_64 rng(23);
    for (int rep = 0; rep < 6; ++rep) {
        std::string kind = rep % 2 ? "annuli" : (rep % 3 ? "uniform-disks" : "boolean-mix");
        InstanceSpec inst = generate_instance(kind, 0, 6, 100 + static_cast<uint64_t>(rep));
        PipelineGeometry geo = build_geometry(inst.ranges);
        for (int check = 0; check < 1000; ++check) {
            Point2 q{make_rational(static_cast<long>(rng() % 40961) - 20480, 16),
                     make_rational(static_cast<long>(rng() % 40961) - 20480, 16), -1};
            for (size_t ri = 0; ri < inst.ranges.size(); ++ri) {
                if (geo.always_true[ri] || geo.always_false[ri]) continue;
                int owners = 0;
                for (int t : geo.by_range[ri])
                    if (point_in_trapezoid(q, geo.trapezoids[static_cast<size_t>(t)], geo.arcs))
                        ++owners;
                bool inside = point_in_range(q, inst.ranges[ri]);
                CHECK(owners == (inside ? 1 : 0));
            }
        }
    }
}

TEST_CASE("N bounded by subarcs plus family constants; chi preserved by cutting") {
    InstanceSpec inst = generate_instance("uniform-disks", 0, 40, 9);
    PipelineGeometry geo = build_geometry(inst.ranges);
    long subarcs = static_cast<long>(geo.subarc_ids.size());
    long N = static_cast<long>(geo.trapezoids.size());
    CHECK(N <= subarcs + static_cast<long>(inst.ranges.size()) * 2);
    ArcSet fresh;
    std::vector<int> raw;
    for (const auto& r : inst.ranges)
        for (const auto& a : split_x_monotone(r, fresh)) raw.push_back(a.id);
    CHECK(count_crossings(fresh, raw) == geo.chi);
}
