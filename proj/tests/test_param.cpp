#include <random>
#include <set>

#include "bcp/harness.hpp"
#include "bcp/param.hpp"
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

std::set<std::pair<int, int>> oracle_pairs(const InstanceSpec& inst) {
    auto v = brute_force_incidences(inst);
    return {v.begin(), v.end()};
}

}  // namespace

TEST_CASE("parametrize and lift") {
    std::vector<RangeRegion> disks{make_disk(0, Rational(2), Rational(3), Rational(5))};
    auto pts = parametrize(disks);
    REQUIRE(pts.size() == 1);
    REQUIRE(pts[0].coords.size() == 3);
    CHECK(pts[0].coords[0] == Rational(2));
    CHECK(pts[0].coords[1] == Rational(3));
    CHECK(pts[0].coords[2] == Rational(5));

    std::vector<RangeRegion> halves{make_halfplane(0, Rational(1), Rational(-2))};
    auto hpts = parametrize(halves);
    CHECK(hpts[0].coords.size() == 2);

    // p = (0,0), disk family: lifted atom is c - a^2 - b^2
    DualRegionPredicate lifted = lift_point(Point2{Rational(0), Rational(0), 0}, disks[0]);
    REQUIRE(lifted.atom_polys.size() == 1);
    for (long a = -2; a <= 2; ++a)
        for (long b = -2; b <= 2; ++b)
            for (long c = 0; c <= 6; ++c) {
                Rational want = Rational(c) - Rational(a * a) - Rational(b * b);
                CHECK(lifted.atom_polys[0].eval({Rational(a), Rational(b), Rational(c)}) == want);
            }

    std::vector<RangeRegion> mixed{make_disk(0, Rational(0), Rational(0), Rational(1)),
                                   make_halfplane(1, Rational(0), Rational(0))};
    CHECK_THROWS_AS(parametrize(mixed), InvalidInput);
}

TEST_CASE("lift equivalence property on random pairs") {
    std::mt19937_64 rng(4);
    for (const char* kind : {"uniform-disks", "annuli", "parabolic"}) {
        InstanceSpec inst = generate_instance(kind, 25, 15, 900);
        const RangeRegion& ex = inst.ranges[0];
        for (const auto& p : inst.points) {
            DualRegionPredicate lifted = lift_point(p, ex);
            for (const auto& r : inst.ranges) {
                std::vector<bool> sat(lifted.atom_polys.size());
                for (size_t a = 0; a < lifted.atom_polys.size(); ++a) {
                    int s = sign_of(lifted.atom_polys[a].eval(r.params));
                    sat[a] = r.atoms[a].strict ? (s > 0) : (s >= 0);
                }
                CHECK(eval_shape(ex.shape, sat) == point_in_range(p, r));
            }
        }
    }
}

TEST_CASE("partition_parameter_space contract") {
    std::mt19937_64 rng(6);
    {
        // 16 generic points in R^3, D = 8: every cell holds at most 2
        std::vector<std::vector<Rational>> pts;
        for (int i = 0; i < 16; ++i)
            pts.push_back({make_rational(static_cast<long>(rng() % 1000), 7),
                           make_rational(static_cast<long>(rng() % 1000), 11),
                           make_rational(static_cast<long>(rng() % 1000), 13)});
        std::vector<std::optional<Rational>> fixed(3);
        auto res = partition_parameter_space(pts, fixed, 8);
        long total = 0;
        for (const auto& c : res.cells) {
            CHECK(c.members.size() * 8 <= pts.size());
            total += static_cast<long>(c.members.size());
        }
        for (const auto& [var, val, members] : res.residues)
            total += static_cast<long>(members.size());
        CHECK(total == 16);
    }
    {
        // all coincident: everything lands in a residue
        std::vector<std::vector<Rational>> pts(10, {Rational(1), Rational(2)});
        std::vector<std::optional<Rational>> fixed(2);
        auto res = partition_parameter_space(pts, fixed, 4);
        long in_cells = 0;
        for (const auto& c : res.cells) in_cells += static_cast<long>(c.members.size());
        CHECK(in_cells == 0);
        long in_res = 0;
        for (const auto& [var, val, members] : res.residues)
            in_res += static_cast<long>(members.size());
        CHECK(in_res == 10);
    }
    {
        // D = 1: a single cell, no residue required
        std::vector<std::vector<Rational>> pts;
        for (int i = 0; i < 5; ++i) pts.push_back({Rational(i), Rational(-i)});
        std::vector<std::optional<Rational>> fixed(2);
        auto res = partition_parameter_space(pts, fixed, 1);
        CHECK(res.cells.size() == 1);
        CHECK(res.residues.empty());
        CHECK(res.cells[0].members.size() == 5);
    }
}

TEST_CASE("base_case_curve interval stabbing") {
    std::vector<Rational> pos{Rational(1), Rational(2), Rational(3), Rational(4)};
    std::vector<int> ids{10, 11, 12, 13};
    {
        // one interval covering positions 2..3
        std::vector<std::pair<int, std::vector<LineInterval>>> ivs{
            {7,
             {{Abscissa::rational(Rational(2)), Abscissa::rational(Rational(3)), true, true}}}};
        auto part = base_case_curve(pos, ids, ivs);
        auto pairs = expand_pairs(part);
        std::set<std::pair<int, int>> want{{11, 7}, {12, 7}};
        CHECK(pairs == want);
    }
    {
        // empty interval set: no pairs
        std::vector<std::pair<int, std::vector<LineInterval>>> ivs{{7, {}}};
        CHECK(base_case_curve(pos, ids, ivs).bicliques.empty());
    }
    {
        // interval covering everything
        std::vector<std::pair<int, std::vector<LineInterval>>> ivs{
            {7, {{Abscissa::neg_inf(), Abscissa::pos_inf(), false, false}}}};
        auto part = base_case_curve(pos, ids, ivs);
        CHECK(expand_pairs(part).size() == 4);
    }
}

TEST_CASE("biclique_param: trivial and stopping-rule cases") {
    BuildConfig cfg;
    {
        InstanceSpec inst;
        inst.ranges.push_back(make_disk(0, Rational(0), Rational(0), Rational(4)));
        inst.points.push_back({Rational(1), Rational(0), 0});
        auto part = biclique_param(inst.ranges, inst.points, cfg, nullptr);
        auto pairs = expand_pairs(part);
        CHECK(pairs == std::set<std::pair<int, int>>{{0, 0}});
    }
    {
        // m >> n^{5/4}: the stopping rule fires at the root, no param stages appear
        InstanceSpec inst = generate_instance("uniform-disks", 150, 3, 31);
        auto part = biclique_param(inst.ranges, inst.points, cfg, nullptr);
        for (const auto& b : part.bicliques) {
            CHECK(b.stage != Stage::param_container);
            CHECK(b.stage != Stage::base_case);
        }
        CHECK(expand_pairs(part) == oracle_pairs(inst));
    }
}

TEST_CASE("biclique_param: random disks equal brute force") {
    BuildConfig cfg;
    for (uint64_t seed = 0; seed < 3; ++seed) {
        InstanceSpec inst = generate_instance("uniform-disks", 150, 150, 2000 + seed);
        auto part = biclique_param(inst.ranges, inst.points, cfg, nullptr);
        CHECK(expand_pairs(part) == oracle_pairs(inst));
    }
}

TEST_CASE("biclique_param: halfplanes (s=2) and annuli (s=4)") {
    BuildConfig cfg;
    for (const char* kind : {"uniform-halfplanes", "annuli"}) {
        InstanceSpec inst = generate_instance(kind, 90, 90, 55);
        auto part = biclique_param(inst.ranges, inst.points, cfg, nullptr);
        CHECK(expand_pairs(part) == oracle_pairs(inst));
    }
}

TEST_CASE("biclique_boolean: crescents, unions, reduced conjunctions") {
    BuildConfig cfg;
    {
        // crescents (conjunction with negation) against the oracle
        InstanceSpec inst = generate_instance("boolean-mix", 80, 40, 10);  // even seed: crescents
        auto part = biclique_boolean(inst.ranges, inst.points, cfg, nullptr);
        CHECK(expand_pairs(part) == oracle_pairs(inst));
    }
    {
        // unions: disjoint conjunction expansion covers each pair exactly once
        InstanceSpec inst = generate_instance("boolean-mix", 80, 40, 11);  // odd seed: unions
        auto part = biclique_boolean(inst.ranges, inst.points, cfg, nullptr);
        CHECK(expand_pairs(part) == oracle_pairs(inst));
    }
    {
        // disjunction of two far-apart disks: pair counts add up
        InstanceSpec inst;
        BoolShape shape;
        shape.op = BoolShape::Op::disj;
        shape.children = {BoolShape::leaf_of(0), BoolShape::leaf_of(1)};
        for (int i = 0; i < 8; ++i) {
            std::vector<Rational> params{Rational(-50), Rational(0), Rational(20 + i),
                                         Rational(50), Rational(0), Rational(30 + i)};
            inst.ranges.push_back(make_custom(
                i, params,
                {{AtomKind::disk, {0, 1, 2}, false}, {AtomKind::disk, {3, 4, 5}, false}}, shape));
        }
        for (int i = 0; i < 40; ++i)
            inst.points.push_back({Rational(-50 + (i % 20) - 10 + (i >= 20 ? 100 : 0)),
                                   Rational(i / 4 - 5), i});
        auto part = biclique_boolean(inst.ranges, inst.points, cfg, nullptr);
        CHECK(expand_pairs(part) == oracle_pairs(inst));
    }
    {
        // conjunction with an always-true atom behaves like the plain disk
        InstanceSpec inst;
        BoolShape shape;
        shape.op = BoolShape::Op::conj;
        shape.children = {BoolShape::leaf_of(0), BoolShape::leaf_of(1)};
        for (int i = 0; i < 6; ++i) {
            // second atom: disk with huge radius, satisfied by every test point
            std::vector<Rational> params{Rational(i), Rational(0), Rational(9), Rational(0),
                                         Rational(0), Rational(1000000)};
            inst.ranges.push_back(make_custom(
                i, params,
                {{AtomKind::disk, {0, 1, 2}, false}, {AtomKind::disk, {3, 4, 5}, false}}, shape));
        }
        InstanceSpec plain;
        for (int i = 0; i < 6; ++i)
            plain.ranges.push_back(make_disk(i, Rational(i), Rational(0), Rational(9)));
        for (int i = 0; i < 30; ++i) {
            Point2 p{Rational(i % 10 - 3), Rational(i / 10 - 1), i};
            inst.points.push_back(p);
            plain.points.push_back(p);
        }
        auto part = biclique_boolean(inst.ranges, inst.points, cfg, nullptr);
        CHECK(expand_pairs(part) == oracle_pairs(plain));
    }
}
