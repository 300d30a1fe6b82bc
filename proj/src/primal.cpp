#include "bcp/primal.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "bcp/errors.hpp"
#include "sweep_impl.hpp"

namespace bcp {

namespace {

using detail::Rel;
using detail::SweepCellGeo;

long ipow(long b, int e) {
    long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

struct CellBudgetExceeded {};

// Arena over pseudo-segment arcs clipped to a slab: order flips only at
// transversal crossings; tangencies and endpoint touches never flip.
struct ArcArena {
    const ArcSet& arcs;
    std::optional<Abscissa> crossing(int u, int w) const {
        if (u == w) return std::nullopt;
        for (const auto& it : arcs.intersections(u, w))
            if (it.transversal) return it.x;
        return std::nullopt;
    }
    int order3(int u, int w, const Rational& x) const {
        if (u == w) return 0;
        return arc_value_at(arcs[u], x).compare(arc_value_at(arcs[w], x));
    }
};

// All common points of the arc pair inside the closed x-range.
bool arcs_touch_in(const ArcSet& arcs, int a, int b, const Abscissa& lo, const Abscissa& hi) {
    if (a == b) return true;
    for (const auto& it : arcs.intersections(a, b))
        if (it.x.compare(lo) >= 0 && it.x.compare(hi) <= 0) return true;
    return false;
}

enum class TrapRel { container_candidate, crossing, contact, outside_above, outside_below };

// One boundary arc of a trapezoid against a cell.
TrapRel arc_vs_cell(const ArcSet& arcs, int a, const SweepCellGeo& cell) {
    if (a == cell.bot || a == cell.top) return TrapRel::contact;
    bool contact = false;
    if (cell.bot >= 0 && arcs_touch_in(arcs, a, cell.bot, cell.lo, cell.hi)) contact = true;
    if (cell.top >= 0 && arcs_touch_in(arcs, a, cell.top, cell.lo, cell.hi)) contact = true;
    ArcArena arena{arcs};
    Rel rel = detail::classify_vs_cell(arena, a, cell);
    if (rel == Rel::crossing) return TrapRel::crossing;
    if (contact) return TrapRel::contact;
    return rel == Rel::above ? TrapRel::outside_above : TrapRel::outside_below;
}

// Interior sample point of a cell (strictly inside).
Point2 cell_sample(const ArcSet& arcs, const SweepCellGeo& cell) {
    Rational xs = rational_between(cell.lo, cell.hi);
    Rational ys;
    if (cell.bot < 0 && cell.top < 0) {
        ys = 0;
    } else if (cell.bot < 0) {
        SurdValue v = arc_value_at(arcs[cell.top], xs);
        Rational lo, hi;
        surd_enclosure(v, Rational(1), lo, hi);
        ys = lo - 1;
    } else if (cell.top < 0) {
        SurdValue v = arc_value_at(arcs[cell.bot], xs);
        Rational lo, hi;
        surd_enclosure(v, Rational(1), lo, hi);
        ys = hi + 1;
    } else {
        SurdValue vb = arc_value_at(arcs[cell.bot], xs);
        SurdValue vt = arc_value_at(arcs[cell.top], xs);
        if (vb.compare(vt) >= 0) {
            // degenerate at this abscissa; probe nearer the left wall
            Rational xs2 = rational_between(cell.lo, Abscissa::rational(xs));
            vb = arc_value_at(arcs[cell.bot], xs2);
            vt = arc_value_at(arcs[cell.top], xs2);
            xs = xs2;
        }
        ys = rational_between_surds(vb, vt);
    }
    return Point2{xs, ys, -1};
}

// Point membership inside a cutting cell: (lo, hi] walls, on-arc points belong
// to the cell below the arc (strictly above bot, weakly below top).
bool cell_claims_point(const ArcSet& arcs, const SweepCellGeo& cell, const Point2& p) {
    if (cell.lo.compare(p.x) >= 0 || cell.hi.compare(p.x) < 0) return false;
    if (cell.bot >= 0 && point_side_of_arc(p, arcs[cell.bot]) != SideOf::Above) return false;
    if (cell.top >= 0) {
        SideOf s = point_side_of_arc(p, arcs[cell.top]);
        if (s != SideOf::Below && s != SideOf::On) return false;
    }
    return true;
}

}  // namespace

int choose_r(long N_v, long m_v, long chi_v) {
    if (N_v < 1) throw InvalidInput("choose_r needs N_v >= 1");
    if (chi_v < 0) throw InvalidInput("choose_r needs chi_v >= 0");
    if (chi_v == 0) return static_cast<int>(N_v);
    // smallest t with t^3 >= N^3 m^2 / chi^2
    Integer N(static_cast<long>(N_v)), M(static_cast<long>(m_v)), X(static_cast<long>(chi_v));
    Integer num = N * N * N * M * M;
    Integer den = X * X;
    long lo = 1, hi = N_v;
    auto cube_ge = [&](long t) {
        Integer T(t);
        return T * T * T * den >= num;
    };
    if (cube_ge(1)) return 1;
    if (!cube_ge(N_v)) return static_cast<int>(N_v);
    while (lo < hi) {
        long mid = lo + (hi - lo) / 2;
        if (cube_ge(mid))
            hi = mid;
        else
            lo = mid + 1;
    }
    return static_cast<int>(std::min(N_v, lo));
}

long slab_crossings(const ArcSet& arcs, const std::vector<PseudoTrapezoid>& traps,
                    const std::vector<int>& trap_ids, const Abscissa& lo, const Abscissa& hi) {
    std::vector<int> ids;
    for (int t : trap_ids) {
        const auto& tr = traps[static_cast<size_t>(t)];
        if (tr.bottom_arc >= 0) ids.push_back(tr.bottom_arc);
        if (tr.top_arc >= 0) ids.push_back(tr.top_arc);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    long chi = 0;
    for (size_t i = 0; i < ids.size(); ++i)
        for (size_t j = i + 1; j < ids.size(); ++j)
            for (const auto& it : arcs.intersections(ids[i], ids[j]))
                if (it.x.compare(lo) > 0 && it.x.compare(hi) < 0) ++chi;
    return chi;
}

PrimalHierarchy primal_hierarchical_cutting(const ArcSet& arcs,
                                            const std::vector<PseudoTrapezoid>& traps,
                                            const std::vector<int>& trap_ids,
                                            const std::vector<Point2>& pts, const Abscissa& lo,
                                            const Abscissa& hi, int r, int r0,
                                            const BuildConfig& cfg, std::mt19937_64& rng,
                                            CuttingStats* stats) {
    if (r0 < 2) throw InvalidInput("r0 must be >= 2");
    const long N_v = static_cast<long>(trap_ids.size());
    PrimalHierarchy h;
    h.r = r;
    h.r0 = r0;
    h.nu = 0;
    while (ipow(r0, h.nu) < r) ++h.nu;

    PrimalCell root;
    root.lo = lo;
    root.hi = hi;
    root.parent = -1;
    root.conflict = trap_ids;
    for (const auto& p : pts) root.cell_points.push_back(p.id);
    h.levels.push_back({root});

    std::map<int, const Point2*> by_id;
    for (const auto& p : pts) by_id[p.id] = &p;

    ArcArena arena{arcs};
    long total_cells = 1;
    for (int lvl = 1; lvl <= h.nu; ++lvl) {
        long bound = N_v / ipow(r0, lvl);
        std::vector<PrimalCell> next;
        CutLevelStats lstats;
        lstats.bound = bound;
        for (size_t pi = 0; pi < h.levels.back().size(); ++pi) {
            PrimalCell& parent = h.levels.back()[pi];
            SweepCellGeo pg{parent.lo, parent.hi, parent.bot_arc, parent.top_arc};
            // arcs of the survivors (conflict + contact) drive the refinement
            std::vector<int> survivors = parent.conflict;
            survivors.insert(survivors.end(), parent.contact.begin(), parent.contact.end());
            auto arcs_of = [&](const std::vector<int>& trap_sel) {
                std::vector<int> out;
                for (int t : trap_sel) {
                    const auto& tr = traps[static_cast<size_t>(t)];
                    if (tr.bottom_arc >= 0) out.push_back(tr.bottom_arc);
                    if (tr.top_arc >= 0) out.push_back(tr.top_arc);
                }
                std::sort(out.begin(), out.end());
                out.erase(std::unique(out.begin(), out.end()), out.end());
                return out;
            };
            std::vector<SweepCellGeo> children;
            std::vector<std::vector<int>> child_conflict, child_contact;
            bool ok = false;
            if (static_cast<long>(parent.conflict.size()) <= bound) {
                // the cell already satisfies the level bound: persist it
                children = {pg};
                child_conflict = {parent.conflict};
                child_contact = {parent.contact};
                ok = true;
            }
            for (int attempt = 0; attempt <= cfg.max_retries && !ok; ++attempt) {
                std::vector<int> pool = parent.conflict;
                size_t want = static_cast<size_t>(
                    std::min<double>(static_cast<double>(pool.size()),
                                     std::ceil(cfg.sample_factor * r0 * std::pow(1.5, attempt))));
                for (size_t k = 0; k < want; ++k) {
                    size_t j = k + static_cast<size_t>(rng() % (pool.size() - k));
                    std::swap(pool[k], pool[j]);
                }
                pool.resize(want);
                children = detail::decompose_cell(arena, pg, arcs_of(pool));
                child_conflict.assign(children.size(), {});
                child_contact.assign(children.size(), {});
                ok = true;
                for (size_t ci = 0; ci < children.size() && ok; ++ci) {
                    long crossing_count = 0;
                    for (int t : survivors) {
                        const auto& tr = traps[static_cast<size_t>(t)];
                        TrapRel rb = tr.bottom_arc >= 0 ? arc_vs_cell(arcs, tr.bottom_arc, children[ci])
                                                        : TrapRel::outside_below;
                        TrapRel rt = tr.top_arc >= 0 ? arc_vs_cell(arcs, tr.top_arc, children[ci])
                                                     : TrapRel::outside_above;
                        if (rb == TrapRel::crossing || rt == TrapRel::crossing) {
                            child_conflict[ci].push_back(t);
                            ++crossing_count;
                        } else if (rb == TrapRel::contact || rt == TrapRel::contact) {
                            child_contact[ci].push_back(t);
                        }
                    }
                    if (crossing_count > bound) ok = false;
                }
                if (!ok) {
                    if (stats) ++stats->retries;
                    if (want >= pool.size() && want >= survivors.size()) break;  // cannot improve
                }
            }
            if (!ok)
                throw CuttingRetryExceeded(
                    "primal cutting: conflict bound not met within the retry budget");

            std::vector<size_t> child_idx;
            for (size_t ci = 0; ci < children.size(); ++ci) {
                PrimalCell cell;
                cell.lo = children[ci].lo;
                cell.hi = children[ci].hi;
                cell.bot_arc = children[ci].bot;
                cell.top_arc = children[ci].top;
                cell.parent = static_cast<int>(pi);
                cell.conflict = std::move(child_conflict[ci]);
                cell.contact = std::move(child_contact[ci]);
                // containers: survivors that neither cross nor touch, sample inside
                Point2 sample = cell_sample(arcs, children[ci]);
                for (int t : survivors) {
                    const auto& tr = traps[static_cast<size_t>(t)];
                    bool listed = std::find(cell.conflict.begin(), cell.conflict.end(), t) !=
                                      cell.conflict.end() ||
                                  std::find(cell.contact.begin(), cell.contact.end(), t) !=
                                      cell.contact.end();
                    if (listed) continue;
                    bool below_ok = tr.bottom_arc < 0 ||
                                    point_side_of_arc(sample, arcs[tr.bottom_arc]) == SideOf::Above;
                    bool above_ok = tr.top_arc < 0 ||
                                    point_side_of_arc(sample, arcs[tr.top_arc]) == SideOf::Below;
                    if (below_ok && above_ok) cell.containers.push_back(t);
                }
                if (static_cast<long>(cell.conflict.size()) > bound)
                    throw InvariantViolation("primal cutting: conflict bound violated");
                child_idx.push_back(next.size());
                next.push_back(std::move(cell));
            }
            // distribute the parent's points among the children
            for (int pid : parent.cell_points) {
                const Point2& p = *by_id[pid];
                int owner = -1;
                for (size_t ci : child_idx) {
                    const PrimalCell& cell = next[ci];
                    SweepCellGeo g{cell.lo, cell.hi, cell.bot_arc, cell.top_arc};
                    if (!cell_claims_point(arcs, g, p)) continue;
                    if (owner >= 0) throw InvariantViolation("slab point claimed by two cells");
                    owner = static_cast<int>(ci);
                }
                if (owner < 0) throw InvariantViolation("slab point claimed by no cell");
                next[static_cast<size_t>(owner)].cell_points.push_back(pid);
            }
        }
        long pts_total = 0;
        for (const auto& cell : next) {
            pts_total += static_cast<long>(cell.cell_points.size());
            lstats.max_conflict =
                std::max(lstats.max_conflict, static_cast<long>(cell.conflict.size()));
        }
        if (pts_total != static_cast<long>(pts.size()))
            throw InvariantViolation("primal cutting: point conservation failed");
        lstats.cells = static_cast<long>(next.size());
        lstats.sum_objects = pts_total;
        if (stats) stats->levels.push_back(lstats);
        total_cells += static_cast<long>(next.size());
        if (total_cells > cfg.cell_budget) throw CellBudgetExceeded{};
        h.levels.push_back(std::move(next));
    }
    return h;
}

BicliquePartition biclique_primal_slab(const ArcSet& arcs,
                                       const std::vector<PseudoTrapezoid>& traps,
                                       const std::vector<int>& trap_ids,
                                       const std::vector<Point2>& pts, const Abscissa& lo,
                                       const Abscissa& hi, const BuildConfig& cfg,
                                       std::mt19937_64& rng, CuttingStats* stats) {
    BicliquePartition part;
    if (trap_ids.empty() || pts.empty()) return part;
    long N_v = static_cast<long>(trap_ids.size());
    long m_v = static_cast<long>(pts.size());
    long chi_v = slab_crossings(arcs, traps, trap_ids, lo, hi);
    int r = choose_r(N_v, m_v, chi_v);

    std::map<int, const Point2*> by_id;
    for (const auto& p : pts) by_id[p.id] = &p;

    for (int r_eff = r;;) {
        try {
            PrimalHierarchy h =
                primal_hierarchical_cutting(arcs, traps, trap_ids, pts, lo, hi, r_eff, cfg.r0,
                                            cfg, rng, stats);
            // containment bicliques at every level below the root
            for (size_t lvl = 1; lvl < h.levels.size(); ++lvl) {
                for (const auto& cell : h.levels[lvl]) {
                    if (cell.containers.empty() || cell.cell_points.empty()) continue;
                    Biclique b;
                    b.stage = Stage::primal_container;
                    b.range_ids = cell.containers;  // trapezoid ids at this layer
                    b.point_ids = cell.cell_points;
                    part.add(std::move(b));
                }
            }
            // bottom level: delegate the survivors to the slab routine
            for (const auto& cell : h.levels.back()) {
                if (cell.cell_points.empty()) continue;
                std::vector<int> survivors = cell.conflict;
                survivors.insert(survivors.end(), cell.contact.begin(), cell.contact.end());
                if (survivors.empty()) continue;
                std::vector<Point2> cpts;
                cpts.reserve(cell.cell_points.size());
                for (int pid : cell.cell_points) cpts.push_back(*by_id.at(pid));
                part.append(biclique_slab(arcs, traps, survivors, cpts, cell.lo, cell.hi, cfg,
                                          rng, stats));
            }
            break;
        } catch (const CellBudgetExceeded&) {
            part.bicliques.clear();
            if (r_eff <= 1)
                throw InvariantViolation("primal cutting: cell budget exceeded at r = 1");
            r_eff = std::max(1, r_eff / 2);  // budget guard: halve r and rebuild
        }
    }
    return part;
}

bool pipeline_owns(const Point2& p, const PseudoTrapezoid& t, const ArcSet& store) {
    if (t.left.compare(p.x) >= 0) return false;  // strictly open left wall
    if (t.right.compare(p.x) < 0) return false;
    if (t.bottom_arc >= 0) {
        SideOf s = point_side_of_arc(p, store[t.bottom_arc]);
        if (s == SideOf::Below || s == SideOf::OutsideSpan) return false;
        if (s == SideOf::On && !store[t.bottom_arc].boundary_closed) return false;
    }
    if (t.top_arc >= 0) {
        SideOf s = point_side_of_arc(p, store[t.top_arc]);
        if (s == SideOf::Above || s == SideOf::OutsideSpan) return false;
        if (s == SideOf::On && !store[t.top_arc].boundary_closed) return false;
    }
    return true;
}

void corner_pairs(const PipelineGeometry& geo, const std::vector<RangeRegion>& ranges,
                  const std::vector<Point2>& points, BicliquePartition& out) {
    std::map<Rational, std::vector<int>> by_x;
    for (size_t i = 0; i < points.size(); ++i) by_x[points[i].x].push_back(static_cast<int>(i));
    for (size_t ri = 0; ri < ranges.size(); ++ri) {
        if (geo.always_true[ri] || geo.always_false[ri]) continue;
        std::vector<int> candidates;
        for (int t : geo.by_range[ri]) {
            const auto& tr = geo.trapezoids[static_cast<size_t>(t)];
            if (!tr.left.is_rational()) continue;
            auto it = by_x.find(tr.left.rat());
            if (it == by_x.end()) continue;
            candidates.insert(candidates.end(), it->second.begin(), it->second.end());
        }
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
        for (int pi : candidates) {
            const Point2& p = points[static_cast<size_t>(pi)];
            if (!point_in_range(p, ranges[ri])) continue;
            bool owned = false;
            for (int t : geo.by_range[ri]) {
                if (pipeline_owns(p, geo.trapezoids[static_cast<size_t>(t)], geo.arcs)) {
                    owned = true;
                    break;
                }
            }
            if (owned) continue;
            Biclique b;
            b.stage = Stage::corner;
            b.range_ids = {static_cast<int>(ri)};
            b.point_ids = {p.id};
            out.add(std::move(b));
        }
    }
}

BicliquePartition biclique_primal(const std::vector<RangeRegion>& ranges,
                                  const std::vector<Point2>& points, const BuildConfig& cfg,
                                  CuttingStats* stats) {
    BicliquePartition part;
    if (ranges.empty() || points.empty()) return part;
    PipelineGeometry geo = build_geometry(ranges);
    for (size_t i = 0; i < ranges.size(); ++i) {
        if (!geo.always_true[i]) continue;
        Biclique b;
        b.stage = Stage::special;
        b.range_ids = {static_cast<int>(i)};
        for (const auto& p : points) b.point_ids.push_back(p.id);
        part.add(std::move(b));
    }
    corner_pairs(geo, ranges, points, part);
    if (geo.trapezoids.empty()) return part;

    SlabTree tree = SlabTree::build(geo.trapezoids, points);
    std::map<int, const Point2*> by_id;
    for (const auto& p : points) by_id[p.id] = &p;
    BicliquePartition trap_part;
    for (const auto& node : tree.nodes) {
        if (node.stored.empty() || node.m_v() == 0) continue;
        std::vector<Point2> pv;
        pv.reserve(static_cast<size_t>(node.m_v()));
        for (int k = node.pt_begin; k < node.pt_end; ++k)
            pv.push_back(*by_id[tree.pt_order[static_cast<size_t>(k)]]);
        std::mt19937_64 rng(cfg.seed * 0x9e3779b97f4a7c15ULL + 0xabcd0000ULL +
                            static_cast<uint64_t>(node.id) + 1);
        trap_part.append(biclique_primal_slab(geo.arcs, geo.trapezoids, node.stored, pv, node.lo,
                                              node.hi, cfg, rng, stats));
    }
    // trapezoid ids -> range ids
    for (auto& b : trap_part.bicliques) {
        for (auto& id : b.range_ids) id = geo.trapezoids[static_cast<size_t>(id)].source_range;
        part.add(std::move(b));
    }
    return part;
}

}  // namespace bcp
