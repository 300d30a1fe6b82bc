#include "bcp/dual.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "bcp/errors.hpp"
#include "sweep_impl.hpp"

namespace bcp {

namespace {

long ipow(long b, int e) {
    long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

int isqrt_floor(long n) {
    if (n <= 0) return 0;
    long r = static_cast<long>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return static_cast<int>(r);
}

// Memo for primal side-of tests, shared across slab nodes of one build.
struct SideCache {
    const ArcSet& arcs;
    std::unordered_map<uint64_t, int8_t> memo;
    explicit SideCache(const ArcSet& a) : arcs(a) {}
    SideOf side(int arc_id, const Point2& p) {
        uint64_t key = (static_cast<uint64_t>(arc_id) << 32) ^ static_cast<uint64_t>(p.id + 1);
        if (p.id >= 0) {
            auto it = memo.find(key);
            if (it != memo.end()) return static_cast<SideOf>(it->second);
        }
        SideOf s = point_side_of_arc(p, arcs[arc_id]);
        if (p.id >= 0) memo[key] = static_cast<int8_t>(s);
        return s;
    }
};

thread_local SideCache* g_side_cache = nullptr;

SideOf side_of(const ArcSet& arcs, int arc_id, const Point2& p) {
    if (g_side_cache && &g_side_cache->arcs == &arcs) return g_side_cache->side(arc_id, p);
    return point_side_of_arc(p, arcs[arc_id]);
}

// Station order: by arc height just inside the slab's left boundary (the
// left-endpoint order, refined at boundary ties).  Virtual stations first.
std::vector<int> sort_stations(const ArcSet& arcs, const std::vector<DualStation>& st,
                               const Abscissa& lo, const Abscissa& hi) {
    std::vector<int> virt, real;
    for (int i = 0; i < static_cast<int>(st.size()); ++i)
        (st[static_cast<size_t>(i)].arc < 0 ? virt : real).push_back(i);
    if (real.size() > 1) {
        Abscissa probe_hi = hi;
        for (int guard = 0;; ++guard) {
            if (guard > 4096) throw InvariantViolation("station sort failed to stabilize");
            Rational xs = rational_between(lo, probe_hi);
            std::vector<std::pair<SurdValue, int>> vals;
            vals.reserve(real.size());
            for (int i : real)
                vals.emplace_back(arc_value_at(arcs[st[static_cast<size_t>(i)].arc], xs), i);
            std::stable_sort(vals.begin(), vals.end(), [](const auto& a, const auto& b) {
                int c = a.first.compare(b.first);
                if (c != 0) return c < 0;
                return a.second < b.second;
            });
            bool tie_cross = false;
            Abscissa earliest = Abscissa::rational(xs);
            for (size_t k = 0; k + 1 < vals.size(); ++k) {
                if (vals[k].first.compare(vals[k + 1].first) != 0) continue;
                const auto& a1 = arcs[st[static_cast<size_t>(vals[k].second)].arc];
                const auto& a2 = arcs[st[static_cast<size_t>(vals[k + 1].second)].arc];
                if (a1.support.equal(a2.support) && a1.branch == a2.branch) continue;
                tie_cross = true;  // distinct curves meeting at xs: probe further left
            }
            if (!tie_cross) {
                bool dirty = false;
                for (size_t k = 0; k + 1 < vals.size(); ++k) {
                    int ia = st[static_cast<size_t>(vals[k].second)].arc;
                    int ib = st[static_cast<size_t>(vals[k + 1].second)].arc;
                    if (ia == ib) continue;
                    if (arcs[ia].support.equal(arcs[ib].support) &&
                        arcs[ia].branch == arcs[ib].branch)
                        continue;  // duplicate geometry never crosses
                    for (const auto& it : arcs.intersections(ia, ib)) {
                        if (it.x.compare(lo) > 0 && it.x.compare(Abscissa::rational(xs)) < 0) {
                            if (it.x.compare(earliest) < 0) earliest = it.x;
                            dirty = true;
                        }
                    }
                }
                if (!dirty) {
                    std::vector<int> order = virt;
                    for (auto& v : vals) order.push_back(v.second);
                    return order;
                }
            }
            probe_hi = earliest;
        }
    }
    std::vector<int> order = virt;
    for (int i : real) order.push_back(i);
    return order;
}

}  // namespace

std::vector<int> station_left_order(const ArcSet& arcs, const std::vector<DualStation>& stations,
                                    const Abscissa& slab_lo, const Abscissa& slab_hi) {
    return sort_stations(arcs, stations, slab_lo, slab_hi);
}

DualScaffold DualScaffold::build(const ArcSet& arcs, const std::vector<DualStation>& stations,
                                 const std::vector<Point2>& pts, bool reflect,
                                 const Abscissa& slab_lo, const Abscissa& slab_hi) {
    (void)slab_lo;
    (void)slab_hi;
    DualScaffold sc;
    sc.m_ = static_cast<int>(pts.size());
    sc.n_ = static_cast<int>(stations.size());
    sc.station_order_.resize(stations.size());
    for (size_t i = 0; i < stations.size(); ++i) sc.station_order_[i] = static_cast<int>(i);

    // order at x = -inf: decreasing primal x, ties by (y, id)
    std::vector<int> order(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const Point2& pa = pts[static_cast<size_t>(a)];
        const Point2& pb = pts[static_cast<size_t>(b)];
        int cx = sign_of(Rational(pa.x - pb.x));
        if (cx != 0) return cx > 0;  // larger x sits lower
        Rational ya = reflect ? Rational(-pa.y) : pa.y;
        Rational yb = reflect ? Rational(-pb.y) : pb.y;
        int cy = sign_of(Rational(ya - yb));
        if (cy != 0) return cy < 0;
        return pa.id < pb.id;
    });

    sc.heights_.assign(static_cast<size_t>(sc.n_) + 1, std::vector<long>(pts.size(), 0));
    for (size_t r = 0; r < order.size(); ++r)
        sc.heights_[0][static_cast<size_t>(order[r])] = 2 * static_cast<long>(r) + 1;

    for (int s = 1; s <= sc.n_; ++s) {
        const DualStation& st = stations[static_cast<size_t>(s - 1)];
        std::vector<int8_t> flag(pts.size());
        for (size_t c = 0; c < pts.size(); ++c) {
            int f;
            if (st.arc < 0) {
                f = +1;  // unbounded side: every point counts above
            } else {
                const XMonotoneArc& arc = arcs[st.arc];
                SideOf sd = side_of(arcs, st.arc, pts[c]);
                if (sd == SideOf::OutsideSpan)
                    throw InvariantViolation("slab point outside a station arc's span");
                bool above;
                if (sd == SideOf::On)
                    above = arc.boundary_closed;
                else
                    above = reflect ? (sd == SideOf::Below) : (sd == SideOf::Above);
                f = above ? +1 : -1;
            }
            flag[c] = static_cast<int8_t>(f);
        }
        // stable partition: minus-flag curves keep relative order below the plus group
        std::vector<int> next;
        next.reserve(order.size());
        std::vector<int> plus_seen;
        long z = 0;
        for (int c : order)
            if (flag[static_cast<size_t>(c)] < 0) ++z;
        for (int c : order) {
            if (flag[static_cast<size_t>(c)] < 0) {
                next.push_back(c);
                for (int u : plus_seen) {
                    uint64_t key = (static_cast<uint64_t>(std::min(u, c)) << 32) |
                                   static_cast<uint64_t>(std::max(u, c));
                    sc.swaps_.emplace_back(key, s);
                }
            } else {
                plus_seen.push_back(c);
            }
        }
        for (int u : plus_seen) next.push_back(u);
        order = std::move(next);
        for (size_t r = 0; r < order.size(); ++r)
            sc.heights_[static_cast<size_t>(s)][static_cast<size_t>(order[r])] =
                2 * (static_cast<long>(r) - z) + 1;
    }
    std::sort(sc.swaps_.begin(), sc.swaps_.end());
    for (size_t i = 0; i + 1 < sc.swaps_.size(); ++i)
        if (sc.swaps_[i].first == sc.swaps_[i + 1].first)
            throw InvariantViolation("dual pseudo-line property violated: a pair crosses twice");
    return sc;
}

int DualScaffold::find_swap(int u, int w) const {
    uint64_t key = (static_cast<uint64_t>(std::min(u, w)) << 32) |
                   static_cast<uint64_t>(std::max(u, w));
    auto it = std::lower_bound(swaps_.begin(), swaps_.end(), std::make_pair(key, 0));
    if (it != swaps_.end() && it->first == key) return it->second;
    return 0;
}

Rational DualScaffold::height_at(int u, const Rational& x) const {
    const auto uu = static_cast<size_t>(u);
    if (x <= 0) return Rational(heights_[0][uu]);
    if (x >= n_) return Rational(heights_[static_cast<size_t>(n_)][uu]);
    Integer fl;
    mpz_fdiv_q(fl.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    long s = fl.get_si();
    Rational t = x - Rational(fl);
    Rational h0(heights_[static_cast<size_t>(s)][uu]);
    Rational h1(heights_[static_cast<size_t>(s + 1)][uu]);
    return h0 + (h1 - h0) * t;
}

int DualScaffold::order_at(int u, int w, const Rational& x) const {
    return sign_of(Rational(height_at(u, x) - height_at(w, x)));
}

std::optional<Rational> DualScaffold::crossing_abscissa(int u, int w) const {
    int s = find_swap(u, w);
    if (s == 0) return std::nullopt;
    const auto uu = static_cast<size_t>(u), ww = static_cast<size_t>(w);
    long h1u = heights_[static_cast<size_t>(s - 1)][uu];
    long h1w = heights_[static_cast<size_t>(s - 1)][ww];
    long h2u = heights_[static_cast<size_t>(s)][uu];
    long h2w = heights_[static_cast<size_t>(s)][ww];
    long d1 = h1u - h1w, d2 = h2u - h2w;
    return Rational(s - 1) + make_rational(d1, d1 - d2);
}

namespace {

using detail::Rel;
using detail::SweepCellGeo;

// Arena adapter: scaffold curves for the generic sweep.
struct DualArena {
    const DualScaffold& sc;
    std::optional<Abscissa> crossing(int u, int w) const {
        auto x = sc.crossing_abscissa(u, w);
        if (!x) return std::nullopt;
        return Abscissa::rational(*x);
    }
    int order3(int u, int w, const Rational& x) const { return sc.order_at(u, w, x); }
};

std::vector<SweepCellGeo> decompose_dual_cell(const DualScaffold& sc, const SweepCellGeo& parent,
                                              std::vector<int> structure) {
    DualArena arena{sc};
    return detail::decompose_cell(arena, parent, std::move(structure));
}

Rel classify_curve_vs_dual_cell(const DualScaffold& sc, int c, const SweepCellGeo& cell) {
    DualArena arena{sc};
    return detail::classify_vs_cell(arena, c, cell);
}

}  // namespace

DualHierarchy dual_hierarchical_cutting(const DualScaffold& sc, int r, int r0,
                                        const BuildConfig& cfg, std::mt19937_64& rng,
                                        CuttingStats* stats) {
    if (r0 < 2) throw InvalidInput("r0 must be >= 2");
    DualHierarchy h;
    h.r = r;
    h.r0 = r0;
    h.nu = 0;
    while (ipow(r0, h.nu) < r) ++h.nu;
    long m = sc.curve_count();

    DualCell root;
    root.lo = Abscissa::neg_inf();
    root.hi = Abscissa::pos_inf();
    root.parent = -1;
    root.conflict.resize(static_cast<size_t>(m));
    for (int c = 0; c < m; ++c) root.conflict[static_cast<size_t>(c)] = c;
    root.gamma.resize(static_cast<size_t>(sc.station_count()));
    for (int k = 0; k < sc.station_count(); ++k) root.gamma[static_cast<size_t>(k)] = k + 1;
    h.levels.push_back({root});

    long total_cells = 1;
    for (int lvl = 1; lvl <= h.nu; ++lvl) {
        long bound = m / ipow(r0, lvl);
        std::vector<DualCell> next;
        CutLevelStats lstats;
        lstats.bound = bound;
        for (size_t pi = 0; pi < h.levels.back().size(); ++pi) {
            DualCell& parent = h.levels.back()[pi];
            SweepCellGeo pg{parent.lo, parent.hi, parent.bot, parent.top};
            std::vector<SweepCellGeo> children;
            if (static_cast<long>(parent.conflict.size()) <= bound) {
                children.push_back(pg);  // the cell persists at the next level
            } else {
                bool ok = false;
                for (int attempt = 0; attempt <= cfg.max_retries && !ok; ++attempt) {
                    size_t want = static_cast<size_t>(
                        std::min<double>(static_cast<double>(parent.conflict.size()),
                                         std::ceil(cfg.sample_factor * r0 * std::pow(1.5, attempt))));
                    std::vector<int> sample = parent.conflict;
                    if (want < sample.size()) {
                        for (size_t k = 0; k < want; ++k) {
                            size_t j = k + static_cast<size_t>(rng() % (sample.size() - k));
                            std::swap(sample[k], sample[j]);
                        }
                        sample.resize(want);
                    }
                    children = decompose_dual_cell(sc, pg, sample);
                    ok = true;
                    for (const auto& ch : children) {
                        long cnt = 0;
                        for (int c : parent.conflict)
                            if (classify_curve_vs_dual_cell(sc, c, ch) == Rel::crossing) ++cnt;
                        if (cnt > bound) {
                            ok = false;
                            break;
                        }
                    }
                    if (!ok && stats) ++stats->retries;
                }
                if (!ok)
                    throw CuttingRetryExceeded(
                        "dual cutting: conflict bound not met within the retry budget");
            }
            std::vector<size_t> child_idx;
            for (const auto& ch : children) {
                DualCell cell;
                cell.lo = ch.lo;
                cell.hi = ch.hi;
                cell.bot = ch.bot;
                cell.top = ch.top;
                cell.parent = static_cast<int>(pi);
                for (int c : parent.conflict) {
                    switch (classify_curve_vs_dual_cell(sc, c, ch)) {
                        case Rel::crossing: cell.conflict.push_back(c); break;
                        case Rel::above: cell.canonical.push_back(c); break;
                        case Rel::below: break;
                    }
                }
                if (static_cast<long>(cell.conflict.size()) > bound)
                    throw InvariantViolation("dual cutting: conflict bound violated");
                child_idx.push_back(next.size());
                next.push_back(std::move(cell));
            }
            for (int station : parent.gamma) {
                Rational k(station);
                int owner = -1;
                for (size_t ci : child_idx) {
                    DualCell& cell = next[ci];
                    if (cell.lo.compare(k) >= 0 || cell.hi.compare(k) < 0) continue;
                    if (cell.bot >= 0 && sc.flag(station, cell.bot) != -1) continue;
                    if (cell.top >= 0 && sc.flag(station, cell.top) != +1) continue;
                    if (owner >= 0) throw InvariantViolation("dual point claimed by two cells");
                    owner = static_cast<int>(ci);
                }
                if (owner < 0) throw InvariantViolation("dual point claimed by no cell");
                next[static_cast<size_t>(owner)].gamma.push_back(station);
            }
        }
        long gamma_total = 0;
        for (const auto& cell : next) {
            gamma_total += static_cast<long>(cell.gamma.size());
            lstats.max_conflict =
                std::max(lstats.max_conflict, static_cast<long>(cell.conflict.size()));
        }
        if (gamma_total != sc.station_count())
            throw InvariantViolation("dual cutting: station conservation failed");
        lstats.cells = static_cast<long>(next.size());
        lstats.sum_objects = gamma_total;
        if (stats) stats->levels.push_back(lstats);
        total_cells += static_cast<long>(next.size());
        if (total_cells > cfg.cell_budget)
            throw InvariantViolation("dual cutting: cell budget exceeded");
        h.levels.push_back(std::move(next));
    }
    if (ipow(r0, h.nu) > m) {
        for (const auto& cell : h.levels.back())
            if (!cell.conflict.empty())
                throw InvariantViolation("dual cutting: last level still crossed");
    }
    return h;
}

namespace {

// Raw upward-stage bicliques: (station payloads, point indices into pts).
std::vector<std::pair<std::vector<int>, std::vector<int>>> biclique_above_raw(
    const ArcSet& arcs, const std::vector<DualStation>& stations_sorted,
    const std::vector<Point2>& pts, bool reflect, const Abscissa& slab_lo,
    const Abscissa& slab_hi, const BuildConfig& cfg, std::mt19937_64& rng, CuttingStats* stats) {
    std::vector<std::pair<std::vector<int>, std::vector<int>>> out;
    if (stations_sorted.empty() || pts.empty()) return out;
    DualScaffold sc = DualScaffold::build(arcs, stations_sorted, pts, reflect, slab_lo, slab_hi);
    int r = static_cast<int>(pts.size()) + 1;
    DualHierarchy h = dual_hierarchical_cutting(sc, r, cfg.r0, cfg, rng, stats);
    for (size_t lvl = 1; lvl < h.levels.size(); ++lvl) {
        for (const auto& cell : h.levels[lvl]) {
            if (cell.gamma.empty() || cell.canonical.empty()) continue;
            std::vector<int> payloads;
            payloads.reserve(cell.gamma.size());
            for (int station : cell.gamma)
                payloads.push_back(stations_sorted[static_cast<size_t>(station - 1)].payload);
            out.emplace_back(std::move(payloads), cell.canonical);
        }
    }
    return out;
}

}  // namespace

BicliquePartition biclique_above(const ArcSet& arcs, const std::vector<DualStation>& stations,
                                 const std::vector<Point2>& pts, bool reflect,
                                 const Abscissa& slab_lo, const Abscissa& slab_hi,
                                 const BuildConfig& cfg, std::mt19937_64& rng,
                                 CuttingStats* stats) {
    std::vector<int> order = sort_stations(arcs, stations, slab_lo, slab_hi);
    std::vector<DualStation> sorted;
    sorted.reserve(stations.size());
    for (int i : order) sorted.push_back(stations[static_cast<size_t>(i)]);
    BicliquePartition part;
    for (auto& [payloads, curve_idx] :
         biclique_above_raw(arcs, sorted, pts, reflect, slab_lo, slab_hi, cfg, rng, stats)) {
        Biclique b;
        b.stage = Stage::dual_cell;
        b.range_ids = std::move(payloads);
        for (int c : curve_idx) b.point_ids.push_back(pts[static_cast<size_t>(c)].id);
        part.add(std::move(b));
    }
    return part;
}

BicliquePartition biclique_slab(const ArcSet& arcs, const std::vector<PseudoTrapezoid>& traps,
                                const std::vector<int>& trap_ids, const std::vector<Point2>& pts,
                                const Abscissa& slab_lo, const Abscissa& slab_hi,
                                const BuildConfig& cfg, std::mt19937_64& rng, CuttingStats* stats) {
    BicliquePartition part;
    if (trap_ids.empty() || pts.empty()) return part;

    std::vector<DualStation> bot_st, top_st;
    for (int t : trap_ids) {
        bot_st.push_back({traps[static_cast<size_t>(t)].bottom_arc, t});
        top_st.push_back({traps[static_cast<size_t>(t)].top_arc, t});
    }
    std::vector<int> bot_order = sort_stations(arcs, bot_st, slab_lo, slab_hi);
    std::vector<int> top_order = sort_stations(arcs, top_st, slab_lo, slab_hi);
    std::vector<DualStation> bot_sorted;
    for (int i : bot_order) bot_sorted.push_back(bot_st[static_cast<size_t>(i)]);
    std::vector<DualStation> top_sorted_full;
    for (int i : top_order) top_sorted_full.push_back(top_st[static_cast<size_t>(i)]);
    std::unordered_map<int, int> top_pos;
    for (size_t i = 0; i < top_sorted_full.size(); ++i)
        top_pos[top_sorted_full[i].payload] = static_cast<int>(i);

    std::vector<Point2> ordered = pts;
    std::sort(ordered.begin(), ordered.end(), [](const Point2& a, const Point2& b) {
        int cx = sign_of(Rational(a.x - b.x));
        if (cx != 0) return cx < 0;
        int cy = sign_of(Rational(a.y - b.y));
        if (cy != 0) return cy < 0;
        return a.id < b.id;
    });
    int group_size = std::max(1, isqrt_floor(static_cast<long>(trap_ids.size())));
    for (size_t g0 = 0; g0 < ordered.size(); g0 += static_cast<size_t>(group_size)) {
        std::vector<Point2> group(
            ordered.begin() + static_cast<long>(g0),
            ordered.begin() +
                static_cast<long>(std::min(ordered.size(), g0 + static_cast<size_t>(group_size))));
        auto up =
            biclique_above_raw(arcs, bot_sorted, group, false, slab_lo, slab_hi, cfg, rng, stats);
        for (auto& [trap_payloads, curve_idx] : up) {
            // downward stage on the top arcs of exactly these trapezoids
            std::vector<std::pair<int, int>> sel;
            sel.reserve(trap_payloads.size());
            for (int t : trap_payloads) sel.emplace_back(top_pos[t], t);
            std::sort(sel.begin(), sel.end());
            std::vector<DualStation> sub;
            sub.reserve(sel.size());
            for (auto& [posn, t] : sel) sub.push_back(top_sorted_full[static_cast<size_t>(posn)]);
            std::vector<Point2> sub_pts;
            sub_pts.reserve(curve_idx.size());
            for (int c : curve_idx) sub_pts.push_back(group[static_cast<size_t>(c)]);
            auto down =
                biclique_above_raw(arcs, sub, sub_pts, true, slab_lo, slab_hi, cfg, rng, stats);
            for (auto& [traps2, pts2] : down) {
                Biclique b;
                b.stage = Stage::dual_cell;
                b.range_ids = std::move(traps2);
                for (int c : pts2) b.point_ids.push_back(sub_pts[static_cast<size_t>(c)].id);
                part.add(std::move(b));
            }
        }
    }
    return part;
}

BicliquePartition biclique_trapezoids(const ArcSet& arcs,
                                      const std::vector<PseudoTrapezoid>& traps,
                                      const std::vector<Point2>& points, const BuildConfig& cfg,
                                      CuttingStats* stats) {
    BicliquePartition part;
    if (traps.empty() || points.empty()) return part;
    SideCache cache(arcs);
    g_side_cache = &cache;
    SlabTree tree = SlabTree::build(traps, points);
    std::unordered_map<int, const Point2*> by_id;
    for (const auto& p : points) by_id[p.id] = &p;
    for (const auto& node : tree.nodes) {
        if (node.stored.empty() || node.m_v() == 0) continue;
        std::vector<Point2> pv;
        pv.reserve(static_cast<size_t>(node.m_v()));
        for (int k = node.pt_begin; k < node.pt_end; ++k)
            pv.push_back(*by_id[tree.pt_order[static_cast<size_t>(k)]]);
        std::mt19937_64 rng(cfg.seed * 0x9e3779b97f4a7c15ULL + static_cast<uint64_t>(node.id) + 1);
        part.append(biclique_slab(arcs, traps, node.stored, pv, node.lo, node.hi, cfg, rng, stats));
    }
    g_side_cache = nullptr;
    return part;
}

}  // namespace bcp
