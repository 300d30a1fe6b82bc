#include "bcp/pseudo.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "bcp/errors.hpp"

namespace bcp {

namespace {

// Distinct canonical supports among the atoms of sigma.
std::vector<PolynomialXY> distinct_supports(const RangeRegion& sigma) {
    std::vector<PolynomialXY> out;
    for (const auto& a : sigma.atoms) {
        PolynomialXY c = canonical_support(a.g);
        bool seen = false;
        for (const auto& o : out)
            if (o.equal(c)) {
                seen = true;
                break;
            }
        if (!seen) out.push_back(std::move(c));
    }
    return out;
}

// Critical abscissae of one support: leading-coefficient roots, discriminant
// roots, and (candidate) intersections with the other supports.
std::vector<Abscissa> support_criticals(const PolynomialXY& g,
                                        const std::vector<PolynomialXY>& all) {
    std::vector<Abscissa> crit;
    UPoly A, B, C;
    g.xpolys(A, B, C);
    if (g.deg_y() == 2) {
        for (auto& r : poly_real_roots(A)) crit.push_back(r);
        UPoly D = upoly_sub(upoly_mul(B, B), upoly_scale(upoly_mul(A, C), Integer(4)));
        for (auto& r : poly_real_roots(D)) crit.push_back(r);
    } else if (g.deg_y() == 1 && g.ycoef[1].degree() > 0) {
        for (auto& r : poly_real_roots(g.ycoef[1])) crit.push_back(r);
    }
    for (const auto& other : all) {
        if (other.equal(g)) continue;
        UPoly res = resultant_y(g, other);
        if (res.is_zero()) throw DegenerateOverlap("atom curves share a component");
        if (res.degree() >= 1)
            for (auto& r : poly_real_roots(res)) crit.push_back(r);
    }
    std::sort(crit.begin(), crit.end(), [](const Abscissa& a, const Abscissa& b) {
        return a.compare(b) < 0;
    });
    crit.erase(std::unique(crit.begin(), crit.end(),
                           [](const Abscissa& a, const Abscissa& b) { return a.compare(b) == 0; }),
               crit.end());
    return crit;
}

// All curve y-values at x among the supports, ascending and distinct.
std::vector<SurdValue> stacked_values(const std::vector<PolynomialXY>& supports,
                                      const Rational& x) {
    std::vector<SurdValue> vals;
    for (const auto& s : supports)
        for (auto& v : y_roots_at(s, x)) vals.push_back(v);
    std::sort(vals.begin(), vals.end(),
              [](const SurdValue& a, const SurdValue& b) { return a.compare(b) < 0; });
    vals.erase(std::unique(vals.begin(), vals.end(),
                           [](const SurdValue& a, const SurdValue& b) { return a.compare(b) == 0; }),
               vals.end());
    return vals;
}

Rational below_all(const SurdValue& v) {
    Rational lo, hi;
    surd_enclosure(v, Rational(1), lo, hi);
    return lo - 1;
}

Rational above_all(const SurdValue& v) {
    Rational lo, hi;
    surd_enclosure(v, Rational(1), lo, hi);
    return hi + 1;
}

bool member_at_surd_point(const RangeRegion& sigma, const Rational& x, const SurdValue& v) {
    std::vector<bool> sat(sigma.atoms.size());
    for (size_t i = 0; i < sigma.atoms.size(); ++i) {
        int s = sigma.atoms[i].g.sign_at_surd(x, v);
        sat[i] = sigma.atoms[i].strict ? (s > 0) : (s >= 0);
    }
    return eval_shape(sigma.shape, sat);
}

}  // namespace

bool range_is_everything(const RangeRegion& sigma) {
    return point_in_range(Point2{Rational(0), Rational(0), -1}, sigma);
}

std::vector<XMonotoneArc> split_x_monotone(const RangeRegion& sigma, ArcSet& store) {
    if (sigma.family == Family::disk && sign_of(sigma.params[2]) == 0)
        throw DegenerateRange("disk with zero radius");
    if (sigma.family == Family::annulus && sigma.params[2] == sigma.params[3])
        throw DegenerateRange("annulus with equal radii");

    std::vector<PolynomialXY> supports = distinct_supports(sigma);
    std::vector<XMonotoneArc> result;
    for (const auto& g : supports) {
        std::vector<Abscissa> crit = support_criticals(g, supports);
        // intervals between consecutive criticals, plus unbounded ends
        std::vector<std::pair<Abscissa, Abscissa>> intervals;
        Abscissa prev = Abscissa::neg_inf();
        for (const auto& c : crit) {
            intervals.emplace_back(prev, c);
            prev = c;
        }
        intervals.emplace_back(prev, Abscissa::pos_inf());
        for (auto& [lo, hi] : intervals) {
            if (lo.compare(hi) >= 0) continue;
            Rational xs = rational_between(lo, hi);
            auto roots = y_roots_at(g, xs);
            if (roots.empty()) continue;
            auto stack = stacked_values(supports, xs);
            for (int branch = 0; branch < static_cast<int>(roots.size()); ++branch) {
                const SurdValue& v = roots[static_cast<size_t>(branch)];
                size_t pos = 0;
                while (pos < stack.size() && stack[pos].compare(v) != 0) ++pos;
                if (pos == stack.size()) throw InvariantViolation("branch value missing in stack");
                Rational y_above = (pos + 1 < stack.size())
                                       ? rational_between_surds(v, stack[pos + 1])
                                       : above_all(v);
                Rational y_below = (pos > 0) ? rational_between_surds(stack[pos - 1], v)
                                             : below_all(v);
                bool above = point_in_range(Point2{xs, y_above, -1}, sigma);
                bool below = point_in_range(Point2{xs, y_below, -1}, sigma);
                bool on = member_at_surd_point(sigma, xs, v);
                if (above == below) {
                    if (above != on) {
                        throw DegenerateRange(on ? "range has a measure-zero sliver"
                                                 : "range interior has a slit");
                    }
                    continue;  // not on the boundary
                }
                XMonotoneArc arc;
                arc.support = g;
                arc.branch = branch;
                arc.lo = lo;
                arc.hi = hi;
                arc.source_range = sigma.id;
                arc.role = above ? ArcRole::bottom : ArcRole::top;
                arc.boundary_closed = on;
                result.push_back(std::move(arc));
            }
        }
    }
    for (auto& a : result) a.id = store.add(a);
    return result;
}

std::vector<int> cut_to_pseudosegments(ArcSet& store, const std::vector<int>& arc_ids) {
    std::set<int> active(arc_ids.begin(), arc_ids.end());
    std::deque<std::pair<int, int>> work;
    for (size_t i = 0; i < arc_ids.size(); ++i)
        for (size_t j = i + 1; j < arc_ids.size(); ++j)
            work.emplace_back(std::min(arc_ids[i], arc_ids[j]), std::max(arc_ids[i], arc_ids[j]));
    std::sort(work.begin(), work.end());
    while (!work.empty()) {
        auto [i, j] = work.front();
        work.pop_front();
        if (!active.count(i) || !active.count(j)) continue;
        const auto xs = store.intersections(i, j);
        if (xs.size() < 2) continue;
        int victim = i;  // smaller id
        // the cut must avoid every crossing of the victim with any active arc,
        // so that piece/arc crossing lists split exactly
        Abscissa next = xs[1].x;
        for (int k : active) {
            if (k == victim) continue;
            for (const auto& it : store.intersections(victim, k))
                if (it.x.compare(xs[0].x) > 0 && it.x.compare(next) < 0) next = it.x;
        }
        Rational cut = rational_between(xs[0].x, next);
        XMonotoneArc left = store[victim];
        XMonotoneArc right = store[victim];
        left.hi = Abscissa::rational(cut);
        right.lo = Abscissa::rational(cut);
        active.erase(victim);
        int lid = store.add(left);
        int rid = store.add(right);
        for (int k : active) {
            const auto& parent_xs = store.intersections(victim, k);
            std::vector<ArcIntersection> lxs, rxs;
            for (const auto& it : parent_xs) {
                if (it.x.compare(cut) < 0)
                    lxs.push_back(it);
                else
                    rxs.push_back(it);
            }
            store.seed_intersections(lid, k, lxs);
            store.seed_intersections(rid, k, rxs);
            if (lxs.size() >= 2) work.emplace_back(std::min(lid, k), std::max(lid, k));
            if (rxs.size() >= 2) work.emplace_back(std::min(rid, k), std::max(rid, k));
        }
        store.seed_intersections(lid, rid, {});  // siblings share only the cut point
        active.insert(lid);
        active.insert(rid);
    }
    return std::vector<int>(active.begin(), active.end());
}

long count_crossings(const ArcSet& store, const std::vector<int>& arc_ids) {
    long chi = 0;
    for (size_t i = 0; i < arc_ids.size(); ++i)
        for (size_t j = i + 1; j < arc_ids.size(); ++j)
            chi += static_cast<long>(store.intersections(arc_ids[i], arc_ids[j]).size());
    return chi;
}

std::vector<PseudoTrapezoid> vertical_decompose(const RangeRegion& sigma, ArcSet& store,
                                                const std::vector<int>& boundary_ids) {
    std::vector<PseudoTrapezoid> cells;
    if (boundary_ids.empty()) return cells;
    // wall abscissae: all finite span endpoints
    std::vector<Abscissa> walls;
    for (int id : boundary_ids) {
        const auto& a = store[id];
        if (a.lo.finite()) walls.push_back(a.lo);
        if (a.hi.finite()) walls.push_back(a.hi);
    }
    std::sort(walls.begin(), walls.end(),
              [](const Abscissa& a, const Abscissa& b) { return a.compare(b) < 0; });
    walls.erase(std::unique(walls.begin(), walls.end(),
                            [](const Abscissa& a, const Abscissa& b) { return a.compare(b) == 0; }),
                walls.end());
    std::vector<std::pair<Abscissa, Abscissa>> slabs;
    Abscissa prev = Abscissa::neg_inf();
    for (const auto& w : walls) {
        slabs.emplace_back(prev, w);
        prev = w;
    }
    slabs.emplace_back(prev, Abscissa::pos_inf());

    for (auto& [lo, hi] : slabs) {
        if (lo.compare(hi) >= 0) continue;
        std::vector<int> spanning;
        for (int id : boundary_ids) {
            const auto& a = store[id];
            if (a.lo.compare(lo) <= 0 && a.hi.compare(hi) >= 0) spanning.push_back(id);
        }
        Rational xs = rational_between(lo, hi);
        std::vector<std::pair<SurdValue, int>> order;
        for (int id : spanning) order.emplace_back(arc_value_at(store[id], xs), id);
        std::sort(order.begin(), order.end(),
                  [](const auto& a, const auto& b) { return a.first.compare(b.first) < 0; });
        // bands: below the first arc, between consecutive arcs, above the last
        int bands = static_cast<int>(order.size()) + 1;
        for (int b = 0; b < bands; ++b) {
            Rational ys;
            if (order.empty())
                ys = 0;
            else if (b == 0)
                ys = below_all(order[0].first);
            else if (b == static_cast<int>(order.size()))
                ys = above_all(order.back().first);
            else
                ys = rational_between_surds(order[static_cast<size_t>(b - 1)].first,
                                            order[static_cast<size_t>(b)].first);
            if (!point_in_range(Point2{xs, ys, -1}, sigma)) continue;
            PseudoTrapezoid t;
            t.left = lo;
            t.right = hi;
            t.bottom_arc = (b == 0) ? -1 : order[static_cast<size_t>(b - 1)].second;
            t.top_arc = (b == static_cast<int>(order.size())) ? -1
                                                              : order[static_cast<size_t>(b)].second;
            t.source_range = sigma.id;
            cells.push_back(std::move(t));
        }
    }
    // leftmost flags: a cell owns its left wall when no cell of sigma ends there
    for (auto& c : cells) {
        if (!c.left.finite()) {
            c.leftmost = true;  // unbounded left: no wall points exist anyway
            continue;
        }
        bool has_left_neighbor = false;
        for (const auto& o : cells)
            if (o.right.finite() && o.right.compare(c.left) == 0) {
                has_left_neighbor = true;
                break;
            }
        c.leftmost = !has_left_neighbor;
    }
    return cells;
}

bool point_in_trapezoid(const Point2& p, const PseudoTrapezoid& t, const ArcSet& store) {
    int cl = t.left.compare(p.x);
    if (cl > 0 || (cl == 0 && !t.leftmost)) return false;
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

PipelineGeometry build_geometry(const std::vector<RangeRegion>& ranges) {
    PipelineGeometry g;
    for (size_t i = 0; i < ranges.size(); ++i)
        if (ranges[i].id != static_cast<int>(i))
            throw InvalidInput("range ids must be 0..n-1 in input order");
    g.always_true.assign(ranges.size(), 0);
    g.always_false.assign(ranges.size(), 0);
    std::vector<std::vector<int>> raw_by_range(ranges.size());
    std::vector<int> all_raw;
    for (size_t i = 0; i < ranges.size(); ++i) {
        auto arcs = split_x_monotone(ranges[i], g.arcs);
        if (arcs.empty()) {
            if (range_is_everything(ranges[i]))
                g.always_true[i] = 1;
            else
                g.always_false[i] = 1;
            continue;
        }
        for (const auto& a : arcs) {
            raw_by_range[i].push_back(a.id);
            all_raw.push_back(a.id);
        }
    }
    g.subarc_ids = cut_to_pseudosegments(g.arcs, all_raw);
    g.chi = count_crossings(g.arcs, g.subarc_ids);
    // group the surviving subarcs back by range
    std::vector<std::vector<int>> cut_by_range(ranges.size());
    for (int id : g.subarc_ids) cut_by_range[static_cast<size_t>(g.arcs[id].source_range)].push_back(id);
    g.by_range.resize(ranges.size());
    for (size_t i = 0; i < ranges.size(); ++i) {
        if (g.always_true[i] || g.always_false[i]) continue;
        auto cells = vertical_decompose(ranges[i], g.arcs, cut_by_range[i]);
        for (auto& c : cells) {
            c.id = static_cast<int>(g.trapezoids.size());
            g.by_range[i].push_back(c.id);
            g.trapezoids.push_back(c);
        }
    }
    return g;
}

}  // namespace bcp
