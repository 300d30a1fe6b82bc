#include "bcp/param.hpp"

#include <algorithm>
#include <map>

#include "bcp/errors.hpp"

namespace bcp {

namespace {

using Lit = std::pair<int, bool>;  // (atom template index, positive)
using Conj = std::vector<Lit>;

}  // namespace

Rational MPoly::eval(const std::vector<Rational>& y) const {
    Rational acc = 0;
    for (const auto& t : terms) {
        Rational v = t.coef;
        for (size_t i = 0; i < t.exp.size(); ++i)
            for (int e = 0; e < t.exp[i]; ++e) v *= y[i];
        acc += v;
    }
    return acc;
}

namespace {

// extended-interval helpers (closed intervals, optionally unbounded)

ExtRange range_point(const Rational& v) { return {false, false, v, v}; }

ExtRange range_add(const ExtRange& a, const ExtRange& b) {
    ExtRange r;
    r.lo_inf = a.lo_inf || b.lo_inf;
    r.hi_inf = a.hi_inf || b.hi_inf;
    if (!r.lo_inf) r.lo = a.lo + b.lo;
    if (!r.hi_inf) r.hi = a.hi + b.hi;
    return r;
}

ExtRange range_scale(const ExtRange& a, const Rational& k) {
    ExtRange r;
    int s = sign_of(k);
    if (s == 0) return range_point(Rational(0));
    if (s > 0) {
        r.lo_inf = a.lo_inf;
        r.hi_inf = a.hi_inf;
        if (!r.lo_inf) r.lo = a.lo * k;
        if (!r.hi_inf) r.hi = a.hi * k;
    } else {
        r.lo_inf = a.hi_inf;
        r.hi_inf = a.lo_inf;
        if (!r.lo_inf) r.lo = a.hi * k;
        if (!r.hi_inf) r.hi = a.lo * k;
    }
    return r;
}

// range of x^e over a closed extended interval
ExtRange range_pow(const ExtInterval& iv, int e) {
    if (e == 0) return range_point(Rational(1));
    ExtRange r;
    if (e % 2 == 1) {
        r.lo_inf = iv.lo_inf;
        r.hi_inf = iv.hi_inf;
        if (!r.lo_inf) {
            r.lo = iv.lo;
            for (int i = 1; i < e; ++i) r.lo *= iv.lo;
        }
        if (!r.hi_inf) {
            r.hi = iv.hi;
            for (int i = 1; i < e; ++i) r.hi *= iv.hi;
        }
        return r;
    }
    // even power
    auto pw = [&](const Rational& v) {
        Rational x = v;
        for (int i = 1; i < e; ++i) x *= v;
        return x;
    };
    bool contains_zero = (iv.lo_inf || sign_of(iv.lo) <= 0) && (iv.hi_inf || sign_of(iv.hi) >= 0);
    if (iv.lo_inf || iv.hi_inf) {
        r.hi_inf = true;
        r.lo_inf = false;
        if (contains_zero)
            r.lo = 0;
        else if (!iv.lo_inf && sign_of(iv.lo) > 0)
            r.lo = pw(iv.lo);
        else
            r.lo = pw(iv.hi);
        return r;
    }
    Rational plo = pw(iv.lo), phi = pw(iv.hi);
    r.lo_inf = r.hi_inf = false;
    r.hi = std::max(plo, phi);
    r.lo = contains_zero ? Rational(0) : std::min(plo, phi);
    return r;
}

ExtRange range_mul(const ExtRange& a, const ExtRange& b) {
    // general product of extended ranges
    auto mul_bound = [](bool ainf, int asign_at_inf, const Rational& av, bool binf,
                        const Rational& bv) -> std::pair<bool, Rational> {
        (void)asign_at_inf;
        if (ainf || binf) return {true, Rational(0)};
        return {false, av * bv};
    };
    (void)mul_bound;
    // corners: lo*lo, lo*hi, hi*lo, hi*hi with infinity propagation by sign
    struct B {
        bool inf;
        int inf_sign;
        Rational v;
    };
    auto corner = [](bool ai, int as, const Rational& av, bool bi, int bs,
                     const Rational& bv) -> B {
        if (ai && bi) return {true, as * bs, Rational(0)};
        if (ai) {
            int s = sign_of(bv);
            if (s == 0) return {false, 0, Rational(0)};
            return {true, as * s, Rational(0)};
        }
        if (bi) {
            int s = sign_of(av);
            if (s == 0) return {false, 0, Rational(0)};
            return {true, bs * s, Rational(0)};
        }
        return {false, 0, av * bv};
    };
    B c1 = corner(a.lo_inf, -1, a.lo, b.lo_inf, -1, b.lo);
    B c2 = corner(a.lo_inf, -1, a.lo, b.hi_inf, +1, b.hi);
    B c3 = corner(a.hi_inf, +1, a.hi, b.lo_inf, -1, b.lo);
    B c4 = corner(a.hi_inf, +1, a.hi, b.hi_inf, +1, b.hi);
    ExtRange r;
    r.lo_inf = r.hi_inf = false;
    bool first = true;
    for (const B& c : {c1, c2, c3, c4}) {
        if (c.inf) {
            if (c.inf_sign < 0)
                r.lo_inf = true;
            else
                r.hi_inf = true;
            continue;
        }
        if (first) {
            r.lo = r.hi = c.v;
            first = false;
        } else {
            if (c.v < r.lo) r.lo = c.v;
            if (c.v > r.hi) r.hi = c.v;
        }
    }
    if (first) {  // all corners infinite
        r.lo_inf = r.hi_inf = true;
    }
    return r;
}

}  // namespace

ExtRange mpoly_range_on_box(const MPoly& g, const std::vector<ExtInterval>& box) {
    ExtRange acc = range_point(Rational(0));
    for (const auto& t : g.terms) {
        ExtRange term = range_point(Rational(1));
        for (size_t v = 0; v < t.exp.size(); ++v) {
            if (t.exp[v] == 0) continue;
            term = range_mul(term, range_pow(box[v], t.exp[v]));
        }
        term = range_scale(term, t.coef);
        acc = range_add(acc, term);
    }
    return acc;
}

namespace {

void mpoly_add_term(MPoly& p, std::vector<int> exp, const Rational& c) {
    if (c == 0) return;
    for (auto& t : p.terms)
        if (t.exp == exp) {
            t.coef += c;
            return;
        }
    p.terms.push_back({std::move(exp), c});
}

// Lift one atom template at a fixed point: polynomial in the s parameters.
MPoly lift_template(const AtomTemplate& t, const Point2& p, int s) {
    MPoly g;
    g.nvars = s;
    std::vector<int> z(static_cast<size_t>(s), 0);
    auto E = [&](int var, int e) {
        std::vector<int> exp = z;
        exp[static_cast<size_t>(var)] = e;
        return exp;
    };
    switch (t.kind) {
        case AtomKind::halfplane: {
            int ia = t.param_idx.at(0), ib = t.param_idx.at(1);
            mpoly_add_term(g, z, p.y);
            mpoly_add_term(g, E(ia, 1), Rational(-p.x));
            mpoly_add_term(g, E(ib, 1), Rational(-1));
            break;
        }
        case AtomKind::disk: {
            // c - (px - a)^2 - (py - b)^2
            int ia = t.param_idx.at(0), ib = t.param_idx.at(1), ic = t.param_idx.at(2);
            mpoly_add_term(g, E(ic, 1), Rational(1));
            mpoly_add_term(g, z, Rational(-p.x * p.x - p.y * p.y));
            mpoly_add_term(g, E(ia, 1), Rational(2 * p.x));
            mpoly_add_term(g, E(ia, 2), Rational(-1));
            mpoly_add_term(g, E(ib, 1), Rational(2 * p.y));
            mpoly_add_term(g, E(ib, 2), Rational(-1));
            break;
        }
        case AtomKind::parabola: {
            int ia = t.param_idx.at(0), ib = t.param_idx.at(1), ic = t.param_idx.at(2);
            mpoly_add_term(g, z, p.y);
            mpoly_add_term(g, E(ia, 1), Rational(-p.x * p.x));
            mpoly_add_term(g, E(ib, 1), Rational(-p.x));
            mpoly_add_term(g, E(ic, 1), Rational(-1));
            break;
        }
    }
    if (t.negate) {
        for (auto& term : g.terms) term.coef = -term.coef;
    }
    return g;
}

bool same_template(const AtomTemplate& a, const AtomTemplate& b) {
    return a.kind == b.kind && a.param_idx == b.param_idx && a.negate == b.negate;
}

bool same_shape(const BoolShape& a, const BoolShape& b) {
    if (a.op != b.op || a.atom != b.atom || a.children.size() != b.children.size()) return false;
    for (size_t i = 0; i < a.children.size(); ++i)
        if (!same_shape(a.children[i], b.children[i])) return false;
    return true;
}

}  // namespace

std::vector<ParamPoint> parametrize(const std::vector<RangeRegion>& ranges) {
    std::vector<ParamPoint> out;
    if (ranges.empty()) return out;
    const RangeRegion& ex = ranges[0];
    for (const auto& r : ranges) {
        if (r.family != ex.family || r.params.size() != ex.params.size() ||
            r.templates.size() != ex.templates.size() || !same_shape(r.shape, ex.shape))
            throw InvalidInput("parametrize: ranges must share one family/predicate template");
        for (size_t i = 0; i < r.templates.size(); ++i)
            if (!same_template(r.templates[i], ex.templates[i]))
                throw InvalidInput("parametrize: ranges must share one family/predicate template");
        out.push_back({r.params, r.id});
    }
    return out;
}

DualRegionPredicate lift_point(const Point2& p, const RangeRegion& exemplar) {
    DualRegionPredicate d;
    d.point_id = p.id;
    int s = exemplar.parametric_dimension();
    for (const auto& t : exemplar.templates) d.atom_polys.push_back(lift_template(t, p, s));
    return d;
}

MedianSplitResult partition_parameter_space(const std::vector<std::vector<Rational>>& pts,
                                            const std::vector<std::optional<Rational>>& fixed,
                                            int D) {
    if (D < 1) throw InvalidInput("D must be >= 1");
    MedianSplitResult res;
    size_t s = fixed.size();
    std::vector<int> free_vars;
    for (size_t v = 0; v < s; ++v)
        if (!fixed[v]) free_vars.push_back(static_cast<int>(v));
    ExtInterval whole;
    std::vector<ExtInterval> box(s, whole);
    for (size_t v = 0; v < s; ++v)
        if (fixed[v]) box[v] = ExtInterval{false, false, *fixed[v], *fixed[v]};
    std::vector<int> all(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) all[i] = static_cast<int>(i);
    long limit = static_cast<long>(pts.size()) / D;  // |Σ_τ| <= n/D, i.e. count*D <= n

    struct Work {
        std::vector<ExtInterval> box;
        std::vector<int> members;
        int cursor;
    };
    std::vector<Work> stack{{box, all, 0}};
    std::map<std::pair<int, std::string>, size_t> residue_index;
    while (!stack.empty()) {
        Work w = std::move(stack.back());
        stack.pop_back();
        if (static_cast<long>(w.members.size()) * D <= static_cast<long>(pts.size()) ||
            free_vars.empty()) {
            if (!w.members.empty()) res.cells.push_back({w.box, w.members});
            continue;
        }
        (void)limit;
        int var = free_vars[static_cast<size_t>(w.cursor) % free_vars.size()];
        std::vector<Rational> vals;
        vals.reserve(w.members.size());
        for (int i : w.members) vals.push_back(pts[static_cast<size_t>(i)][static_cast<size_t>(var)]);
        std::nth_element(vals.begin(), vals.begin() + static_cast<long>(vals.size() / 2),
                         vals.end());
        Rational med = vals[vals.size() / 2];
        std::vector<int> left, right, on;
        for (int i : w.members) {
            int c = sign_of(Rational(pts[static_cast<size_t>(i)][static_cast<size_t>(var)] - med));
            if (c < 0)
                left.push_back(i);
            else if (c > 0)
                right.push_back(i);
            else
                on.push_back(i);
        }
        if (!on.empty()) {
            auto key = std::make_pair(var, rational_to_string(med));
            auto it = residue_index.find(key);
            if (it == residue_index.end()) {
                residue_index[key] = res.residues.size();
                res.residues.emplace_back(var, med, on);
            } else {
                auto& vec = std::get<2>(res.residues[it->second]);
                vec.insert(vec.end(), on.begin(), on.end());
            }
        }
        Work wl{w.box, std::move(left), w.cursor + 1};
        wl.box[static_cast<size_t>(var)].hi_inf = false;
        wl.box[static_cast<size_t>(var)].hi = med;
        Work wr{w.box, std::move(right), w.cursor + 1};
        wr.box[static_cast<size_t>(var)].lo_inf = false;
        wr.box[static_cast<size_t>(var)].lo = med;
        if (!wl.members.empty()) stack.push_back(std::move(wl));
        if (!wr.members.empty()) stack.push_back(std::move(wr));
    }
    return res;
}

// ── 1-dimensional base case ─────────────────────────────────────────

BicliquePartition base_case_curve(const std::vector<Rational>& sigma_positions,
                                  const std::vector<int>& sigma_range_ids,
                                  const std::vector<std::pair<int, std::vector<LineInterval>>>&
                                      point_intervals) {
    BicliquePartition part;
    size_t n = sigma_positions.size();
    if (n == 0) return part;
    std::vector<int> idx(n);
    for (size_t i = 0; i < n; ++i) idx[i] = static_cast<int>(i);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        int c = sign_of(Rational(sigma_positions[static_cast<size_t>(a)] -
                                 sigma_positions[static_cast<size_t>(b)]));
        if (c != 0) return c < 0;
        return sigma_range_ids[static_cast<size_t>(a)] < sigma_range_ids[static_cast<size_t>(b)];
    });
    std::vector<Rational> sorted_vals(n);
    for (size_t i = 0; i < n; ++i) sorted_vals[i] = sigma_positions[static_cast<size_t>(idx[i])];

    // canonical segment tree over indices [0, n)
    struct Node {
        int a, b, l = -1, r = -1;
        std::vector<int> selectors;  // point ids selecting this node
    };
    std::vector<Node> nodes;
    struct Builder {
        std::vector<Node>& nodes;
        int build(int a, int b) {
            int id = static_cast<int>(nodes.size());
            nodes.push_back({a, b});
            if (b - a > 1) {
                int mid = (a + b) / 2;
                int l = build(a, mid);
                int r = build(mid, b);
                nodes[static_cast<size_t>(id)].l = l;
                nodes[static_cast<size_t>(id)].r = r;
            }
            return id;
        }
        void insert(int id, int a, int b, int point_id) {
            Node& nd = nodes[static_cast<size_t>(id)];
            if (b <= nd.a || nd.b <= a) return;
            if (a <= nd.a && nd.b <= b) {
                nd.selectors.push_back(point_id);
                return;
            }
            insert(nd.l, a, b, point_id);
            insert(nd.r, a, b, point_id);
        }
    } builder{nodes};
    int root = builder.build(0, static_cast<int>(n));

    auto first_geq = [&](const Abscissa& x, bool strict) {
        // first index with value > x (strict) or >= x
        int lo = 0, hi = static_cast<int>(n);
        while (lo < hi) {
            int mid = (lo + hi) / 2;
            int c = x.compare(sorted_vals[static_cast<size_t>(mid)]);
            bool go_right = strict ? (c >= 0) : (c > 0);
            if (go_right)
                lo = mid + 1;
            else
                hi = mid;
        }
        return lo;
    };

    for (const auto& [pid, intervals] : point_intervals) {
        for (const auto& iv : intervals) {
            int a, b;
            if (iv.lo.kind() == Abscissa::Kind::NegInf)
                a = 0;
            else
                a = first_geq(iv.lo, !iv.lo_closed);
            if (iv.hi.kind() == Abscissa::Kind::PosInf)
                b = static_cast<int>(n);
            else
                b = first_geq(iv.hi, iv.hi_closed);
            if (a < b) builder.insert(root, a, b, pid);
        }
    }
    for (const auto& nd : nodes) {
        if (nd.selectors.empty()) continue;
        Biclique b;
        b.stage = Stage::base_case;
        for (int i = nd.a; i < nd.b; ++i)
            b.range_ids.push_back(sigma_range_ids[static_cast<size_t>(idx[static_cast<size_t>(i)])]);
        b.point_ids = nd.selectors;
        part.add(std::move(b));
    }
    return part;
}

// ── boolean-shape normalization into disjoint conjunctions ──────────

namespace {

std::vector<Conj> and_lists(const std::vector<Conj>& A, const std::vector<Conj>& B) {
    std::vector<Conj> out;
    for (const auto& a : A) {
        for (const auto& b : B) {
            Conj c = a;
            bool contradict = false;
            for (const auto& lb : b) {
                bool dup = false;
                for (const auto& la : c) {
                    if (la.first != lb.first) continue;
                    if (la.second == lb.second)
                        dup = true;
                    else
                        contradict = true;
                }
                if (contradict) break;
                if (!dup) c.push_back(lb);
            }
            if (!contradict) out.push_back(std::move(c));
            if (out.size() > 512) throw InvalidInput("boolean shape: leaf budget exceeded");
        }
    }
    return out;
}

std::vector<Conj> norm_pos(const BoolShape& s);
std::vector<Conj> norm_neg(const BoolShape& s);

std::vector<Conj> norm_pos(const BoolShape& s) {
    switch (s.op) {
        case BoolShape::Op::leaf: return {{{s.atom, true}}};
        case BoolShape::Op::neg: return norm_neg(s.children[0]);
        case BoolShape::Op::conj: {
            std::vector<Conj> acc{{}};
            for (const auto& c : s.children) acc = and_lists(acc, norm_pos(c));
            return acc;
        }
        case BoolShape::Op::disj: {
            std::vector<Conj> out;
            std::vector<Conj> prefix_neg{{}};
            for (const auto& c : s.children) {
                for (auto& t : and_lists(prefix_neg, norm_pos(c))) out.push_back(std::move(t));
                prefix_neg = and_lists(prefix_neg, norm_neg(c));
                if (out.size() > 512) throw InvalidInput("boolean shape: leaf budget exceeded");
            }
            return out;
        }
    }
    return {};
}

std::vector<Conj> norm_neg(const BoolShape& s) {
    switch (s.op) {
        case BoolShape::Op::leaf: return {{{s.atom, false}}};
        case BoolShape::Op::neg: return norm_pos(s.children[0]);
        case BoolShape::Op::disj: {
            std::vector<Conj> acc{{}};
            for (const auto& c : s.children) acc = and_lists(acc, norm_neg(c));
            return acc;
        }
        case BoolShape::Op::conj: {
            std::vector<Conj> out;
            std::vector<Conj> prefix_pos{{}};
            for (const auto& c : s.children) {
                for (auto& t : and_lists(prefix_pos, norm_neg(c))) out.push_back(std::move(t));
                prefix_pos = and_lists(prefix_pos, norm_pos(c));
                if (out.size() > 512) throw InvalidInput("boolean shape: leaf budget exceeded");
            }
            return out;
        }
    }
    return {};
}

// ── the §4 chain recursion ──────────────────────────────────────────

struct ChainCtx {
    const std::vector<RangeRegion>& ranges;
    const std::vector<Point2>& points;
    const RangeRegion& exemplar;
    Conj literals;
    const BuildConfig& cfg;
    CuttingStats* stats;
    BicliquePartition& out;
    // lifted[p][l]: literal polynomial at point p (negation folded in)
    std::vector<std::vector<MPoly>> lifted;
    std::vector<bool> strict;  // per literal
};

bool literal_sat(const ChainCtx& ctx, int p_idx, int lit, const std::vector<Rational>& coords) {
    int sgn = sign_of(ctx.lifted[static_cast<size_t>(p_idx)][static_cast<size_t>(lit)].eval(coords));
    return ctx.strict[static_cast<size_t>(lit)] ? (sgn > 0) : (sgn >= 0);
}

bool suffix_sat(const ChainCtx& ctx, int p_idx, int lit_from, const std::vector<Rational>& coords) {
    for (size_t l = static_cast<size_t>(lit_from); l < ctx.literals.size(); ++l)
        if (!literal_sat(ctx, p_idx, static_cast<int>(l), coords)) return false;
    return true;
}

// y-polynomial of a literal restricted to a line (all vars fixed except `var`).
std::pair<UPoly, bool> literal_on_line(const MPoly& g,
                                       const std::vector<std::optional<Rational>>& fixed,
                                       int var) {
    std::vector<Rational> coef;
    for (const auto& t : g.terms) {
        Rational c = t.coef;
        int deg = 0;
        for (size_t v = 0; v < t.exp.size(); ++v) {
            if (static_cast<int>(v) == var) {
                deg = t.exp[v];
                continue;
            }
            for (int e = 0; e < t.exp[v]; ++e) c *= *fixed[v];
        }
        if (static_cast<size_t>(deg) >= coef.size()) coef.resize(static_cast<size_t>(deg) + 1, Rational(0));
        coef[static_cast<size_t>(deg)] += c;
    }
    Integer den(1);
    for (const auto& c : coef) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
    std::vector<Integer> ic(coef.size());
    bool zero = true;
    for (size_t i = 0; i < coef.size(); ++i) {
        Rational scaled = coef[i] * Rational(den);
        ic[i] = scaled.get_num();
        if (ic[i] != 0) zero = false;
    }
    return {UPoly(std::move(ic)), zero};
}

// Solution intervals of q >= 0 (or > 0) on the line.
std::vector<LineInterval> poly_sign_intervals(const UPoly& q, bool strict) {
    std::vector<LineInterval> out;
    if (q.is_zero() || q.degree() == 0) {
        int s = q.is_zero() ? 0 : sign_of(q.c[0]);
        bool sat = strict ? (s > 0) : (s >= 0);
        if (sat) out.push_back({Abscissa::neg_inf(), Abscissa::pos_inf(), false, false});
        return out;
    }
    std::vector<Abscissa> roots = poly_real_roots(q);
    // alternate open pieces and roots, then merge adjacent satisfied segments
    struct Seg {
        bool sat;
        LineInterval iv;
    };
    std::vector<Seg> segs;
    for (size_t k = 0; k <= roots.size(); ++k) {
        Abscissa lo = (k == 0) ? Abscissa::neg_inf() : roots[k - 1];
        Abscissa hi = (k == roots.size()) ? Abscissa::pos_inf() : roots[k];
        Rational xm = rational_between(lo, hi);
        int s = q.sign_at(xm);
        segs.push_back({strict ? (s > 0) : (s >= 0), {lo, hi, false, false}});
        if (k < roots.size()) segs.push_back({!strict, {roots[k], roots[k], true, true}});
    }
    size_t i = 0;
    while (i < segs.size()) {
        if (!segs[i].sat) {
            ++i;
            continue;
        }
        size_t j = i;
        while (j + 1 < segs.size() && segs[j + 1].sat) ++j;
        out.push_back({segs[i].iv.lo, segs[j].iv.hi, segs[i].iv.lo_closed, segs[j].iv.hi_closed});
        i = j + 1;
    }
    return out;
}

std::vector<LineInterval> intersect_intervals(const std::vector<LineInterval>& a,
                                              const std::vector<LineInterval>& b) {
    std::vector<LineInterval> out;
    for (const auto& x : a) {
        for (const auto& y : b) {
            // lower bound: max
            LineInterval r;
            int c = x.lo.compare(y.lo);
            if (c > 0) {
                r.lo = x.lo;
                r.lo_closed = x.lo_closed;
            } else if (c < 0) {
                r.lo = y.lo;
                r.lo_closed = y.lo_closed;
            } else {
                r.lo = x.lo;
                r.lo_closed = x.lo_closed && y.lo_closed;
            }
            c = x.hi.compare(y.hi);
            if (c < 0) {
                r.hi = x.hi;
                r.hi_closed = x.hi_closed;
            } else if (c > 0) {
                r.hi = y.hi;
                r.hi_closed = y.hi_closed;
            } else {
                r.hi = x.hi;
                r.hi_closed = x.hi_closed && y.hi_closed;
            }
            int lc = r.lo.compare(r.hi);
            if (lc > 0) continue;
            if (lc == 0 && !(r.lo_closed && r.hi_closed)) continue;
            out.push_back(r);
        }
    }
    return out;
}

void chain_rec(ChainCtx& ctx, const std::vector<std::optional<Rational>>& fixed,
               const std::vector<int>& sigma, const std::vector<int>& pts, int lit, int depth);

void fallback_2d(ChainCtx& ctx, const std::vector<int>& sigma, const std::vector<int>& pts,
                 int lit) {
    std::vector<RangeRegion> sub;
    sub.reserve(sigma.size());
    int k = static_cast<int>(ctx.literals.size());
    for (size_t i = 0; i < sigma.size(); ++i) {
        const RangeRegion& src = ctx.ranges[static_cast<size_t>(sigma[i])];
        std::vector<AtomTemplate> templates;
        for (int l = lit; l < k; ++l) {
            AtomTemplate t = ctx.exemplar.templates[static_cast<size_t>(ctx.literals[static_cast<size_t>(l)].first)];
            if (!ctx.literals[static_cast<size_t>(l)].second) t.negate = !t.negate;
            templates.push_back(t);
        }
        BoolShape shape;
        if (templates.size() == 1) {
            shape = BoolShape::leaf_of(0);
        } else {
            shape.op = BoolShape::Op::conj;
            for (size_t l = 0; l < templates.size(); ++l)
                shape.children.push_back(BoolShape::leaf_of(static_cast<int>(l)));
        }
        RangeRegion r = make_custom(static_cast<int>(i), src.params, templates, shape);
        for (int l = lit; l < k; ++l)
            if (!ctx.literals[static_cast<size_t>(l)].second)
                r.atoms[static_cast<size_t>(l - lit)].strict = true;
        sub.push_back(std::move(r));
    }
    std::vector<Point2> sub_pts;
    sub_pts.reserve(pts.size());
    for (int p : pts) sub_pts.push_back(ctx.points[static_cast<size_t>(p)]);
    BicliquePartition part = biclique_primal(sub, sub_pts, ctx.cfg, ctx.stats);
    for (auto& b : part.bicliques) {
        for (auto& id : b.range_ids)
            id = ctx.ranges[static_cast<size_t>(sigma[static_cast<size_t>(id)])].id;
        ctx.out.add(std::move(b));
    }
}

void base_case_1d(ChainCtx& ctx, const std::vector<std::optional<Rational>>& fixed,
                  const std::vector<int>& sigma, const std::vector<int>& pts, int lit, int var) {
    std::vector<Rational> positions;
    std::vector<int> range_ids;
    for (int s : sigma) {
        positions.push_back(ctx.ranges[static_cast<size_t>(s)].params[static_cast<size_t>(var)]);
        range_ids.push_back(ctx.ranges[static_cast<size_t>(s)].id);
    }
    int k = static_cast<int>(ctx.literals.size());
    std::vector<std::pair<int, std::vector<LineInterval>>> point_ivs;
    for (int p : pts) {
        std::vector<LineInterval> acc{{Abscissa::neg_inf(), Abscissa::pos_inf(), false, false}};
        for (int l = lit; l < k && !acc.empty(); ++l) {
            auto [q, zero] =
                literal_on_line(ctx.lifted[static_cast<size_t>(p)][static_cast<size_t>(l)], fixed, var);
            std::vector<LineInterval> sol;
            if (zero) {
                if (!ctx.strict[static_cast<size_t>(l)])
                    sol.push_back({Abscissa::neg_inf(), Abscissa::pos_inf(), false, false});
            } else {
                sol = poly_sign_intervals(q, ctx.strict[static_cast<size_t>(l)]);
            }
            acc = intersect_intervals(acc, sol);
        }
        if (!acc.empty()) point_ivs.emplace_back(ctx.points[static_cast<size_t>(p)].id, acc);
    }
    ctx.out.append(base_case_curve(positions, range_ids, point_ivs));
}

void chain_rec(ChainCtx& ctx, const std::vector<std::optional<Rational>>& fixed,
               const std::vector<int>& sigma, const std::vector<int>& pts, int lit, int depth) {
    if (sigma.empty() || pts.empty()) return;
    if (depth > ctx.cfg.depth_guard)
        throw InvariantViolation("parameter-space recursion exceeded the depth guard at n_v=" +
                                 std::to_string(sigma.size()) +
                                 " m_v=" + std::to_string(pts.size()));
    long n_v = static_cast<long>(sigma.size());
    long m_v = static_cast<long>(pts.size());
    unsigned __int128 m4 = static_cast<unsigned __int128>(m_v) * m_v;
    m4 *= m4;
    unsigned __int128 n5 = static_cast<unsigned __int128>(n_v) * n_v;
    n5 = n5 * n5 * static_cast<unsigned __int128>(n_v);
    if (m4 > n5) {
        fallback_2d(ctx, sigma, pts, lit);
        return;
    }
    if (n_v <= ctx.cfg.n0) {
        for (int s : sigma) {
            const auto& coords = ctx.ranges[static_cast<size_t>(s)].params;
            for (int p : pts) {
                if (!suffix_sat(ctx, p, lit, coords)) continue;
                Biclique b;
                b.stage = Stage::param_leaf;
                b.range_ids = {ctx.ranges[static_cast<size_t>(s)].id};
                b.point_ids = {ctx.points[static_cast<size_t>(p)].id};
                ctx.out.add(std::move(b));
            }
        }
        return;
    }
    std::vector<int> free_vars;
    for (size_t v = 0; v < fixed.size(); ++v)
        if (!fixed[v]) free_vars.push_back(static_cast<int>(v));
    if (free_vars.size() == 1) {
        base_case_1d(ctx, fixed, sigma, pts, lit, free_vars[0]);
        return;
    }

    std::vector<std::vector<Rational>> coords;
    coords.reserve(sigma.size());
    for (int s : sigma) coords.push_back(ctx.ranges[static_cast<size_t>(s)].params);
    MedianSplitResult split = partition_parameter_space(coords, fixed, ctx.cfg.D);

    long accounted = 0;
    for (const auto& cell : split.cells) {
        if (static_cast<long>(cell.members.size()) * ctx.cfg.D > n_v)
            throw InvariantViolation("parameter partition: cell cardinality bound violated");
        accounted += static_cast<long>(cell.members.size());
    }
    for (const auto& res : split.residues) accounted += static_cast<long>(std::get<2>(res).size());
    if (accounted != n_v)
        throw InvariantViolation("parameter partition: conservation failed");

    int k = static_cast<int>(ctx.literals.size());
    for (const auto& cell : split.cells) {
        std::vector<int> cell_sigma;
        cell_sigma.reserve(cell.members.size());
        for (int i : cell.members) cell_sigma.push_back(sigma[static_cast<size_t>(i)]);
        std::vector<int> containers, crossers;
        for (int p : pts) {
            ExtRange r = mpoly_range_on_box(
                ctx.lifted[static_cast<size_t>(p)][static_cast<size_t>(lit)], cell.box);
            bool always, never;
            if (ctx.strict[static_cast<size_t>(lit)]) {
                always = !r.lo_inf && sign_of(r.lo) > 0;
                never = !r.hi_inf && sign_of(r.hi) <= 0;
            } else {
                always = !r.lo_inf && sign_of(r.lo) >= 0;
                never = !r.hi_inf && sign_of(r.hi) < 0;
            }
            if (always)
                containers.push_back(p);
            else if (!never)
                crossers.push_back(p);
        }
        if (!containers.empty()) {
            if (lit + 1 == k) {
                Biclique b;
                b.stage = Stage::param_container;
                for (int s : cell_sigma) b.range_ids.push_back(ctx.ranges[static_cast<size_t>(s)].id);
                for (int p : containers)
                    b.point_ids.push_back(ctx.points[static_cast<size_t>(p)].id);
                ctx.out.add(std::move(b));
            } else {
                chain_rec(ctx, fixed, cell_sigma, containers, lit + 1, depth + 1);
            }
        }
        chain_rec(ctx, fixed, cell_sigma, crossers, lit, depth + 1);
    }
    for (const auto& [var, value, members] : split.residues) {
        std::vector<int> res_sigma;
        res_sigma.reserve(members.size());
        for (int i : members) res_sigma.push_back(sigma[static_cast<size_t>(i)]);
        std::vector<std::optional<Rational>> fixed2 = fixed;
        fixed2[static_cast<size_t>(var)] = value;
        chain_rec(ctx, fixed2, res_sigma, pts, lit, depth + 1);
    }
}

}  // namespace

BicliquePartition biclique_boolean(const std::vector<RangeRegion>& ranges,
                                   const std::vector<Point2>& points, const BuildConfig& cfg,
                                   CuttingStats* stats) {
    BicliquePartition part;
    if (ranges.empty() || points.empty()) return part;
    parametrize(ranges);  // validates template uniformity
    const RangeRegion& exemplar = ranges[0];
    std::vector<Conj> conjunctions = norm_pos(exemplar.shape);

    std::vector<int> all_sigma(ranges.size()), all_pts(points.size());
    for (size_t i = 0; i < ranges.size(); ++i) all_sigma[i] = static_cast<int>(i);
    for (size_t i = 0; i < points.size(); ++i) all_pts[i] = static_cast<int>(i);
    std::vector<std::optional<Rational>> fixed(
        static_cast<size_t>(exemplar.parametric_dimension()));

    for (const auto& conj : conjunctions) {
        if (conj.empty()) {
            // vacuous conjunction: every pair qualifies
            Biclique b;
            b.stage = Stage::special;
            for (const auto& r : ranges) b.range_ids.push_back(r.id);
            for (const auto& p : points) b.point_ids.push_back(p.id);
            part.add(std::move(b));
            continue;
        }
        ChainCtx ctx{ranges, points, exemplar, conj, cfg, stats, part, {}, {}};
        ctx.lifted.resize(points.size());
        for (size_t p = 0; p < points.size(); ++p) {
            for (const auto& [atom, positive] : conj) {
                MPoly g = lift_template(exemplar.templates[static_cast<size_t>(atom)], points[p],
                                        exemplar.parametric_dimension());
                if (!positive)
                    for (auto& t : g.terms) t.coef = -t.coef;
                ctx.lifted[p].push_back(std::move(g));
            }
        }
        for (const auto& [atom, positive] : conj) ctx.strict.push_back(!positive);
        chain_rec(ctx, fixed, all_sigma, all_pts, 0, 0);
    }
    return part;
}

BicliquePartition biclique_param(const std::vector<RangeRegion>& ranges,
                                 const std::vector<Point2>& points, const BuildConfig& cfg,
                                 CuttingStats* stats) {
    return biclique_boolean(ranges, points, cfg, stats);
}

}  // namespace bcp
