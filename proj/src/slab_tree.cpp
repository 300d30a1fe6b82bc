#include "bcp/slab_tree.hpp"

#include <algorithm>

#include "bcp/errors.hpp"

namespace bcp {

namespace {

// Builds a balanced tree over leaves [a, b); returns node id.
int build_rec(SlabTree& t, int a, int b, const std::vector<int>& leaf_node_of) {
    if (b - a == 1) return leaf_node_of[static_cast<size_t>(a)];
    int mid = (a + b) / 2;
    int l = build_rec(t, a, mid, leaf_node_of);
    int r = build_rec(t, mid, b, leaf_node_of);
    SlabNode n;
    n.id = static_cast<int>(t.nodes.size());
    n.lo = t.nodes[static_cast<size_t>(l)].lo;
    n.hi = t.nodes[static_cast<size_t>(r)].hi;
    n.child_left = l;
    n.child_right = r;
    n.pt_begin = t.nodes[static_cast<size_t>(l)].pt_begin;
    n.pt_end = t.nodes[static_cast<size_t>(r)].pt_end;
    t.nodes.push_back(n);
    t.nodes[static_cast<size_t>(l)].parent = n.id;
    t.nodes[static_cast<size_t>(r)].parent = n.id;
    return n.id;
}

void insert_rec(SlabTree& t, int node, const Abscissa& L, const Abscissa& R, int trap_id) {
    SlabNode& n = t.nodes[static_cast<size_t>(node)];
    if (L.compare(n.lo) <= 0 && n.hi.compare(R) <= 0) {
        n.stored.push_back(trap_id);
        return;
    }
    if (n.leaf()) throw InvariantViolation("trapezoid projection misses the elementary grid");
    const SlabNode& cl = t.nodes[static_cast<size_t>(n.child_left)];
    const SlabNode& cr = t.nodes[static_cast<size_t>(n.child_right)];
    if (L.compare(cl.hi) < 0 && cl.lo.compare(R) < 0) insert_rec(t, n.child_left, L, R, trap_id);
    if (L.compare(cr.hi) < 0 && cr.lo.compare(R) < 0) insert_rec(t, n.child_right, L, R, trap_id);
}

}  // namespace

SlabTree SlabTree::build(const std::vector<PseudoTrapezoid>& trapezoids,
                         const std::vector<Point2>& points) {
    SlabTree t;
    for (const auto& tr : trapezoids) {
        if (tr.left.finite()) t.endpoints.push_back(tr.left);
        if (tr.right.finite()) t.endpoints.push_back(tr.right);
    }
    auto cmp = [](const Abscissa& a, const Abscissa& b) { return a.compare(b) < 0; };
    std::sort(t.endpoints.begin(), t.endpoints.end(), cmp);
    t.endpoints.erase(std::unique(t.endpoints.begin(), t.endpoints.end(),
                                  [](const Abscissa& a, const Abscissa& b) {
                                      return a.compare(b) == 0;
                                  }),
                      t.endpoints.end());

    int leaves = static_cast<int>(t.endpoints.size()) + 1;

    // route points to leaves: leaf i covers (e_{i-1}, e_i]
    std::vector<std::pair<int, int>> routed;  // (leaf, point id)
    routed.reserve(points.size());
    for (const auto& p : points) {
        int lo = 0, hi = static_cast<int>(t.endpoints.size());
        while (lo < hi) {  // first endpoint >= p.x
            int mid = (lo + hi) / 2;
            if (t.endpoints[static_cast<size_t>(mid)].compare(p.x) >= 0)
                hi = mid;
            else
                lo = mid + 1;
        }
        routed.emplace_back(lo, p.id);
    }
    std::sort(routed.begin(), routed.end());

    std::vector<int> leaf_node_of(static_cast<size_t>(leaves));
    size_t cursor = 0;
    for (int i = 0; i < leaves; ++i) {
        SlabNode n;
        n.id = static_cast<int>(t.nodes.size());
        n.lo = (i == 0) ? Abscissa::neg_inf() : t.endpoints[static_cast<size_t>(i - 1)];
        n.hi = (i == leaves - 1) ? Abscissa::pos_inf() : t.endpoints[static_cast<size_t>(i)];
        n.pt_begin = static_cast<int>(t.pt_order.size());
        while (cursor < routed.size() && routed[cursor].first == i) {
            t.pt_order.push_back(routed[cursor].second);
            ++cursor;
        }
        n.pt_end = static_cast<int>(t.pt_order.size());
        leaf_node_of[static_cast<size_t>(i)] = n.id;
        t.nodes.push_back(n);
    }
    int root = build_rec(t, 0, leaves, leaf_node_of);
    t.levels = 1;
    {
        std::vector<std::pair<int, int>> stack{{root, 1}};
        while (!stack.empty()) {
            auto [id, depth] = stack.back();
            stack.pop_back();
            t.levels = std::max(t.levels, depth);
            const SlabNode& n = t.nodes[static_cast<size_t>(id)];
            if (!n.leaf()) {
                stack.push_back({n.child_left, depth + 1});
                stack.push_back({n.child_right, depth + 1});
            }
        }
    }
    // callers expect the root at index 0
    if (root != 0) {
        std::swap(t.nodes[0], t.nodes[static_cast<size_t>(root)]);
        auto fix = [&](int& link) {
            if (link == 0)
                link = root;
            else if (link == root)
                link = 0;
        };
        for (auto& n : t.nodes) {
            fix(n.parent);
            fix(n.child_left);
            fix(n.child_right);
        }
        std::swap(t.nodes[0].id, t.nodes[static_cast<size_t>(root)].id);
    }
    for (const auto& tr : trapezoids) insert_rec(t, 0, tr.left, tr.right, tr.id);
    return t;
}

long SlabTree::sum_n() const {
    long s = 0;
    for (const auto& n : nodes) s += n.n_v();
    return s;
}

long SlabTree::sum_m() const {
    long s = 0;
    for (const auto& n : nodes) s += n.m_v();
    return s;
}

}  // namespace bcp
