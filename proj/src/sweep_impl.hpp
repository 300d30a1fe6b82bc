#pragma once

// Shared vertical-decomposition sweep for hierarchical cuttings.  The Arena
// supplies the curve family: bi-infinite x-monotone pseudo-curves over the
// working strip (each pair's vertical order flips at most once).
//
//   std::optional<Abscissa> crossing(int u, int w) const;   // order-flip abscissa
//   int order3(int u, int w, const Rational& x) const;      // sign(u - w) at x
//
// Cells are (lo, hi] strips bounded below/above by curve pieces (-1: infinite).

#include <algorithm>
#include <optional>
#include <unordered_map>
#include <vector>

#include "bcp/algebraic.hpp"
#include "bcp/errors.hpp"

namespace bcp::detail {

struct SweepCellGeo {
    Abscissa lo, hi;
    int bot = -1, top = -1;
};

enum class Rel { above, below, crossing };

// Order of two curves on the open piece (lo, hi), probing at tie-free samples.
template <class Arena>
int order_on_piece(const Arena& A, int u, int w, const Abscissa& lo, const Abscissa& hi) {
    Abscissa probe_hi = hi;
    for (int guard = 0; guard < 128; ++guard) {
        Rational xm = rational_between(lo, probe_hi);
        int s = A.order3(u, w, xm);
        if (s != 0) return s;
        probe_hi = Abscissa::rational(xm);  // touched exactly at xm: probe further left
    }
    throw InvariantViolation("order_on_piece: curves indistinguishable");
}

template <class Arena>
std::vector<SweepCellGeo> decompose_cell(const Arena& A, const SweepCellGeo& parent,
                                         std::vector<int> structure) {
    std::sort(structure.begin(), structure.end());
    structure.erase(std::unique(structure.begin(), structure.end()), structure.end());
    auto ensure = [&](int c) {
        if (c >= 0 && !std::binary_search(structure.begin(), structure.end(), c)) {
            structure.push_back(c);
            std::sort(structure.begin(), structure.end());
        }
    };
    ensure(parent.bot);
    ensure(parent.top);
    std::vector<SweepCellGeo> cells;
    if (structure.empty()) {
        cells.push_back(parent);
        return cells;
    }
    struct Event {
        Abscissa x;
        int u, w;
    };
    std::vector<Event> events;
    for (size_t i = 0; i < structure.size(); ++i) {
        for (size_t j = i + 1; j < structure.size(); ++j) {
            auto xi = A.crossing(structure[i], structure[j]);
            if (!xi) continue;
            if (xi->compare(parent.lo) > 0 && xi->compare(parent.hi) < 0)
                events.push_back({*xi, structure[i], structure[j]});
        }
    }
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
        int c = a.x.compare(b.x);
        if (c != 0) return c < 0;
        if (a.u != b.u) return a.u < b.u;
        return a.w < b.w;
    });
    const Abscissa& first_stop = events.empty() ? parent.hi : events[0].x;
    std::vector<int> order = structure;
    {
        // initial order just right of the cell's left wall, at a tie-free sample
        Abscissa probe_hi = first_stop;
        for (int guard = 0;; ++guard) {
            if (guard > 128) throw InvariantViolation("sweep: left order failed to stabilize");
            Rational xs = rational_between(parent.lo, probe_hi);
            bool tie = false;
            for (size_t i = 0; i + 1 < order.size() && !tie; ++i)
                for (size_t j = i + 1; j < order.size() && !tie; ++j)
                    if (A.order3(order[i], order[j], xs) == 0) tie = true;
            if (!tie) {
                std::sort(order.begin(), order.end(),
                          [&](int a, int b) { return A.order3(a, b, xs) < 0; });
                break;
            }
            probe_hi = Abscissa::rational(xs);
        }
    }
    int s = static_cast<int>(order.size());
    std::unordered_map<int, int> pos;
    for (int i = 0; i < s; ++i) pos[order[static_cast<size_t>(i)]] = i;

    std::vector<Abscissa> band_start(static_cast<size_t>(s) + 1, parent.lo);
    auto kept = [&](int g) {
        int pb = parent.bot >= 0 ? pos[parent.bot] : -1;
        int pt = parent.top >= 0 ? pos[parent.top] : s;
        return g > pb && g <= pt;
    };
    auto close_band = [&](int g, const Abscissa& at) {
        if (band_start[static_cast<size_t>(g)].compare(at) >= 0) return;  // empty band
        if (kept(g)) {
            SweepCellGeo c;
            c.lo = band_start[static_cast<size_t>(g)];
            c.hi = at;
            c.bot = (g == 0) ? -1 : order[static_cast<size_t>(g - 1)];
            c.top = (g == s) ? -1 : order[static_cast<size_t>(g)];
            cells.push_back(c);
        }
        band_start[static_cast<size_t>(g)] = at;
    };

    size_t e = 0;
    while (e < events.size()) {
        size_t e2 = e;
        while (e2 < events.size() && events[e2].x.compare(events[e].x) == 0) ++e2;
        std::vector<std::pair<int, int>> batch;
        for (size_t k = e; k < e2; ++k) batch.emplace_back(events[k].u, events[k].w);
        const Abscissa& at = events[e].x;
        while (!batch.empty()) {
            bool progressed = false;
            for (size_t k = 0; k < batch.size(); ++k) {
                int u = batch[k].first, w = batch[k].second;
                int pu = pos[u], pw = pos[w];
                if (std::abs(pu - pw) != 1) continue;
                int i = std::min(pu, pw);
                close_band(i, at);
                close_band(i + 1, at);
                if (i + 2 <= s) close_band(i + 2, at);
                std::swap(order[static_cast<size_t>(i)], order[static_cast<size_t>(i + 1)]);
                pos[order[static_cast<size_t>(i)]] = i;
                pos[order[static_cast<size_t>(i + 1)]] = i + 1;
                batch.erase(batch.begin() + static_cast<long>(k));
                progressed = true;
                break;
            }
            if (!progressed) throw InvariantViolation("sweep: stuck event batch");
        }
        e = e2;
    }
    for (int g = 0; g <= s; ++g) close_band(g, parent.hi);
    return cells;
}

// Classifies a curve against a cell: strictly enters the open cell, passes
// weakly above, or passes weakly below.
template <class Arena>
Rel classify_vs_cell(const Arena& A, int c, const SweepCellGeo& cell) {
    if (c == cell.bot) return Rel::below;
    if (c == cell.top) return Rel::above;
    std::vector<Abscissa> cuts;
    auto add_cut = [&](int other) {
        if (other < 0 || other == c) return;
        auto xi = A.crossing(c, other);
        if (!xi) return;
        if (xi->compare(cell.lo) > 0 && xi->compare(cell.hi) < 0) cuts.push_back(*xi);
    };
    add_cut(cell.bot);
    add_cut(cell.top);
    std::sort(cuts.begin(), cuts.end(),
              [](const Abscissa& a, const Abscissa& b) { return a.compare(b) < 0; });
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](const Abscissa& a, const Abscissa& b) { return a.compare(b) == 0; }),
               cuts.end());
    bool above_seen = false, below_seen = false;
    Abscissa piece_lo = cell.lo;
    for (size_t k = 0; k <= cuts.size(); ++k) {
        const Abscissa& piece_hi = (k < cuts.size()) ? cuts[k] : cell.hi;
        int rb = cell.bot >= 0 ? order_on_piece(A, c, cell.bot, piece_lo, piece_hi) : +1;
        int rt = cell.top >= 0 ? order_on_piece(A, c, cell.top, piece_lo, piece_hi) : -1;
        if (rb > 0 && rt < 0) return Rel::crossing;
        if (rt > 0)
            above_seen = true;
        else
            below_seen = true;
        piece_lo = piece_hi;
    }
    if (above_seen && below_seen)
        throw InvariantViolation("curve classification: disconnected relation");
    return above_seen ? Rel::above : Rel::below;
}

}  // namespace bcp::detail
