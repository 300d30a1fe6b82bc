#pragma once

#include <optional>
#include <random>
#include <vector>

#include "bcp/biclique.hpp"
#include "bcp/slab_tree.hpp"

namespace bcp {

// Per-level accounting shared by the dual and primal cuttings.
struct CutLevelStats {
    long cells = 0;
    long max_conflict = 0;
    long bound = 0;          // the verified per-cell conflict bound at this level
    long sum_objects = 0;    // dual points / slab points distributed at this level
};

struct CuttingStats {
    std::vector<CutLevelStats> levels;
    long retries = 0;
};

struct BuildConfig {
    int r0 = 4;
    int sample_factor = 2;   // sample size multiplier per refinement
    int max_retries = 20;
    int D = 8;
    int n0 = 32;
    int depth_guard = 64;
    long cell_budget = 1000000;
    uint64_t seed = 0;
};

// One station of the duality: an arc (or an unbounded marker) owned by a trapezoid.
struct DualStation {
    int arc = -1;       // arc id in the ArcSet; -1: unbounded side, every point counts above
    int payload = -1;   // caller token carried to the emitted bicliques (e.g. trapezoid id)
};

// Stations must enter the scaffold in the slab's left-boundary order (the
// paper's left-endpoint-y order); this permutation computes it.
std::vector<int> station_left_order(const ArcSet& arcs, const std::vector<DualStation>& stations,
                                    const Abscissa& slab_lo, const Abscissa& slab_hi);

// The pseudo-line duality scaffold over one vertical slab.  Arcs become dual
// points at integer abscissae, points become dual pseudo-lines; the curves are
// realized as polylines through exact per-station heights derived from the
// primal side-of flags, so every downstream predicate is plain rational
// geometry.  Supports the reflected (downward) predicate via `reflect`.
// Stations are expected in left-boundary order (see station_left_order).
class DualScaffold {
public:
    static DualScaffold build(const ArcSet& arcs, const std::vector<DualStation>& stations,
                              const std::vector<Point2>& pts, bool reflect, const Abscissa& slab_lo,
                              const Abscissa& slab_hi);

    int curve_count() const { return m_; }
    int station_count() const { return n_; }
    // +1: curve passes weakly above the dual point of station k (1-based); -1 strictly below.
    int flag(int station, int curve) const {
        return heights_[static_cast<size_t>(station)][static_cast<size_t>(curve)] > 0 ? 1 : -1;
    }
    const std::vector<int>& station_order() const { return station_order_; }  // scaffold order -> input index

    // Exact height of curve u at abscissa x (piecewise linear, constant tails).
    Rational height_at(int u, const Rational& x) const;
    // Vertical order of curves u and w at x: +1 if u above w, 0 at their crossing.
    int order_at(int u, int w, const Rational& x) const;
    // Unique crossing of a pair, if any.
    std::optional<Rational> crossing_abscissa(int u, int w) const;

private:
    int m_ = 0, n_ = 0;
    // heights_[s][c]: twice the height of curve c at station s (odd, hence nonzero),
    // for s = 0..n (station 0 realizes the order at x = -inf; station s sits at x = s).
    std::vector<std::vector<long>> heights_;
    std::vector<int> station_order_;
    // station where each swapped pair crosses: key u*m+w (u<w), value s (crossing in (s-1,s))
    std::vector<std::pair<uint64_t, int>> swaps_;
    int find_swap(int u, int w) const;
};

// Cell of the dual cutting: x-range (lo, hi] with curve pieces as floor/ceiling.
struct DualCell {
    Abscissa lo, hi;
    int bot = -1, top = -1;  // curve ids; -1: unbounded
    int parent = -1;
    std::vector<int> conflict;   // curves crossing the open cell
    std::vector<int> canonical;  // P_τ°: parent-conflict curves strictly above
    std::vector<int> gamma;      // stations whose dual point lies in the cell
};

struct DualHierarchy {
    std::vector<std::vector<DualCell>> levels;  // levels[0] = single root
    int r = 0, r0 = 0, nu = 0;
};

// Hierarchical (1/r)-cutting of the dual curves; every level-i cell is crossed
// by at most m/r0^i curves (verified, resampled on failure).
DualHierarchy dual_hierarchical_cutting(const DualScaffold& sc, int r, int r0,
                                        const BuildConfig& cfg, std::mt19937_64& rng,
                                        CuttingStats* stats);

// Biclique partition of Φ↑ over (stations, points): pairs (station, point) with
// the point weakly above the station's arc.  Emitted sides: station payloads /
// point ids.
BicliquePartition biclique_above(const ArcSet& arcs, const std::vector<DualStation>& stations,
                                 const std::vector<Point2>& pts, bool reflect,
                                 const Abscissa& slab_lo, const Abscissa& slab_hi,
                                 const BuildConfig& cfg, std::mt19937_64& rng,
                                 CuttingStats* stats);

// Lemma-level slab routine: trapezoids clipped to the slab (vertical edges on
// its boundary), points inside; two-stage Φ↑ then Φ↓ composition over point
// groups of size <= sqrt(n_v).  Sides reference trapezoid ids / point ids.
BicliquePartition biclique_slab(const ArcSet& arcs, const std::vector<PseudoTrapezoid>& traps,
                                const std::vector<int>& trap_ids, const std::vector<Point2>& pts,
                                const Abscissa& slab_lo, const Abscissa& slab_hi,
                                const BuildConfig& cfg, std::mt19937_64& rng, CuttingStats* stats);

// Full dual-path partition over arbitrary trapezoids: segment tree + slab
// routine per node.  Sides reference trapezoid ids / point ids.
BicliquePartition biclique_trapezoids(const ArcSet& arcs,
                                      const std::vector<PseudoTrapezoid>& traps,
                                      const std::vector<Point2>& points, const BuildConfig& cfg,
                                      CuttingStats* stats);

}  // namespace bcp
