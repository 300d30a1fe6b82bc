#pragma once

#include <random>

#include "bcp/dual.hpp"

namespace bcp {

// Cell of the primal hierarchical cutting inside one slab.
struct PrimalCell {
    Abscissa lo, hi;
    int bot_arc = -1, top_arc = -1;
    int parent = -1;
    std::vector<int> conflict;    // Ψ_τ: trapezoids whose boundary crosses the open cell
    std::vector<int> contact;     // trapezoids touching the closed cell without entering
    std::vector<int> containers;  // C_τ: parent survivors fully containing the cell
    std::vector<int> cell_points; // P_τ: point ids
};

struct PrimalHierarchy {
    std::vector<std::vector<PrimalCell>> levels;  // levels[0] = slab root
    int r = 0, r0 = 0, nu = 0;
};

// r = min{N_v, ceil(N_v m_v^{2/3} / chi_v^{2/3})}, clamped to [1, N_v]; chi = 0 gives N_v.
int choose_r(long N_v, long m_v, long chi_v);

// Number of arc intersection points strictly inside the slab.
long slab_crossings(const ArcSet& arcs, const std::vector<PseudoTrapezoid>& traps,
                    const std::vector<int>& trap_ids, const Abscissa& lo, const Abscissa& hi);

// Hierarchical (1/r)-cutting of the trapezoids' boundary arcs within the slab.
// Level-i cells are crossed by at most N_v/r0^i trapezoid boundaries (verified).
PrimalHierarchy primal_hierarchical_cutting(const ArcSet& arcs,
                                            const std::vector<PseudoTrapezoid>& traps,
                                            const std::vector<int>& trap_ids,
                                            const std::vector<Point2>& pts, const Abscissa& lo,
                                            const Abscissa& hi, int r, int r0,
                                            const BuildConfig& cfg, std::mt19937_64& rng,
                                            CuttingStats* stats);

// Slab-level partition via the primal cutting: containment bicliques per cell
// plus slab-routine delegates at the bottom level.  Sides reference trapezoid ids.
BicliquePartition biclique_primal_slab(const ArcSet& arcs,
                                       const std::vector<PseudoTrapezoid>& traps,
                                       const std::vector<int>& trap_ids,
                                       const std::vector<Point2>& pts, const Abscissa& lo,
                                       const Abscissa& hi, const BuildConfig& cfg,
                                       std::mt19937_64& rng, CuttingStats* stats);

// Whole-instance primal strategy: geometry pipeline, segment tree, per-node
// cuttings.  Sides reference range ids / point ids; exact coverage of Σ Φ P.
BicliquePartition biclique_primal(const std::vector<RangeRegion>& ranges,
                                  const std::vector<Point2>& points, const BuildConfig& cfg,
                                  CuttingStats* stats);

// Pairs lost to wall tie-breaking: points on a trapezoid's closed left wall that
// no right-open trapezoid of the range owns.  Emitted as single-edge bicliques.
void corner_pairs(const PipelineGeometry& geo, const std::vector<RangeRegion>& ranges,
                  const std::vector<Point2>& points, BicliquePartition& out);

// Trapezoid membership as the slab pipeline sees it: strictly-open left wall.
bool pipeline_owns(const Point2& p, const PseudoTrapezoid& t, const ArcSet& store);

}  // namespace bcp
