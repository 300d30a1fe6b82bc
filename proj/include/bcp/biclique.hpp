#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bcp {

// Which part of the pipeline emitted a biclique.
enum class Stage : uint8_t {
    special,          // always-true ranges paired with all points
    corner,           // wall/corner ownership fixups, single pairs
    dual_cell,        // (Γ_τ, P_τ°) from a dual cutting cell
    primal_container, // (C_τ, P_τ) containment biclique
    param_container,  // (Σ_τ, P_τ°) in parameter space
    param_leaf,       // single edges at n_v <= n0
    base_case,        // 1-dimensional range-tree canonical subsets
};

std::string stage_name(Stage s);

struct Biclique {
    std::vector<int> range_ids;
    std::vector<int> point_ids;
    Stage stage = Stage::special;
};

struct BicliquePartition {
    std::vector<Biclique> bicliques;

    long size() const {
        long s = 0;
        for (const auto& b : bicliques)
            s += static_cast<long>(b.range_ids.size()) + static_cast<long>(b.point_ids.size());
        return s;
    }
    long pair_count() const {
        long s = 0;
        for (const auto& b : bicliques)
            s += static_cast<long>(b.range_ids.size()) * static_cast<long>(b.point_ids.size());
        return s;
    }
    void add(Biclique b) {
        if (b.range_ids.empty() || b.point_ids.empty()) return;
        bicliques.push_back(std::move(b));
    }
    void append(BicliquePartition other) {
        for (auto& b : other.bicliques) bicliques.push_back(std::move(b));
    }
};

}  // namespace bcp
