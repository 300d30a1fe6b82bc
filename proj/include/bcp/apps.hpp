#pragma once

#include <functional>
#include <map>

#include "bcp/biclique.hpp"
#include "bcp/errors.hpp"

namespace bcp {

// Associative commutative combine with no identity: absent map keys are empty sums.
template <class T>
struct SemigroupSpec {
    std::function<T(const T&, const T&)> combine;
};

template <class T>
std::map<int, T> offline_range_weights(const BicliquePartition& part,
                                       const std::map<int, T>& point_weights,
                                       const SemigroupSpec<T>& sg) {
    std::map<int, T> out;
    for (const auto& b : part.bicliques) {
        bool have = false;
        T acc{};
        for (int p : b.point_ids) {
            const T& w = point_weights.at(p);
            acc = have ? sg.combine(acc, w) : w;
            have = true;
        }
        if (!have) continue;
        for (int r : b.range_ids) {
            auto it = out.find(r);
            if (it == out.end())
                out.emplace(r, acc);
            else
                it->second = sg.combine(it->second, acc);
        }
    }
    return out;
}

template <class T>
std::map<int, T> point_enclosure_weights(const BicliquePartition& part,
                                         const std::map<int, T>& range_weights,
                                         const SemigroupSpec<T>& sg) {
    std::map<int, T> out;
    for (const auto& b : part.bicliques) {
        bool have = false;
        T acc{};
        for (int r : b.range_ids) {
            const T& w = range_weights.at(r);
            acc = have ? sg.combine(acc, w) : w;
            have = true;
        }
        if (!have) continue;
        for (int p : b.point_ids) {
            auto it = out.find(p);
            if (it == out.end())
                out.emplace(p, acc);
            else
                it->second = sg.combine(it->second, acc);
        }
    }
    return out;
}

// The partition viewed as a tripartite range/biclique/point adjacency.
struct CompressedGraph {
    const BicliquePartition* part = nullptr;
    std::map<int, std::vector<int>> range_to_bicliques;
    std::map<int, std::vector<int>> point_to_bicliques;

    static CompressedGraph build(const BicliquePartition& part);
    long degree_sum() const;  // equals the partition size
};

struct BfsSource {
    bool is_point = true;
    int id = 0;
};

// Distances in the bipartite incidence graph (edge = incident pair), computed
// by alternating point/biclique/range relaxations; each biclique is consumed
// at most once per direction.  Unreachable vertices are absent.
struct BfsResult {
    std::map<int, long> point_dist;
    std::map<int, long> range_dist;
};
BfsResult biclique_bfs(const CompressedGraph& g, const BfsSource& source);

}  // namespace bcp
