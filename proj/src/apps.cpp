#include "bcp/apps.hpp"

#include <deque>

namespace bcp {

CompressedGraph CompressedGraph::build(const BicliquePartition& part) {
    CompressedGraph g;
    g.part = &part;
    for (size_t i = 0; i < part.bicliques.size(); ++i) {
        for (int r : part.bicliques[i].range_ids)
            g.range_to_bicliques[r].push_back(static_cast<int>(i));
        for (int p : part.bicliques[i].point_ids)
            g.point_to_bicliques[p].push_back(static_cast<int>(i));
    }
    return g;
}

long CompressedGraph::degree_sum() const {
    long s = 0;
    for (const auto& [r, bs] : range_to_bicliques) s += static_cast<long>(bs.size());
    for (const auto& [p, bs] : point_to_bicliques) s += static_cast<long>(bs.size());
    return s;
}

BfsResult biclique_bfs(const CompressedGraph& g, const BfsSource& source) {
    if (source.is_point) {
        if (!g.point_to_bicliques.count(source.id)) throw InvalidInput("unknown source point id");
    } else {
        if (!g.range_to_bicliques.count(source.id)) throw InvalidInput("unknown source range id");
    }
    BfsResult res;
    const auto& bicliques = g.part->bicliques;
    // a biclique forwards each direction at most once
    std::vector<char> done_to_ranges(bicliques.size(), 0), done_to_points(bicliques.size(), 0);
    struct Item {
        bool is_point;
        int id;
        long dist;
    };
    std::deque<Item> queue;
    if (source.is_point)
        res.point_dist[source.id] = 0;
    else
        res.range_dist[source.id] = 0;
    queue.push_back({source.is_point, source.id, 0});
    while (!queue.empty()) {
        Item it = queue.front();
        queue.pop_front();
        const auto& adj = it.is_point ? g.point_to_bicliques : g.range_to_bicliques;
        auto found = adj.find(it.id);
        if (found == adj.end()) continue;
        for (int bi : found->second) {
            auto& done = it.is_point ? done_to_ranges : done_to_points;
            if (done[static_cast<size_t>(bi)]) continue;
            done[static_cast<size_t>(bi)] = 1;
            const Biclique& b = bicliques[static_cast<size_t>(bi)];
            const auto& other = it.is_point ? b.range_ids : b.point_ids;
            auto& dist_map = it.is_point ? res.range_dist : res.point_dist;
            for (int v : other) {
                if (dist_map.count(v)) continue;
                dist_map[v] = it.dist + 1;
                queue.push_back({!it.is_point, v, it.dist + 1});
            }
        }
    }
    return res;
}

}  // namespace bcp
