#include "bcp/harness.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <map>
#include <sstream>

#include "bcp/dual.hpp"
#include "bcp/errors.hpp"
#include "json.hpp"

namespace bcp {

std::string stage_name(Stage s) {
    switch (s) {
        case Stage::special: return "special";
        case Stage::corner: return "corner";
        case Stage::dual_cell: return "dual-cell";
        case Stage::primal_container: return "primal-container";
        case Stage::param_container: return "param-container";
        case Stage::param_leaf: return "param-leaf";
        case Stage::base_case: return "base-case";
    }
    return "?";
}

std::string strategy_name(Strategy s) {
    switch (s) {
        case Strategy::dual: return "dual";
        case Strategy::primal: return "primal";
        case Strategy::param: return "param";
        case Strategy::automatic: return "auto";
    }
    return "?";
}

Strategy strategy_from_name(const std::string& s) {
    if (s == "dual") return Strategy::dual;
    if (s == "primal") return Strategy::primal;
    if (s == "param") return Strategy::param;
    if (s == "auto") return Strategy::automatic;
    throw InvalidInput("unknown strategy '" + s + "'");
}

namespace {

// dual strategy: geometry pipeline, specials and corner fixups, slab-tree routine
BicliquePartition build_dual(const InstanceSpec& inst, const BuildConfig& cfg,
                             CuttingStats* stats) {
    BicliquePartition part;
    if (inst.ranges.empty() || inst.points.empty()) return part;
    PipelineGeometry geo = build_geometry(inst.ranges);
    for (size_t i = 0; i < inst.ranges.size(); ++i) {
        if (!geo.always_true[i]) continue;
        Biclique b;
        b.stage = Stage::special;
        b.range_ids = {static_cast<int>(i)};
        for (const auto& p : inst.points) b.point_ids.push_back(p.id);
        part.add(std::move(b));
    }
    corner_pairs(geo, inst.ranges, inst.points, part);
    BicliquePartition traps =
        biclique_trapezoids(geo.arcs, geo.trapezoids, inst.points, cfg, stats);
    for (auto& b : traps.bicliques) {
        for (auto& id : b.range_ids) id = geo.trapezoids[static_cast<size_t>(id)].source_range;
        part.add(std::move(b));
    }
    return part;
}

}  // namespace

BicliquePartition build_partition(const InstanceSpec& inst, Strategy strategy,
                                  const BuildConfig& cfg, CuttingStats* stats) {
    switch (strategy) {
        case Strategy::dual: return build_dual(inst, cfg, stats);
        case Strategy::primal: return biclique_primal(inst.ranges, inst.points, cfg, stats);
        case Strategy::param:
        case Strategy::automatic: return biclique_param(inst.ranges, inst.points, cfg, stats);
    }
    return {};
}

std::vector<std::pair<int, int>> brute_force_incidences(const InstanceSpec& inst) {
    std::vector<std::pair<int, int>> out;
    for (const auto& r : inst.ranges)
        for (const auto& p : inst.points)
            if (point_in_range(p, r)) out.emplace_back(r.id, p.id);
    std::sort(out.begin(), out.end());
    return out;
}

int instance_dimension(const InstanceSpec& inst) {
    int s = 2;
    for (const auto& r : inst.ranges)
        s = std::max(s, family_dimension(r.family, r.parametric_dimension()));
    return s;
}

ValidationReport validate_partition(const BicliquePartition& part, const InstanceSpec& inst) {
    ValidationReport rep;
    auto oracle = brute_force_incidences(inst);
    rep.pair_count_oracle = static_cast<long>(oracle.size());
    std::map<std::pair<int, int>, long> mult;
    for (const auto& b : part.bicliques)
        for (int r : b.range_ids)
            for (int p : b.point_ids) ++mult[{r, p}];
    for (const auto& [pair, count] : mult) {
        rep.pair_count_partition += count;
        bool in_oracle = std::binary_search(oracle.begin(), oracle.end(), pair);
        if (!in_oracle)
            rep.spurious_pairs += count;
        else if (count > 1)
            rep.duplicate_pairs += count - 1;
    }
    for (const auto& pair : oracle)
        if (!mult.count(pair)) ++rep.missing_pairs;
    rep.partition_size = part.size();
    double bound = inst.ranges.empty()
                       ? 0.0
                       : evaluate_bound(static_cast<long>(inst.points.size()),
                                        static_cast<long>(inst.ranges.size()),
                                        instance_dimension(inst));
    rep.bound_ratio = bound > 0 ? static_cast<double>(rep.partition_size) / bound : 0.0;
    return rep;
}

std::string report_to_json(const ValidationReport& rep) {
    nlohmann::ordered_json j;
    j["pair_count_oracle"] = rep.pair_count_oracle;
    j["pair_count_partition"] = rep.pair_count_partition;
    j["missing_pairs"] = rep.missing_pairs;
    j["duplicate_pairs"] = rep.duplicate_pairs;
    j["spurious_pairs"] = rep.spurious_pairs;
    j["partition_size"] = rep.partition_size;
    j["bound_ratio"] = rep.bound_ratio;
    j["valid"] = rep.valid();
    return j.dump(2) + "\n";
}

std::string partition_to_json(const BicliquePartition& part, const std::string& strategy,
                              uint64_t seed) {
    nlohmann::ordered_json j;
    j["bicliques"] = nlohmann::ordered_json::array();
    for (const auto& b : part.bicliques) {
        nlohmann::ordered_json jb;
        jb["ranges"] = b.range_ids;
        jb["points"] = b.point_ids;
        j["bicliques"].push_back(jb);
    }
    j["size"] = part.size();
    j["strategy"] = strategy;
    j["seed"] = seed;
    return j.dump(2) + "\n";
}

std::vector<BenchRow> scaling_experiment(const BenchConfig& cfg) {
    struct Task {
        int m, n;
        std::string kind;
        Strategy strategy;
        uint64_t seed;
    };
    std::vector<Task> tasks;
    for (const auto& [m, n] : cfg.sizes)
        for (const auto& kind : cfg.kinds)
            for (Strategy st : cfg.strategies)
                for (uint64_t seed : cfg.seeds) tasks.push_back({m, n, kind, st, seed});

    auto run_one = [&](const Task& t) {
        BenchRow row;
        row.m = t.m;
        row.n = t.n;
        row.strategy = strategy_name(t.strategy);
        row.seed = t.seed;
        try {
            InstanceSpec inst = generate_instance(t.kind, t.m, t.n, t.seed);
            row.s = instance_dimension(inst);
            BuildConfig bc = cfg.build;
            bc.seed = t.seed;
            auto t0 = std::chrono::steady_clock::now();
            BicliquePartition part = build_partition(inst, t.strategy, bc, nullptr);
            auto t1 = std::chrono::steady_clock::now();
            row.partition_size = part.size();
            if (cfg.wall_timing)
                row.build_millis =
                    std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
            double bound = evaluate_bound(t.m, t.n, row.s);
            row.bound_ratio = bound > 0 ? static_cast<double>(row.partition_size) / bound : 0.0;
        } catch (const std::exception&) {
            row.error = true;
        }
        return row;
    };

    std::vector<BenchRow> rows(tasks.size());
    if (cfg.threads <= 1) {
        for (size_t i = 0; i < tasks.size(); ++i) rows[i] = run_one(tasks[i]);
    } else {
        std::vector<std::future<BenchRow>> futs(tasks.size());
        size_t next = 0;
        while (next < tasks.size()) {
            size_t batch = std::min<size_t>(static_cast<size_t>(cfg.threads),
                                            tasks.size() - next);
            for (size_t k = 0; k < batch; ++k)
                futs[next + k] = std::async(std::launch::async, run_one, tasks[next + k]);
            for (size_t k = 0; k < batch; ++k) rows[next + k] = futs[next + k].get();
            next += batch;
        }
    }
    return rows;
}

std::string bench_to_csv(const std::vector<BenchRow>& rows) {
    std::ostringstream os;
    os << "m,n,s,strategy,partition_size,build_millis,bound_ratio,seed,error\n";
    for (const auto& r : rows) {
        std::ostringstream ratio;
        ratio.precision(6);
        ratio << std::fixed << r.bound_ratio;
        os << r.m << ',' << r.n << ',' << r.s << ',' << r.strategy << ',' << r.partition_size
           << ',' << r.build_millis << ',' << ratio.str() << ',' << r.seed << ','
           << (r.error ? 1 : 0) << "\n";
    }
    return os.str();
}

}  // namespace bcp
