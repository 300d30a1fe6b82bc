#pragma once

#include "bcp/instance.hpp"
#include "bcp/param.hpp"

namespace bcp {

enum class Strategy { dual, primal, param, automatic };
std::string strategy_name(Strategy s);
Strategy strategy_from_name(const std::string& s);

// One partition build; `automatic` is the param pipeline with its internal switches.
BicliquePartition build_partition(const InstanceSpec& inst, Strategy strategy,
                                  const BuildConfig& cfg, CuttingStats* stats);

// Exact incidence pairs (range_id, point_id), sorted.
std::vector<std::pair<int, int>> brute_force_incidences(const InstanceSpec& inst);

struct ValidationReport {
    long pair_count_oracle = 0;
    long pair_count_partition = 0;
    long missing_pairs = 0;
    long duplicate_pairs = 0;
    long spurious_pairs = 0;
    long partition_size = 0;
    double bound_ratio = 0.0;
    bool valid() const { return missing_pairs == 0 && duplicate_pairs == 0 && spurious_pairs == 0; }
};

ValidationReport validate_partition(const BicliquePartition& part, const InstanceSpec& inst);
std::string report_to_json(const ValidationReport& rep);

// The parametric dimension used for bound evaluation (uniform over the instance).
int instance_dimension(const InstanceSpec& inst);

std::string partition_to_json(const BicliquePartition& part, const std::string& strategy,
                              uint64_t seed);

struct BenchRow {
    int m = 0, n = 0, s = 0;
    std::string strategy;
    long partition_size = 0;
    long build_millis = 0;
    double bound_ratio = 0.0;
    uint64_t seed = 0;
    bool error = false;
};

struct BenchConfig {
    std::vector<std::pair<int, int>> sizes;  // (m, n)
    std::vector<std::string> kinds;
    std::vector<Strategy> strategies;
    std::vector<uint64_t> seeds;
    BuildConfig build;
    bool wall_timing = false;  // timing column is zeroed unless requested
    int threads = 1;
};

std::vector<BenchRow> scaling_experiment(const BenchConfig& cfg);
std::string bench_to_csv(const std::vector<BenchRow>& rows);

}  // namespace bcp
