#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "bcp/apps.hpp"
#include "bcp/harness.hpp"
#include "json.hpp"

namespace {

using namespace bcp;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write '" + path + "'");
    out << text;
}

std::map<int, long> weights_from_file(const std::string& path, const std::vector<int>& default_ids) {
    std::map<int, long> w;
    if (path.empty()) {
        for (int id : default_ids) w[id] = 1;
        return w;
    }
    auto j = nlohmann::ordered_json::parse(read_file(path));
    for (auto it = j.begin(); it != j.end(); ++it) w[std::stoi(it.key())] = it.value().get<long>();
    return w;
}

struct CommonOpts {
    std::string input, output;
    std::string strategy = "auto";
    uint64_t seed = 0;
    bool seed_set = false;
    int r0 = 4, D = 8, n0 = 32, threads = 1;
};

BuildConfig make_config(const CommonOpts& o, const InstanceSpec& inst) {
    BuildConfig cfg;
    cfg.r0 = o.r0;
    cfg.D = o.D;
    cfg.n0 = o.n0;
    cfg.seed = o.seed_set ? o.seed : inst.seed;
    return cfg;
}

void add_common(CLI::App* cmd, CommonOpts& o, bool with_strategy = true) {
    cmd->add_option("-i,--input", o.input, "instance JSON file")->required();
    cmd->add_option("-o,--output", o.output, "output file (default stdout)");
    if (with_strategy)
        cmd->add_option("--strategy", o.strategy, "dual|primal|param|auto")
            ->check(CLI::IsMember({"dual", "primal", "param", "auto"}));
    cmd->add_option("--seed", o.seed, "override the build seed")->each([&](const std::string&) {
        o.seed_set = true;
    });
    cmd->add_option("--r0", o.r0, "cutting refinement factor");
    cmd->add_option("--D", o.D, "parameter-space partition factor");
    cmd->add_option("--n0", o.n0, "parameter-space leaf size");
    cmd->add_option("--threads", o.threads, "worker threads (bench only)");
}

int run(int argc, char** argv) {
    CLI::App app{"biclique partitions of point/range incidences"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a seeded instance");
    std::string gen_kind = "uniform-disks", gen_out;
    int gen_m = 100, gen_n = 50;
    uint64_t gen_seed = 0;
    gen->add_option("--kind", gen_kind,
                    "uniform-disks|uniform-halfplanes|annuli|parabolic|clustered|"
                    "adversarial-lenses|boolean-mix");
    gen->add_option("--m", gen_m, "number of points");
    gen->add_option("--n", gen_n, "number of ranges");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("-o,--output", gen_out, "output file (default stdout)");

    // build / validate / count / enclose / bfs
    CommonOpts bo, vo, co, eo, fo;
    auto* build = app.add_subcommand("build", "build a biclique partition");
    add_common(build, bo);
    auto* validate = app.add_subcommand("validate", "build and validate against brute force");
    add_common(validate, vo);
    auto* count = app.add_subcommand("count", "per-range point counts (semigroup weights)");
    add_common(count, co);
    std::string count_weights;
    count->add_option("--weights", count_weights, "JSON point weights (default all 1)");
    auto* enclose = app.add_subcommand("enclose", "per-point range weights");
    add_common(enclose, eo);
    std::string enclose_weights;
    enclose->add_option("--weights", enclose_weights, "JSON range weights (default all 1)");
    auto* bfs = app.add_subcommand("bfs", "BFS over the compressed incidence graph");
    add_common(bfs, fo);
    std::string bfs_source = "p:0";
    bfs->add_option("--source", bfs_source, "source vertex: p:<id> or r:<id>");

    // bench
    auto* bench = app.add_subcommand("bench", "scaling experiments, CSV output");
    std::string bench_kinds = "uniform-disks", bench_sizes = "128:128", bench_strategies = "auto",
                bench_seeds = "0", bench_out, bench_timing = "zero";
    CommonOpts beno;
    bench->add_option("--kinds", bench_kinds, "comma-separated generator kinds");
    bench->add_option("--sizes", bench_sizes, "comma-separated m:n pairs");
    bench->add_option("--strategies", bench_strategies, "comma-separated strategies");
    bench->add_option("--seeds", bench_seeds, "comma-separated seeds");
    bench->add_option("--timing", bench_timing, "zero|wall (zero keeps output byte-stable)")
        ->check(CLI::IsMember({"zero", "wall"}));
    bench->add_option("--r0", beno.r0, "cutting refinement factor");
    bench->add_option("--D", beno.D, "parameter-space partition factor");
    bench->add_option("--n0", beno.n0, "parameter-space leaf size");
    bench->add_option("--threads", beno.threads, "parallel bench runs");
    bench->add_option("-o,--output", bench_out, "output CSV (default stdout)");

    CLI11_PARSE(app, argc, argv);

    auto split_csv = [](const std::string& s) {
        std::vector<std::string> out;
        std::string cur;
        for (char c : s) {
            if (c == ',') {
                out.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (!cur.empty()) out.push_back(cur);
        return out;
    };

    if (gen->parsed()) {
        InstanceSpec inst = generate_instance(gen_kind, gen_m, gen_n, gen_seed);
        write_output(gen_out, instance_to_json(inst));
        return 0;
    }
    if (build->parsed()) {
        InstanceSpec inst = instance_from_json(read_file(bo.input));
        BuildConfig cfg = make_config(bo, inst);
        BicliquePartition part =
            build_partition(inst, strategy_from_name(bo.strategy), cfg, nullptr);
        write_output(bo.output, partition_to_json(part, bo.strategy, cfg.seed));
        return 0;
    }
    if (validate->parsed()) {
        InstanceSpec inst = instance_from_json(read_file(vo.input));
        BuildConfig cfg = make_config(vo, inst);
        BicliquePartition part =
            build_partition(inst, strategy_from_name(vo.strategy), cfg, nullptr);
        ValidationReport rep = validate_partition(part, inst);
        write_output(vo.output, report_to_json(rep));
        return rep.valid() ? 0 : 2;
    }
    if (count->parsed()) {
        InstanceSpec inst = instance_from_json(read_file(co.input));
        BuildConfig cfg = make_config(co, inst);
        BicliquePartition part =
            build_partition(inst, strategy_from_name(co.strategy), cfg, nullptr);
        std::vector<int> ids;
        for (const auto& p : inst.points) ids.push_back(p.id);
        auto w = weights_from_file(count_weights, ids);
        SemigroupSpec<long> plus{[](const long& a, const long& b) { return a + b; }};
        auto res = offline_range_weights(part, w, plus);
        nlohmann::ordered_json j;
        for (const auto& [r, v] : res) j[std::to_string(r)] = v;
        write_output(co.output, j.dump(2) + "\n");
        return 0;
    }
    if (enclose->parsed()) {
        InstanceSpec inst = instance_from_json(read_file(eo.input));
        BuildConfig cfg = make_config(eo, inst);
        BicliquePartition part =
            build_partition(inst, strategy_from_name(eo.strategy), cfg, nullptr);
        std::vector<int> ids;
        for (const auto& r : inst.ranges) ids.push_back(r.id);
        auto w = weights_from_file(enclose_weights, ids);
        SemigroupSpec<long> plus{[](const long& a, const long& b) { return a + b; }};
        auto res = point_enclosure_weights(part, w, plus);
        nlohmann::ordered_json j;
        for (const auto& [p, v] : res) j[std::to_string(p)] = v;
        write_output(eo.output, j.dump(2) + "\n");
        return 0;
    }
    if (bfs->parsed()) {
        InstanceSpec inst = instance_from_json(read_file(fo.input));
        BuildConfig cfg = make_config(fo, inst);
        BicliquePartition part =
            build_partition(inst, strategy_from_name(fo.strategy), cfg, nullptr);
        if (bfs_source.size() < 3 || (bfs_source[0] != 'p' && bfs_source[0] != 'r') ||
            bfs_source[1] != ':')
            throw InvalidInput("--source must be p:<id> or r:<id>");
        BfsSource src{bfs_source[0] == 'p', std::stoi(bfs_source.substr(2))};
        CompressedGraph g = CompressedGraph::build(part);
        BfsResult res = biclique_bfs(g, src);
        nlohmann::ordered_json j;
        j["points"] = nlohmann::ordered_json();
        j["ranges"] = nlohmann::ordered_json();
        for (const auto& [p, d] : res.point_dist) j["points"][std::to_string(p)] = d;
        for (const auto& [r, d] : res.range_dist) j["ranges"][std::to_string(r)] = d;
        write_output(fo.output, j.dump(2) + "\n");
        return 0;
    }
    if (bench->parsed()) {
        BenchConfig bc;
        for (const auto& kv : split_csv(bench_sizes)) {
            auto pos = kv.find(':');
            if (pos == std::string::npos) throw InvalidInput("--sizes entries are m:n");
            bc.sizes.emplace_back(std::stoi(kv.substr(0, pos)), std::stoi(kv.substr(pos + 1)));
        }
        bc.kinds = split_csv(bench_kinds);
        for (const auto& s : split_csv(bench_strategies))
            bc.strategies.push_back(strategy_from_name(s));
        for (const auto& s : split_csv(bench_seeds)) bc.seeds.push_back(std::stoull(s));
        bc.build.r0 = beno.r0;
        bc.build.D = beno.D;
        bc.build.n0 = beno.n0;
        bc.threads = beno.threads;
        bc.wall_timing = bench_timing == "wall";
        write_output(bench_out, bench_to_csv(scaling_experiment(bc)));
        return 0;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const bcp::InvariantViolation& e) {
        std::cerr << "internal invariant violation: " << e.what() << "\n";
        return 4;
    } catch (const bcp::InvalidInput& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
