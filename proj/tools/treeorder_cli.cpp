// Command-line front end for the layout benchmarks.
//
//   treeorder gen-workload  --seed S [--tree avl] [--n-write N] [--n-read R] [--out file.csv]
//   treeorder bench-reorder --seed S [--algorithm A ...] [--out file.csv]
//   treeorder bench-offline --seed S [--strategy A] [--repetitions K] [--out file.csv]
//   treeorder bench-online  --seed S [--policy P] [--threshold T ...] [--out file.csv]
#include "treeorder/bench.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

using namespace treeorder;

namespace {

struct CommonFlags {
    std::vector<std::string> trees{"avl"};
    std::vector<std::size_t> n_write{1000};
    std::size_t n_read = 10000;
    double hot_fraction = 0.1;
    double hot_weight = 0.9;
    std::uint64_t seed = 0;
    std::string out;
    std::uint32_t fanout = 16;
    std::uint32_t octree_leaf = 4;
    double region0_fraction = 0.25;
    std::vector<double> weights{1.0, 3.0};
};

void add_common(CLI::App* cmd, CommonFlags& f, bool multi) {
    if (multi) {
        cmd->add_option("--tree", f.trees, "Tree kinds: bst, avl, octree, bptree")->capture_default_str();
        cmd->add_option("--n-write", f.n_write, "Number of written keys")->capture_default_str();
    } else {
        cmd->add_option("--tree", f.trees, "Tree kind: bst, avl, octree, bptree")
            ->capture_default_str()
            ->expected(1);
        cmd->add_option("--n-write", f.n_write, "Number of written keys")->capture_default_str()->expected(1);
    }
    cmd->add_option("--n-read", f.n_read, "Number of reads")->capture_default_str();
    cmd->add_option("--hot-fraction", f.hot_fraction, "Share of keys that are hot")->capture_default_str();
    cmd->add_option("--hot-weight", f.hot_weight, "Share of reads hitting hot keys")->capture_default_str();
    cmd->add_option("--seed", f.seed, "RNG seed")->required();
    cmd->add_option("--out", f.out, "CSV output path (stdout when omitted)");
    cmd->add_option("--fanout", f.fanout, "B+-tree fanout")->capture_default_str();
    cmd->add_option("--octree-leaf", f.octree_leaf, "Octree leaf capacity")->capture_default_str();
    cmd->add_option("--region0-fraction", f.region0_fraction, "Fast region size as a share of n-write")
        ->capture_default_str();
    cmd->add_option("--region-weights", f.weights, "Per-access cost of region 0 and region 1")
        ->expected(2)
        ->capture_default_str();
}

TreeKind tree_kind(const std::string& name) {
    auto kind = parse_tree_kind(name);
    if (!kind)
        throw std::invalid_argument("unknown tree kind '" + name + "'");
    return *kind;
}

Algorithm algorithm(const std::string& name) {
    auto a = parse_algorithm(name);
    if (!a)
        throw std::invalid_argument("unknown algorithm '" + name + "'");
    return *a;
}

bench::WorkloadSpec workload_spec(const CommonFlags& f, TreeKind kind, std::size_t n_write) {
    bench::WorkloadSpec spec;
    spec.tree_kind = kind;
    spec.n_write_keys = n_write;
    spec.n_reads = f.n_read;
    spec.hot_fraction = f.hot_fraction;
    spec.hot_weight = f.hot_weight;
    spec.seed = f.seed;
    spec.validate();
    return spec;
}

bench::ArenaConfig arena_config(const CommonFlags& f) {
    bench::ArenaConfig config;
    config.region0_fraction = f.region0_fraction;
    config.region0_weight = f.weights.at(0);
    config.region1_weight = f.weights.at(1);
    config.tree_options.bptree_fanout = f.fanout;
    config.tree_options.octree_leaf_capacity = f.octree_leaf;
    return config;
}

void write_rows(const std::vector<bench::ResultRow>& rows, const std::string& out) {
    if (out.empty())
        std::cout << bench::format_csv(rows);
    else
        bench::emit_csv(rows, out);
}

void print_summary(const std::vector<bench::ResultRow>& rows) {
    for (const auto& r : rows)
        std::fprintf(stderr, "%-8s %-7s %-17s %-22s %-10s n=%zu wall=%.3fms copies=%llu reorders=%llu cost=%.0f\n",
                     r.experiment.c_str(), r.tree.c_str(), r.algorithm.c_str(), r.policy.c_str(), r.phase.c_str(),
                     r.n_write, static_cast<double>(r.metrics.wall_ns) / 1e6,
                     static_cast<unsigned long long>(r.metrics.copy_ops),
                     static_cast<unsigned long long>(r.metrics.reorders), r.metrics.weighted_cost);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tree node layout reordering benchmarks"};
    app.require_subcommand(1);

    CommonFlags gen_flags;
    auto* gen = app.add_subcommand("gen-workload", "Write the generated workload as CSV (op,key,value)");
    add_common(gen, gen_flags, false);

    CommonFlags reorder_flags;
    std::vector<std::string> algorithms;
    for (Algorithm a : kAllAlgorithms)
        algorithms.emplace_back(to_string(a));
    auto* reorder = app.add_subcommand("bench-reorder", "Time every reorder algorithm on a shuffled tree");
    add_common(reorder, reorder_flags, true);
    reorder->add_option("--algorithm", algorithms, "Algorithms to run")->capture_default_str();

    CommonFlags offline_flags;
    std::string offline_strategy = "native-path";
    int repetitions = 1;
    auto* offline = app.add_subcommand("bench-offline", "Re-read time before and after one offline reorder");
    add_common(offline, offline_flags, true);
    offline->add_option("--strategy", offline_strategy, "Reorder algorithm")->capture_default_str();
    offline->add_option("--repetitions", repetitions, "Timed re-reads per layout (median)")->capture_default_str();

    CommonFlags online_flags;
    std::string policy_name = "access-threshold";
    std::string online_strategy = "native-path";
    std::string scope_name = "full-tree";
    std::vector<std::uint64_t> thresholds{std::uint64_t{1} << 16};
    PolicyConfig policy;
    auto* online = app.add_subcommand("bench-online", "Baseline vs. reordering during operation");
    add_common(online, online_flags, true);
    online->add_option("--policy", policy_name, "none, access-threshold or ratio-threshold")->capture_default_str();
    online->add_option("--threshold", thresholds, "Access threshold(s); several values sweep")->capture_default_str();
    online->add_option("--ratio-delta", policy.ratio_delta, "Ratio drift that triggers")->capture_default_str();
    online->add_option("--ratio-guard", policy.ratio_guard_accesses, "Node accesses before ratios count")
        ->capture_default_str();
    online->add_option("--strategy", online_strategy, "Reorder algorithm")->capture_default_str();
    online->add_option("--scope", scope_name, "full-tree or subtree")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            const auto spec = workload_spec(gen_flags, tree_kind(gen_flags.trees.at(0)), gen_flags.n_write.at(0));
            const auto w = bench::generate_workload(spec);
            std::ofstream file;
            if (!gen_flags.out.empty()) {
                file.open(gen_flags.out, std::ios::trunc);
                if (!file)
                    throw std::runtime_error("cannot open " + gen_flags.out + " for writing");
            }
            std::ostream& os = gen_flags.out.empty() ? std::cout : file;
            os << "op,key,value\n";
            for (const auto& [k, v] : w.writes)
                os << "write," << k << ',' << v << '\n';
            for (Key k : w.reads)
                os << "read," << k << ",\n";
            if (!os)
                throw std::runtime_error("failed writing workload");
        } else if (*reorder) {
            std::vector<Algorithm> algs;
            for (const auto& a : algorithms)
                algs.push_back(algorithm(a));
            std::vector<bench::ResultRow> rows;
            for (const auto& t : reorder_flags.trees)
                for (std::size_t n : reorder_flags.n_write) {
                    auto r = bench::bench_reorder_algorithms(workload_spec(reorder_flags, tree_kind(t), n), algs,
                                                             arena_config(reorder_flags));
                    rows.insert(rows.end(), r.begin(), r.end());
                }
            print_summary(rows);
            write_rows(rows, reorder_flags.out);
        } else if (*offline) {
            std::vector<bench::ResultRow> rows;
            for (const auto& t : offline_flags.trees)
                for (std::size_t n : offline_flags.n_write) {
                    auto r = bench::bench_offline_potential(workload_spec(offline_flags, tree_kind(t), n),
                                                            algorithm(offline_strategy), arena_config(offline_flags),
                                                            repetitions);
                    std::fprintf(stderr, "%s n=%zu runtime ratio %.4f, weighted cost ratio %.4f\n", t.c_str(), n,
                                 r.runtime_ratio, r.cost_ratio);
                    rows.insert(rows.end(), r.rows.begin(), r.rows.end());
                }
            print_summary(rows);
            write_rows(rows, offline_flags.out);
        } else if (*online) {
            auto kind = parse_policy_kind(policy_name);
            if (!kind)
                throw std::invalid_argument("unknown policy '" + policy_name + "'");
            policy.kind = *kind;
            policy.strategy = algorithm(online_strategy);
            if (scope_name == "subtree")
                policy.scope = ReorderScope::subtree;
            else if (scope_name != "full-tree")
                throw std::invalid_argument("unknown scope '" + scope_name + "'");
            policy.access_threshold = thresholds.at(0);

            std::vector<bench::ResultRow> rows;
            std::vector<TreeKind> kinds;
            for (const auto& t : online_flags.trees)
                kinds.push_back(tree_kind(t));
            const auto base = workload_spec(online_flags, kinds.at(0), online_flags.n_write.at(0));
            if (policy.kind == PolicyKind::access_threshold) {
                rows = bench::bench_online_threshold_sweep(base, kinds, online_flags.n_write, thresholds, policy,
                                                           arena_config(online_flags));
            } else {
                for (TreeKind k : kinds)
                    for (std::size_t n : online_flags.n_write) {
                        auto r = bench::bench_online(workload_spec(online_flags, k, n), policy,
                                                     arena_config(online_flags));
                        rows.insert(rows.end(), r.rows.begin(), r.rows.end());
                    }
            }
            print_summary(rows);
            write_rows(rows, online_flags.out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
