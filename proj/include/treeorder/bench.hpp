#pragma once

#include "treeorder/access_model.hpp"
#include "treeorder/policy.hpp"
#include "treeorder/reorder.hpp"
#include "treeorder/tree.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace treeorder::bench {

struct WorkloadSpec {
    std::size_t n_write_keys = 1000;
    std::size_t n_reads = 10000;
    double hot_fraction = 0.1; // share of written keys that are hot
    double hot_weight = 0.9;   // share of reads that hit hot keys
    std::uint64_t seed = 1;
    TreeKind tree_kind = TreeKind::avl;

    void validate() const;
};

struct Workload {
    std::vector<std::pair<Key, Value>> writes;
    std::vector<Key> reads;
    std::vector<Key> hot_keys;
};

// Deterministic for a fixed spec. Keys are uniform 64-bit values, except for
// octrees where the top bit is cleared (63-bit Morton domain).
Workload generate_workload(const WorkloadSpec& spec);

// Simulated heterogeneous memory: region 0 holds a fraction of the written
// key count, region 1 takes the rest.
struct ArenaConfig {
    double region0_fraction = 0.25;
    double region0_weight = 1.0;
    double region1_weight = 3.0;
    TreeOptions tree_options{};
};

std::vector<MemoryRegion> make_regions(const ArenaConfig& config, std::size_t n_write_keys);

struct RunMetrics {
    std::int64_t wall_ns = 0;
    std::uint64_t copy_ops = 0;
    std::uint64_t reorders = 0;
    double weighted_cost = 0.0;
    std::vector<std::uint64_t> region_accesses; // by region benefit rank
    std::uint64_t fingerprint = 0;
    std::size_t misplaced = 0;         // nodes whose slot changed
    std::size_t nontrivial_cycles = 0; // cycles of that relocation with length > 1
};

struct ResultRow {
    std::string experiment;
    std::string tree;
    std::string algorithm;
    std::string policy;
    std::size_t n_write = 0;
    std::size_t n_read = 0;
    std::uint64_t seed = 0;
    std::string phase;
    RunMetrics metrics;
};

// FNV-1a over the slot -> node id array.
std::uint64_t layout_fingerprint(const Tree& tree);

Tree build_tree(const WorkloadSpec& spec, const Workload& workload, const ArenaConfig& config);

// Replays reads with access recording; returns the populated model.
AccessModel profile_reads(const Tree& tree, std::span<const Key> reads);

// Uniform Fisher-Yates permutation of node slots via swap_nodes.
void shuffle_layout(Tree& tree, std::uint64_t seed);

// Region access counts and weighted cost of replaying `reads` (untimed).
void measure_region_cost(const Tree& tree, std::span<const Key> reads, RunMetrics& metrics);

// Build, profile, shuffle once, then run each algorithm on a fresh copy of the
// shuffled state. One row per algorithm.
std::vector<ResultRow> bench_reorder_algorithms(const WorkloadSpec& spec, std::span<const Algorithm> algorithms,
                                                const ArenaConfig& config = {});

struct OfflineResult {
    RunMetrics baseline;
    RunMetrics reordered;
    RunMetrics reorder;
    double runtime_ratio = 1.0; // reordered / baseline re-read time
    double cost_ratio = 1.0;    // reordered / baseline weighted cost
    std::vector<ResultRow> rows;
};

// Build and profile, then time a full re-read as-is and after reordering with
// `strategy`. Each timed re-read is repeated `repetitions` times, alternating
// between the two layouts; the reported times are medians.
OfflineResult bench_offline_potential(const WorkloadSpec& spec, Algorithm strategy, const ArenaConfig& config = {},
                                      int repetitions = 1);

struct OnlineResult {
    RunMetrics baseline;
    RunMetrics online;
    double runtime_ratio = 1.0;
    std::int64_t reorder_ns = 0; // time spent inside triggered reorders
    std::vector<ResultRow> rows;
};

// Baseline: inserts then reads, no model and no policy checks. Online: the same
// workload with access recording and after_tree_op_hook after every read.
OnlineResult bench_online(const WorkloadSpec& spec, const PolicyConfig& policy, const ArenaConfig& config = {});

// One baseline row per (tree, n) and one online row per (tree, n, threshold).
std::vector<ResultRow> bench_online_threshold_sweep(const WorkloadSpec& base, std::span<const TreeKind> trees,
                                                    std::span<const std::size_t> sizes,
                                                    std::span<const std::uint64_t> thresholds,
                                                    const PolicyConfig& policy, const ArenaConfig& config = {});

inline constexpr const char* kCsvHeader =
    "experiment,tree,algorithm,policy,n_write,n_read,seed,phase,wall_ns,copy_ops,reorders,weighted_cost,fingerprint";

std::string format_csv(std::span<const ResultRow> rows);
// Throws std::runtime_error naming the path on I/O failure.
void emit_csv(std::span<const ResultRow> rows, const std::filesystem::path& path);

} // namespace treeorder::bench
