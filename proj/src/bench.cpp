#include "treeorder/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <stdexcept>
#include <unordered_set>

namespace treeorder::bench {
namespace {

using Clock = std::chrono::steady_clock;

std::int64_t elapsed_ns(Clock::time_point since) {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - since).count();
}

// Keeps timed lookups from being optimised away.
volatile std::uint64_t g_sink = 0;

std::int64_t timed_reads(const Tree& tree, std::span<const Key> reads) {
    std::uint64_t acc = 0;
    const auto t0 = Clock::now();
    for (Key k : reads)
        acc += tree.lookup(k).value_or(0);
    const auto ns = elapsed_ns(t0);
    g_sink = g_sink + acc;
    return ns;
}

std::int64_t median(std::vector<std::int64_t> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

void relocation_stats(const std::vector<NodeId>& before, const std::vector<NodeId>& after, RunMetrics& metrics) {
    std::vector<SlotIndex> position(before.size());
    for (std::size_t i = 0; i < before.size(); ++i)
        position[before[i]] = static_cast<SlotIndex>(i);
    std::vector<SlotIndex> perm(after.size());
    for (std::size_t i = 0; i < after.size(); ++i)
        perm[i] = position[after[i]];
    const CycleStats stats = cycle_stats(ReorderMap(Representation::location, std::move(perm)));
    metrics.misplaced = stats.misplaced();
    metrics.nontrivial_cycles = stats.cycle_lengths.size();
}

ResultRow make_row(const char* experiment, const WorkloadSpec& spec, std::string algorithm, std::string policy,
                   const char* phase, RunMetrics metrics) {
    return {experiment,   to_string(spec.tree_kind), std::move(algorithm), std::move(policy), spec.n_write_keys,
            spec.n_reads, spec.seed,                 phase,                std::move(metrics)};
}

} // namespace

void WorkloadSpec::validate() const {
    if (!(hot_fraction > 0.0 && hot_fraction < 1.0))
        throw std::invalid_argument("hot_fraction must lie in (0, 1)");
    if (!(hot_weight >= hot_fraction && hot_weight < 1.0))
        throw std::invalid_argument("hot_weight must lie in [hot_fraction, 1)");
}

Workload generate_workload(const WorkloadSpec& spec) {
    spec.validate();
    Workload w;
    if (spec.n_write_keys == 0)
        return w;

    std::mt19937_64 rng(spec.seed);
    const Key key_mask = spec.tree_kind == TreeKind::octree ? (Key{1} << 63) - 1 : ~Key{0};
    std::unordered_set<Key> used;
    used.reserve(spec.n_write_keys * 2);
    w.writes.reserve(spec.n_write_keys);
    while (w.writes.size() < spec.n_write_keys) {
        const Key k = rng() & key_mask;
        if (used.insert(k).second)
            w.writes.emplace_back(k, rng());
    }

    std::vector<std::size_t> order(w.writes.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    const auto hot_count = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(spec.hot_fraction * static_cast<double>(order.size()))), 1,
        order.size());
    std::vector<Key> cold;
    for (std::size_t i = 0; i < order.size(); ++i)
        (i < hot_count ? w.hot_keys : cold).push_back(w.writes[order[i]].first);

    std::bernoulli_distribution pick_hot(spec.hot_weight);
    std::uniform_int_distribution<std::size_t> hot_idx(0, w.hot_keys.size() - 1);
    std::uniform_int_distribution<std::size_t> cold_idx(0, cold.empty() ? 0 : cold.size() - 1);
    w.reads.reserve(spec.n_reads);
    for (std::size_t r = 0; r < spec.n_reads; ++r) {
        if (cold.empty() || pick_hot(rng))
            w.reads.push_back(w.hot_keys[hot_idx(rng)]);
        else
            w.reads.push_back(cold[cold_idx(rng)]);
    }
    return w;
}

std::vector<MemoryRegion> make_regions(const ArenaConfig& config, std::size_t n_write_keys) {
    const auto fast = std::max<std::size_t>(
        1, static_cast<std::size_t>(config.region0_fraction * static_cast<double>(n_write_keys)));
    // Region 1 is sized for the deepest octree splits; slots are only
    // materialised when allocated.
    const std::size_t slow = 22 * n_write_keys + 64;
    return {{0, fast, 0, config.region0_weight}, {1, slow, 1, config.region1_weight}};
}

std::uint64_t layout_fingerprint(const Tree& tree) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    const SlotArena& arena = tree.arena();
    for (std::size_t i = 0; i < arena.size(); ++i) {
        NodeId id = arena.node(static_cast<SlotIndex>(i)).node_id();
        for (int b = 0; b < 8; ++b) {
            h ^= id & 0xff;
            h *= 0x100000001b3ull;
            id >>= 8;
        }
    }
    return h;
}

Tree build_tree(const WorkloadSpec& spec, const Workload& workload, const ArenaConfig& config) {
    Tree tree(spec.tree_kind, make_regions(config, spec.n_write_keys), config.tree_options);
    for (const auto& [k, v] : workload.writes)
        tree.insert(k, v);
    return tree;
}

AccessModel profile_reads(const Tree& tree, std::span<const Key> reads) {
    AccessModel model;
    for (Key k : reads)
        tree.lookup(k, &model);
    return model;
}

void shuffle_layout(Tree& tree, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = tree.size(); i > 1; --i) {
        std::uniform_int_distribution<std::size_t> pick(0, i - 1);
        const std::size_t j = pick(rng);
        if (j != i - 1)
            tree.swap_nodes(static_cast<SlotIndex>(i - 1), static_cast<SlotIndex>(j));
    }
}

void measure_region_cost(const Tree& tree, std::span<const Key> reads, RunMetrics& metrics) {
    const SlotArena& arena = tree.arena();
    const auto regions = arena.regions();
    metrics.region_accesses.assign(regions.size(), 0);
    std::vector<SlotIndex> path;
    for (Key k : reads) {
        tree.lookup(k, nullptr, &path);
        for (SlotIndex s : path)
            ++metrics.region_accesses[arena.region_of(s).benefit_rank];
    }
    metrics.weighted_cost = 0.0;
    for (std::size_t r = 0; r < regions.size(); ++r)
        metrics.weighted_cost += static_cast<double>(metrics.region_accesses[r]) * regions[r].access_cost_weight;
}

std::vector<ResultRow> bench_reorder_algorithms(const WorkloadSpec& spec, std::span<const Algorithm> algorithms,
                                                const ArenaConfig& config) {
    const Workload workload = generate_workload(spec);
    Tree shuffled = build_tree(spec, workload, config);
    const AccessModel model = profile_reads(shuffled, workload.reads);
    shuffle_layout(shuffled, spec.seed ^ 0x9e3779b97f4a7c15ull);
    const std::vector<NodeId> start = shuffled.arena().layout_ids();

    std::vector<ResultRow> rows;
    for (Algorithm algorithm : algorithms) {
        Tree tree = shuffled;
        RunMetrics m;
        const std::uint64_t copies_before = tree.arena().copy_ops();
        const auto t0 = Clock::now();
        reorder_full(tree, model, algorithm);
        m.wall_ns = elapsed_ns(t0);
        m.copy_ops = tree.arena().copy_ops() - copies_before;
        m.reorders = 1;
        m.fingerprint = layout_fingerprint(tree);
        relocation_stats(start, tree.arena().layout_ids(), m);
        measure_region_cost(tree, workload.reads, m);
        rows.push_back(make_row("reorder", spec, to_string(algorithm), "none", "reorder", std::move(m)));
    }
    return rows;
}

OfflineResult bench_offline_potential(const WorkloadSpec& spec, Algorithm strategy, const ArenaConfig& config,
                                      int repetitions) {
    if (repetitions < 1)
        throw std::invalid_argument("repetitions must be at least 1");
    const Workload workload = generate_workload(spec);
    const Tree baseline = build_tree(spec, workload, config);
    const AccessModel model = profile_reads(baseline, workload.reads);

    OfflineResult result;
    Tree reordered = baseline;
    const std::vector<NodeId> start = reordered.arena().layout_ids();
    const std::uint64_t copies_before = reordered.arena().copy_ops();
    const auto t0 = Clock::now();
    reorder_full(reordered, model, strategy);
    result.reorder.wall_ns = elapsed_ns(t0);
    result.reorder.copy_ops = reordered.arena().copy_ops() - copies_before;
    result.reorder.reorders = 1;
    result.reorder.fingerprint = layout_fingerprint(reordered);
    relocation_stats(start, reordered.arena().layout_ids(), result.reorder);

    std::vector<std::int64_t> base_ns, reordered_ns;
    for (int r = 0; r < repetitions; ++r) {
        base_ns.push_back(timed_reads(baseline, workload.reads));
        reordered_ns.push_back(timed_reads(reordered, workload.reads));
    }
    result.baseline.wall_ns = median(base_ns);
    result.reordered.wall_ns = median(reordered_ns);
    result.baseline.fingerprint = layout_fingerprint(baseline);
    result.reordered.fingerprint = result.reorder.fingerprint;
    result.reordered.reorders = 1;
    result.reordered.copy_ops = result.reorder.copy_ops;
    measure_region_cost(baseline, workload.reads, result.baseline);
    measure_region_cost(reordered, workload.reads, result.reordered);

    result.runtime_ratio = result.baseline.wall_ns > 0 ? static_cast<double>(result.reordered.wall_ns) /
                                                             static_cast<double>(result.baseline.wall_ns)
                                                       : 1.0;
    result.cost_ratio =
        result.baseline.weighted_cost > 0 ? result.reordered.weighted_cost / result.baseline.weighted_cost : 1.0;

    const std::string alg = to_string(strategy);
    result.rows.push_back(make_row("offline", spec, alg, "none", "baseline", result.baseline));
    result.rows.push_back(make_row("offline", spec, alg, "none", "reorder", result.reorder));
    result.rows.push_back(make_row("offline", spec, alg, "none", "reordered", result.reordered));
    return result;
}

OnlineResult bench_online(const WorkloadSpec& spec, const PolicyConfig& policy, const ArenaConfig& config) {
    policy.validate();
    const Workload workload = generate_workload(spec);
    OnlineResult result;

    {
        const auto t0 = Clock::now();
        Tree tree(spec.tree_kind, make_regions(config, spec.n_write_keys), config.tree_options);
        for (const auto& [k, v] : workload.writes)
            tree.insert(k, v);
        std::uint64_t acc = 0;
        for (Key k : workload.reads)
            acc += tree.lookup(k).value_or(0);
        result.baseline.wall_ns = elapsed_ns(t0);
        g_sink = g_sink + acc;
        result.baseline.fingerprint = layout_fingerprint(tree);
        result.baseline.copy_ops = tree.arena().copy_ops();
        measure_region_cost(tree, workload.reads, result.baseline);
    }
    {
        const auto t0 = Clock::now();
        Tree tree(spec.tree_kind, make_regions(config, spec.n_write_keys), config.tree_options);
        for (const auto& [k, v] : workload.writes)
            tree.insert(k, v);
        AccessModel model;
        std::vector<SlotIndex> path;
        std::uint64_t acc = 0;
        for (Key k : workload.reads) {
            acc += tree.lookup(k, &model, &path).value_or(0);
            if (auto report = after_tree_op_hook(tree, model, policy, path)) {
                ++result.online.reorders;
                result.reorder_ns += report->duration.count();
            }
        }
        result.online.wall_ns = elapsed_ns(t0);
        g_sink = g_sink + acc;
        result.online.fingerprint = layout_fingerprint(tree);
        result.online.copy_ops = tree.arena().copy_ops();
        measure_region_cost(tree, workload.reads, result.online);
    }
    result.runtime_ratio = result.baseline.wall_ns > 0 ? static_cast<double>(result.online.wall_ns) /
                                                             static_cast<double>(result.baseline.wall_ns)
                                                       : 1.0;
    const std::string alg = policy.kind == PolicyKind::none ? "none" : to_string(policy.strategy);
    result.rows.push_back(make_row("online", spec, "none", "baseline", "baseline", result.baseline));
    result.rows.push_back(make_row("online", spec, alg, to_string(policy.kind), "online", result.online));
    return result;
}

std::vector<ResultRow> bench_online_threshold_sweep(const WorkloadSpec& base, std::span<const TreeKind> trees,
                                                    std::span<const std::size_t> sizes,
                                                    std::span<const std::uint64_t> thresholds,
                                                    const PolicyConfig& policy, const ArenaConfig& config) {
    std::vector<ResultRow> rows;
    for (TreeKind kind : trees) {
        for (std::size_t n : sizes) {
            WorkloadSpec spec = base;
            spec.tree_kind = kind;
            spec.n_write_keys = n;
            bool baseline_emitted = false;
            for (std::uint64_t t : thresholds) {
                PolicyConfig cfg = policy;
                cfg.kind = PolicyKind::access_threshold;
                cfg.access_threshold = t;
                OnlineResult r = bench_online(spec, cfg, config);
                if (!baseline_emitted) {
                    rows.push_back(std::move(r.rows[0]));
                    baseline_emitted = true;
                }
                ResultRow online = std::move(r.rows[1]);
                online.policy = "access-threshold:" + std::to_string(t);
                rows.push_back(std::move(online));
            }
        }
    }
    return rows;
}

std::string format_csv(std::span<const ResultRow> rows) {
    std::string out = kCsvHeader;
    out += '\n';
    char buf[64];
    for (const ResultRow& r : rows) {
        out += r.experiment + ',' + r.tree + ',' + r.algorithm + ',' + r.policy + ',' + std::to_string(r.n_write) +
               ',' + std::to_string(r.n_read) + ',' + std::to_string(r.seed) + ',' + r.phase + ',' +
               std::to_string(r.metrics.wall_ns) + ',' + std::to_string(r.metrics.copy_ops) + ',' +
               std::to_string(r.metrics.reorders) + ',';
        const auto res = std::to_chars(buf, buf + sizeof buf, r.metrics.weighted_cost);
        out.append(buf, res.ptr);
        std::snprintf(buf, sizeof buf, ",%016llx\n", static_cast<unsigned long long>(r.metrics.fingerprint));
        out += buf;
    }
    return out;
}

void emit_csv(std::span<const ResultRow> rows, const std::filesystem::path& path) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    const std::string text = format_csv(rows);
    file.write(text.data(), static_cast<std::streamsize>(text.size()));
    file.close();
    if (!file)
        throw std::runtime_error("failed writing " + path.string());
}

} // namespace treeorder::bench
