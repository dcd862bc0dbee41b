#include "treeorder/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace treeorder {

const char* to_string(PolicyKind kind) {
    switch (kind) {
    case PolicyKind::none: return "none";
    case PolicyKind::access_threshold: return "access-threshold";
    case PolicyKind::ratio_threshold: return "ratio-threshold";
    }
    return "unknown";
}

std::optional<PolicyKind> parse_policy_kind(std::string_view name) {
    for (PolicyKind k : {PolicyKind::none, PolicyKind::access_threshold, PolicyKind::ratio_threshold})
        if (name == to_string(k))
            return k;
    return std::nullopt;
}

const char* to_string(ReorderScope scope) { return scope == ReorderScope::full_tree ? "full-tree" : "subtree"; }

void PolicyConfig::validate() const {
    if (!(ratio_delta > 0.0 && ratio_delta <= 1.0))
        throw std::invalid_argument("ratio delta must lie in (0, 1]");
    if (kind == PolicyKind::ratio_threshold && ratio_guard_accesses > access_threshold)
        throw std::invalid_argument("ratio guard must not exceed the access threshold");
}

std::optional<Trigger> evaluate_access_threshold(const AccessModel& model, const Tree& tree, const PolicyConfig& cfg) {
    if (tree.empty() || model.operations_since_reorder() <= cfg.access_threshold)
        return std::nullopt;
    return Trigger{tree.root()};
}

namespace {

double max_ratio_drift(std::span<const ChildRatio> current, const std::vector<ChildRatio>* snapshot) {
    auto snapshot_ratio = [&](std::uint32_t position) {
        if (!snapshot)
            return 0.0;
        for (const ChildRatio& r : *snapshot)
            if (r.position == position)
                return r.ratio;
        return 0.0;
    };
    double drift = 0.0;
    for (const ChildRatio& r : current)
        drift = std::max(drift, std::abs(r.ratio - snapshot_ratio(r.position)));
    if (snapshot) {
        for (const ChildRatio& old : *snapshot) {
            const bool present =
                std::any_of(current.begin(), current.end(), [&](const ChildRatio& r) { return r.position == old.position; });
            if (!present)
                drift = std::max(drift, old.ratio);
        }
    }
    return drift;
}

} // namespace

std::optional<Trigger> evaluate_ratio_threshold(const AccessModel& model, const Tree& tree, const PolicyConfig& cfg,
                                                std::span<const SlotIndex> accessed_path) {
    for (SlotIndex s : accessed_path) {
        const ConstNodeRef node = tree.arena().node(s);
        const NodeId id = node.node_id();
        if (model.node_accesses_since_reorder(id) <= cfg.ratio_guard_accesses)
            continue;
        const auto ratios = child_ratios(model, tree, s);
        if (ratios.empty())
            continue;
        if (max_ratio_drift(ratios, model.snapshot(id)) > cfg.ratio_delta) {
            const SlotIndex parent = node.parent();
            return Trigger{parent == kNoSlot ? s : parent};
        }
    }
    return std::nullopt;
}

std::optional<ReorderReport> after_tree_op_hook(Tree& tree, AccessModel& model, const PolicyConfig& cfg,
                                                std::span<const SlotIndex> accessed_path) {
    std::optional<Trigger> trigger;
    switch (cfg.kind) {
    case PolicyKind::none: return std::nullopt;
    case PolicyKind::access_threshold: trigger = evaluate_access_threshold(model, tree, cfg); break;
    case PolicyKind::ratio_threshold: trigger = evaluate_ratio_threshold(model, tree, cfg, accessed_path); break;
    }
    if (!trigger)
        return std::nullopt;

    const auto started = std::chrono::steady_clock::now();
    const std::uint64_t copies_before = tree.arena().copy_ops();

    ReorderReport report;
    report.triggered = true;
    report.scope = ReorderScope::full_tree;

    const bool subtree = is_path_reorder(cfg.strategy) && cfg.scope == ReorderScope::subtree &&
                         trigger->start_node != tree.root();
    PathReorderStatus status = PathReorderStatus::needs_full_reorder;
    if (subtree) {
        const SlotIndex start = trigger->start_node;
        status = cfg.strategy == Algorithm::native_path_reorder ? native_path_reorder(tree, model, start, start)
                                                                 : map_path_reorder(tree, model, start, start);
        if (status == PathReorderStatus::done) {
            // The start node is placed first at its own index, so it has not moved.
            report.scope = ReorderScope::subtree;
            report.start_node = start;
        }
    }
    if (status != PathReorderStatus::done) {
        reorder_full(tree, model, cfg.strategy);
        report.start_node = tree.root();
    }
    snapshot_after_reorder(model, tree, report.start_node);

    report.copy_ops_delta = tree.arena().copy_ops() - copies_before;
    report.duration = std::chrono::steady_clock::now() - started;
    return report;
}

} // namespace treeorder
