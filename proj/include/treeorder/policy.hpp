#pragma once

#include "treeorder/access_model.hpp"
#include "treeorder/reorder.hpp"
#include "treeorder/tree.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace treeorder {

enum class PolicyKind { none, access_threshold, ratio_threshold };
enum class ReorderScope { full_tree, subtree };

const char* to_string(PolicyKind kind);
std::optional<PolicyKind> parse_policy_kind(std::string_view name);
const char* to_string(ReorderScope scope);

struct PolicyConfig {
    PolicyKind kind = PolicyKind::none;
    std::uint64_t access_threshold = std::uint64_t{1} << 16; // trigger when operations since reorder > T
    double ratio_delta = 0.3;                                // max |ratio - snapshot| that is tolerated
    std::uint64_t ratio_guard_accesses = 64;                 // node accesses before its ratios are considered
    Algorithm strategy = Algorithm::native_path_reorder;
    ReorderScope scope = ReorderScope::full_tree;

    // Throws std::invalid_argument on out-of-range settings.
    void validate() const;
};

struct Trigger {
    SlotIndex start_node = kNoSlot;

    friend bool operator==(const Trigger&, const Trigger&) = default;
};

std::optional<Trigger> evaluate_access_threshold(const AccessModel& model, const Tree& tree, const PolicyConfig& cfg);

// Checks the nodes of the just-accessed path from the root down. The first
// node q whose per-child ratios drifted more than ratio_delta from its
// snapshot (after more than ratio_guard_accesses accesses) triggers a reorder
// starting at q's parent, or at q itself when q is the root.
std::optional<Trigger> evaluate_ratio_threshold(const AccessModel& model, const Tree& tree, const PolicyConfig& cfg,
                                                std::span<const SlotIndex> accessed_path);

struct ReorderReport {
    bool triggered = false;
    ReorderScope scope = ReorderScope::full_tree;
    SlotIndex start_node = kNoSlot;
    std::uint64_t copy_ops_delta = 0;
    std::chrono::nanoseconds duration{0};
};

// Runs after each completed tree operation. On a trigger, performs the
// configured reorder (escalating subtree requests to a full reorder when the
// structure changed or the strategy is a merge sort), then refreshes the
// model's snapshots.
std::optional<ReorderReport> after_tree_op_hook(Tree& tree, AccessModel& model, const PolicyConfig& cfg,
                                                std::span<const SlotIndex> accessed_path);

} // namespace treeorder
