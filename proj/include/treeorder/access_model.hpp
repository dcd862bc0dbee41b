#pragma once

#include "treeorder/arena.hpp"
#include "treeorder/tree.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace treeorder {

struct ChildRatio {
    std::uint32_t position = 0;
    double ratio = 0.0;

    friend bool operator==(const ChildRatio&, const ChildRatio&) = default;
};

// Access frequency model. Counters live in side tables keyed by node id, so
// they follow a node through any number of moves.
class AccessModel {
public:
    void record_access(NodeId id);
    // One completed tree operation (a lookup). Drives the Access Threshold.
    void record_operation();

    std::uint64_t frequency(NodeId id) const { return id < counts_.size() ? counts_[id] : 0; }
    std::uint64_t total_accesses() const { return total_accesses_; }
    std::uint64_t accesses_since_reorder() const { return accesses_since_reorder_; }
    std::uint64_t operations_since_reorder() const { return operations_since_reorder_; }
    std::uint64_t node_accesses_since_reorder(NodeId id) const {
        return id < since_reorder_.size() ? since_reorder_[id] : 0;
    }

    // Ratios stored at the last reorder touching this node, or nullptr.
    const std::vector<ChildRatio>* snapshot(NodeId id) const;
    void store_snapshot(NodeId id, std::span<const ChildRatio> ratios);

    void reset_node(NodeId id);
    void reset_global();

private:
    void grow(NodeId id);

    std::vector<std::uint64_t> counts_;
    std::vector<std::uint64_t> since_reorder_;
    std::vector<std::vector<ChildRatio>> snapshots_;
    std::vector<std::uint8_t> has_snapshot_;
    std::uint64_t total_accesses_ = 0;
    std::uint64_t accesses_since_reorder_ = 0;
    std::uint64_t operations_since_reorder_ = 0;
};

// Strict total order used by every reorder strategy: higher frequency first,
// ties broken by lower node id.
inline bool hotter(const AccessModel& model, NodeId a, NodeId b) {
    const auto fa = model.frequency(a);
    const auto fb = model.frequency(b);
    return fa != fb ? fa > fb : a < b;
}

std::vector<ChildLink> children_sorted_by_frequency(const AccessModel& model, const Tree& tree, SlotIndex slot);
void children_sorted_by_frequency(const AccessModel& model, const Tree& tree, SlotIndex slot,
                                  std::vector<ChildLink>& out);

// ratio_j = freq(child_j) / sum of child freqs; all zero when nothing was counted.
std::vector<ChildRatio> child_ratios(const AccessModel& model, const Tree& tree, SlotIndex slot);

// Refreshes ratio snapshots and clears since-reorder counters for every node
// of the subtree at `subtree_root`. The global counters reset only when the
// subtree is the whole tree.
void snapshot_after_reorder(AccessModel& model, const Tree& tree, SlotIndex subtree_root);

} // namespace treeorder
