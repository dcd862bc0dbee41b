#include "treeorder/access_model.hpp"

#include <algorithm>

namespace treeorder {

void AccessModel::grow(NodeId id) {
    if (id < counts_.size())
        return;
    const std::size_t n = std::max<std::size_t>(id + 1, counts_.size() * 2);
    counts_.resize(n, 0);
    since_reorder_.resize(n, 0);
    snapshots_.resize(n);
    has_snapshot_.resize(n, 0);
}

void AccessModel::record_access(NodeId id) {
    grow(id);
    ++counts_[id];
    ++since_reorder_[id];
    ++total_accesses_;
    ++accesses_since_reorder_;
}

void AccessModel::record_operation() { ++operations_since_reorder_; }

const std::vector<ChildRatio>* AccessModel::snapshot(NodeId id) const {
    if (id >= has_snapshot_.size() || !has_snapshot_[id])
        return nullptr;
    return &snapshots_[id];
}

void AccessModel::store_snapshot(NodeId id, std::span<const ChildRatio> ratios) {
    grow(id);
    snapshots_[id].assign(ratios.begin(), ratios.end());
    has_snapshot_[id] = 1;
}

void AccessModel::reset_node(NodeId id) {
    if (id < since_reorder_.size())
        since_reorder_[id] = 0;
}

void AccessModel::reset_global() {
    accesses_since_reorder_ = 0;
    operations_since_reorder_ = 0;
}

void children_sorted_by_frequency(const AccessModel& model, const Tree& tree, SlotIndex slot,
                                  std::vector<ChildLink>& out) {
    tree.children_of(slot, out);
    const SlotArena& arena = tree.arena();
    std::sort(out.begin(), out.end(), [&](const ChildLink& a, const ChildLink& b) {
        return hotter(model, arena.node(a.slot).node_id(), arena.node(b.slot).node_id());
    });
}

std::vector<ChildLink> children_sorted_by_frequency(const AccessModel& model, const Tree& tree, SlotIndex slot) {
    std::vector<ChildLink> out;
    children_sorted_by_frequency(model, tree, slot, out);
    return out;
}

std::vector<ChildRatio> child_ratios(const AccessModel& model, const Tree& tree, SlotIndex slot) {
    std::vector<ChildRatio> ratios;
    std::uint64_t total = 0;
    for (const ChildLink& c : tree.children_of(slot)) {
        const auto f = model.frequency(tree.arena().node(c.slot).node_id());
        total += f;
        ratios.push_back({c.position, static_cast<double>(f)});
    }
    for (auto& r : ratios)
        r.ratio = total == 0 ? 0.0 : r.ratio / static_cast<double>(total);
    return ratios;
}

void snapshot_after_reorder(AccessModel& model, const Tree& tree, SlotIndex subtree_root) {
    if (tree.empty())
        return;
    std::vector<SlotIndex> stack{subtree_root};
    std::vector<ChildLink> children;
    while (!stack.empty()) {
        const SlotIndex s = stack.back();
        stack.pop_back();
        const NodeId id = tree.arena().node(s).node_id();
        model.store_snapshot(id, child_ratios(model, tree, s));
        model.reset_node(id);
        tree.children_of(s, children);
        for (const ChildLink& c : children)
            stack.push_back(c.slot);
    }
    if (subtree_root == tree.root())
        model.reset_global();
}

} // namespace treeorder
