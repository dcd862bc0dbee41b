#include "treeorder/arena.hpp"

#include <algorithm>
#include <cstring>
#include <numeric>

namespace treeorder {

const char* to_string(NodeKind kind) {
    switch (kind) {
    case NodeKind::bst: return "bst";
    case NodeKind::avl: return "avl";
    case NodeKind::octree_internal: return "octree-internal";
    case NodeKind::octree_leaf: return "octree-leaf";
    case NodeKind::bptree_internal: return "bptree-internal";
    case NodeKind::bptree_leaf: return "bptree-leaf";
    }
    return "unknown";
}

SlotArena::SlotArena(std::vector<MemoryRegion> regions, SlotLayout layout)
    : regions_(std::move(regions)), layout_(layout) {
    if (regions_.empty())
        throw std::invalid_argument("arena needs at least one memory region");
    std::sort(regions_.begin(), regions_.end(),
              [](const MemoryRegion& a, const MemoryRegion& b) { return a.benefit_rank < b.benefit_rank; });
    for (std::size_t r = 0; r < regions_.size(); ++r) {
        const auto& region = regions_[r];
        if (region.capacity_slots < 1)
            throw std::invalid_argument("region " + std::to_string(region.region_id) + " has zero capacity");
        if (region.benefit_rank != r)
            throw std::invalid_argument("benefit ranks must be distinct and form 0..R-1");
        if (!(region.access_cost_weight >= 0.0))
            throw std::invalid_argument("region access cost weight must be nonnegative");
        for (std::size_t q = 0; q < r; ++q)
            if (regions_[q].region_id == region.region_id)
                throw std::invalid_argument("duplicate region id " + std::to_string(region.region_id));
        region_start_.push_back(capacity_);
        capacity_ += region.capacity_slots;
    }
    if (capacity_ >= kNoSlot)
        throw std::invalid_argument("arena capacity exceeds slot index range");
    temp_.assign(layout_.words(), 0);
}

SlotIndex SlotArena::allocate_slot() {
    if (next_free_ == capacity_)
        throw ArenaFull("arena full: all " + std::to_string(capacity_) + " slots in use");
    words_.resize(words_.size() + layout_.words(), 0);
    return static_cast<SlotIndex>(next_free_++);
}

PhysicalLocation SlotArena::resolve(SlotIndex index) const {
    if (index >= capacity_)
        throw std::out_of_range("slot " + std::to_string(index) + " outside arena of " + std::to_string(capacity_));
    auto it = std::upper_bound(region_start_.begin(), region_start_.end(), std::size_t{index});
    auto r = static_cast<std::size_t>(it - region_start_.begin()) - 1;
    return {regions_[r].region_id, index - region_start_[r]};
}

SlotIndex SlotArena::resolve_physical(std::uint32_t region_id, std::size_t offset) const {
    for (std::size_t r = 0; r < regions_.size(); ++r) {
        if (regions_[r].region_id != region_id)
            continue;
        if (offset >= regions_[r].capacity_slots)
            throw std::out_of_range("offset " + std::to_string(offset) + " outside region " +
                                    std::to_string(region_id));
        return static_cast<SlotIndex>(region_start_[r] + offset);
    }
    throw std::out_of_range("unknown region " + std::to_string(region_id));
}

const MemoryRegion& SlotArena::region_of(SlotIndex index) const {
    if (index >= capacity_)
        throw std::out_of_range("slot " + std::to_string(index) + " outside arena");
    auto it = std::upper_bound(region_start_.begin(), region_start_.end(), std::size_t{index});
    return regions_[static_cast<std::size_t>(it - region_start_.begin()) - 1];
}

void SlotArena::check_index(SlotIndex index, const char* what) const {
    if (index != temp_slot() && index >= next_free_)
        throw ArenaError(std::string(what) + " slot " + std::to_string(index) + " is not live");
}

void SlotArena::copy_node(SlotIndex src, SlotIndex dst, SlotIndex& root) {
    check_index(src, "source");
    check_index(dst, "destination");
    if (src == dst)
        throw ArenaError("copy_node with src == dst (" + std::to_string(src) + ")");

    std::memcpy(slot_words(dst), slot_words(src), layout_.bytes());
    ++copy_ops_;

    NodeRef moved = node(dst);
    SlotIndex parent = moved.parent();
    if (parent == kNoSlot) {
        root = dst;
    } else {
        NodeRef p = node(parent);
        std::uint32_t pos = 0;
        while (pos < layout_.max_children && p.child(pos) != src)
            ++pos;
        if (pos == layout_.max_children)
            throw ArenaError("parent slot " + std::to_string(parent) + " has no link to slot " +
                             std::to_string(src));
        p.set_child(pos, dst);
    }
    for (std::uint32_t pos = 0; pos < layout_.max_children; ++pos) {
        SlotIndex c = moved.child(pos);
        if (c != kNoSlot)
            node(c).set_parent(dst);
    }
}

void SlotArena::swap_nodes(SlotIndex a, SlotIndex b, SlotIndex& root) {
    if (a == b)
        throw ArenaError("swap_nodes with a == b (" + std::to_string(a) + ")");
    if (a == temp_slot() || b == temp_slot())
        throw ArenaError("swap_nodes may not involve the temp slot");
    // Each copy repairs links immediately, so a parent/child pair resolves to
    // the post-swap locations without a separate fixup pass.
    const SlotIndex temp = temp_slot();
    copy_node(a, temp, root);
    copy_node(b, a, root);
    copy_node(temp, b, root);
}

double SlotArena::weighted_access_cost(std::span<const SlotIndex> trace) const {
    double cost = 0.0;
    for (SlotIndex s : trace)
        cost += region_of(s).access_cost_weight;
    return cost;
}

std::vector<NodeId> SlotArena::layout_ids() const {
    std::vector<NodeId> ids(next_free_);
    for (std::size_t i = 0; i < next_free_; ++i)
        ids[i] = node(static_cast<SlotIndex>(i)).node_id();
    return ids;
}

std::uint64_t* SlotArena::slot_words(SlotIndex index) {
    if (index == temp_slot())
        return temp_.data();
    return words_.data() + std::size_t{index} * layout_.words();
}

const std::uint64_t* SlotArena::slot_words(SlotIndex index) const {
    if (index == temp_slot())
        return temp_.data();
    return words_.data() + std::size_t{index} * layout_.words();
}

} // namespace treeorder
