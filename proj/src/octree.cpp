// Point-region octree over 63-bit Morton keys. Internal nodes carry no entries
// and index children by octant; leaves hold up to octree_leaf_capacity entries
// and split in place when they overflow. aux = depth (root = 0).
#include "treeorder/tree.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace treeorder {

void Tree::insert_octree(SlotIndex start, Key key, Value value) {
    SlotIndex cur = start;
    for (;;) {
        NodeRef n = arena_.node(cur);
        if (n.kind() == NodeKind::octree_leaf)
            break;
        const std::uint32_t depth = n.aux();
        const std::uint32_t oct = octant_at_depth(key, depth);
        const SlotIndex c = n.child(oct);
        if (c == kNoSlot) {
            const SlotIndex leaf = new_node(NodeKind::octree_leaf, depth + 1);
            NodeRef l = arena_.node(leaf);
            l.set_entry_count(1);
            l.set_key(0, key);
            l.set_value(0, value);
            l.set_parent(cur);
            arena_.node(cur).set_child(oct, leaf);
            return;
        }
        cur = c;
    }

    NodeRef leaf = arena_.node(cur);
    const std::uint32_t count = leaf.entry_count();
    for (std::uint32_t i = 0; i < count; ++i) {
        if (leaf.key(i) == key) {
            leaf.set_value(i, value);
            return;
        }
    }
    if (count < leaf.max_entries()) {
        leaf.set_key(count, key);
        leaf.set_value(count, value);
        leaf.set_entry_count(count + 1);
        return;
    }

    // Overflow: distinct Morton keys always separate before the maximum depth.
    if (leaf.aux() >= kOctreeMaxDepth)
        throw std::logic_error("octree leaf overflow at maximum depth");
    std::vector<std::pair<Key, Value>> entries;
    entries.reserve(count + 1);
    for (std::uint32_t i = 0; i < count; ++i)
        entries.emplace_back(leaf.key(i), leaf.value(i));
    entries.emplace_back(key, value);
    leaf.set_header(NodeKind::octree_internal, 0, leaf.aux());
    structure_changed_ = true;
    for (const auto& [k, v] : entries)
        insert_octree(cur, k, v);
}

} // namespace treeorder
