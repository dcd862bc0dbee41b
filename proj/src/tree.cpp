#include "treeorder/tree.hpp"

#include "treeorder/access_model.hpp"

#include <algorithm>
#include <stdexcept>

namespace treeorder {

const char* to_string(TreeKind kind) {
    switch (kind) {
    case TreeKind::bst: return "bst";
    case TreeKind::avl: return "avl";
    case TreeKind::octree: return "octree";
    case TreeKind::bptree: return "bptree";
    }
    return "unknown";
}

std::optional<TreeKind> parse_tree_kind(std::string_view name) {
    if (name == "bst") return TreeKind::bst;
    if (name == "avl") return TreeKind::avl;
    if (name == "octree") return TreeKind::octree;
    if (name == "bptree") return TreeKind::bptree;
    return std::nullopt;
}

SlotLayout slot_layout_for(TreeKind kind, const TreeOptions& options) {
    switch (kind) {
    case TreeKind::bst:
    case TreeKind::avl: return {2, 1};
    case TreeKind::octree:
        if (options.octree_leaf_capacity < 1)
            throw std::invalid_argument("octree leaf capacity must be at least 1");
        return {8, options.octree_leaf_capacity};
    case TreeKind::bptree:
        if (options.bptree_fanout < 3)
            throw std::invalid_argument("B+-tree fanout must be at least 3");
        return {options.bptree_fanout, options.bptree_fanout - 1};
    }
    throw std::invalid_argument("unknown tree kind");
}

Key morton_encode(std::uint32_t x, std::uint32_t y, std::uint32_t z) {
    Key code = 0;
    for (unsigned bit = 0; bit < kOctreeMaxDepth; ++bit) {
        code |= Key{(x >> bit) & 1u} << (3 * bit);
        code |= Key{(y >> bit) & 1u} << (3 * bit + 1);
        code |= Key{(z >> bit) & 1u} << (3 * bit + 2);
    }
    return code;
}

std::uint32_t octant_at_depth(Key morton, unsigned depth) {
    return static_cast<std::uint32_t>((morton >> (3 * (kOctreeMaxDepth - 1 - depth))) & 7u);
}

Tree::Tree(TreeKind kind, std::vector<MemoryRegion> regions, TreeOptions options)
    : kind_(kind), options_(options), arena_(std::move(regions), slot_layout_for(kind, options)) {}

SlotIndex Tree::new_node(NodeKind kind, std::uint32_t aux) {
    const SlotIndex s = arena_.allocate_slot();
    NodeRef n = arena_.node(s);
    n.set_header(kind, 0, aux);
    n.set_parent(kNoSlot);
    n.set_node_id(next_node_id_++);
    for (std::uint32_t c = 0; c < n.max_children(); ++c)
        n.set_child(c, kNoSlot);
    structure_changed_ = true;
    return s;
}

void Tree::insert(Key key, Value value) {
    switch (kind_) {
    case TreeKind::bst:
    case TreeKind::avl: insert_binary(key, value); break;
    case TreeKind::octree:
        if (key >> 63)
            throw std::invalid_argument("octree keys are 63-bit Morton codes; top bit must be clear");
        if (root_ == kNoSlot) {
            root_ = new_node(NodeKind::octree_leaf, 0);
        }
        insert_octree(root_, key, value);
        break;
    case TreeKind::bptree: insert_bptree(key, value); break;
    }
}

std::optional<Value> Tree::lookup(Key key, AccessModel* model, std::vector<SlotIndex>* path) const {
    if (model)
        model->record_operation();
    if (path)
        path->clear();
    SlotIndex cur = root_;
    while (cur != kNoSlot) {
        const ConstNodeRef n = arena_.node(cur);
        if (model)
            model->record_access(n.node_id());
        if (path)
            path->push_back(cur);
        switch (n.kind()) {
        case NodeKind::bst:
        case NodeKind::avl: {
            const Key k = n.key(0);
            if (k == key)
                return n.value(0);
            cur = n.child(key < k ? 0 : 1);
            break;
        }
        case NodeKind::octree_internal: cur = n.child(octant_at_depth(key, n.aux())); break;
        case NodeKind::octree_leaf: {
            for (std::uint32_t i = 0; i < n.entry_count(); ++i)
                if (n.key(i) == key)
                    return n.value(i);
            return std::nullopt;
        }
        case NodeKind::bptree_internal: {
            std::uint32_t i = 0;
            const std::uint32_t m = n.entry_count();
            while (i < m && n.key(i) <= key)
                ++i;
            cur = n.child(i);
            break;
        }
        case NodeKind::bptree_leaf: {
            const std::uint32_t m = n.entry_count();
            for (std::uint32_t i = 0; i < m; ++i) {
                const Key k = n.key(i);
                if (k == key)
                    return n.value(i);
                if (k > key)
                    break;
            }
            return std::nullopt;
        }
        }
    }
    return std::nullopt;
}

void Tree::children_of(SlotIndex slot, std::vector<ChildLink>& out) const {
    if (slot >= arena_.size())
        throw std::out_of_range("children_of: slot " + std::to_string(slot) + " is not live");
    out.clear();
    const ConstNodeRef n = arena_.node(slot);
    for (std::uint32_t pos = 0; pos < n.max_children(); ++pos) {
        const SlotIndex c = n.child(pos);
        if (c != kNoSlot)
            out.push_back({c, pos});
    }
}

std::vector<ChildLink> Tree::children_of(SlotIndex slot) const {
    std::vector<ChildLink> out;
    children_of(slot, out);
    return out;
}

void Tree::replace_child(SlotIndex parent, SlotIndex from, SlotIndex to) {
    if (parent == kNoSlot) {
        root_ = to;
        return;
    }
    NodeRef p = arena_.node(parent);
    for (std::uint32_t pos = 0; pos < p.max_children(); ++pos) {
        if (p.child(pos) == from) {
            p.set_child(pos, to);
            return;
        }
    }
    throw std::logic_error("replace_child: link not found");
}

} // namespace treeorder
