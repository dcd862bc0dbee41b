// Unbalanced BST and AVL insertion. Child 0 is left, child 1 is right; the AVL
// height lives in the header's aux field (leaf = 1).
#include "treeorder/tree.hpp"

#include <algorithm>

namespace treeorder {

void Tree::insert_binary(Key key, Value value) {
    const NodeKind node_kind = kind_ == TreeKind::avl ? NodeKind::avl : NodeKind::bst;
    if (root_ == kNoSlot) {
        root_ = new_node(node_kind, 1);
        NodeRef n = arena_.node(root_);
        n.set_entry_count(1);
        n.set_key(0, key);
        n.set_value(0, value);
        return;
    }
    SlotIndex cur = root_;
    std::uint32_t dir = 0;
    for (;;) {
        NodeRef n = arena_.node(cur);
        if (n.key(0) == key) {
            n.set_value(0, value);
            return;
        }
        dir = key < n.key(0) ? 0 : 1;
        if (n.child(dir) == kNoSlot)
            break;
        cur = n.child(dir);
    }
    const SlotIndex leaf = new_node(node_kind, 1);
    {
        NodeRef n = arena_.node(leaf);
        n.set_entry_count(1);
        n.set_key(0, key);
        n.set_value(0, value);
        n.set_parent(cur);
    }
    arena_.node(cur).set_child(dir, leaf);
    if (kind_ == TreeKind::avl)
        rebalance_from(cur);
}

std::uint32_t Tree::height_of(SlotIndex slot) const { return slot == kNoSlot ? 0 : arena_.node(slot).aux(); }

void Tree::update_height(SlotIndex slot) {
    NodeRef n = arena_.node(slot);
    n.set_aux(1 + std::max(height_of(n.child(0)), height_of(n.child(1))));
}

// Rotates the subtree at `top` so its child on side 1-dir becomes the new top
// (dir = 0: left rotation). Nodes keep their slots; only links change.
SlotIndex Tree::rotate(SlotIndex top, std::uint32_t dir) {
    const std::uint32_t other = 1 - dir;
    const SlotIndex pivot = arena_.node(top).child(other);
    const SlotIndex inner = arena_.node(pivot).child(dir);
    const SlotIndex parent = arena_.node(top).parent();

    arena_.node(top).set_child(other, inner);
    if (inner != kNoSlot)
        arena_.node(inner).set_parent(top);

    arena_.node(pivot).set_parent(parent);
    replace_child(parent, top, pivot);

    arena_.node(pivot).set_child(dir, top);
    arena_.node(top).set_parent(pivot);

    update_height(top);
    update_height(pivot);
    structure_changed_ = true;
    return pivot;
}

void Tree::rebalance_from(SlotIndex slot) {
    SlotIndex cur = slot;
    while (cur != kNoSlot) {
        update_height(cur);
        const ConstNodeRef n = arena_.node(cur);
        const int balance = static_cast<int>(height_of(n.child(0))) - static_cast<int>(height_of(n.child(1)));
        if (balance > 1) {
            const SlotIndex left = n.child(0);
            const ConstNodeRef l = arena_.node(left);
            if (height_of(l.child(0)) < height_of(l.child(1)))
                rotate(left, 0);
            cur = rotate(cur, 1);
        } else if (balance < -1) {
            const SlotIndex right = n.child(1);
            const ConstNodeRef r = arena_.node(right);
            if (height_of(r.child(1)) < height_of(r.child(0)))
                rotate(right, 1);
            cur = rotate(cur, 0);
        }
        cur = arena_.node(cur).parent();
    }
}

} // namespace treeorder
