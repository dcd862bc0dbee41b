// B+-tree with entries only in leaves. Leaves hold up to F-1 entries; internal
// nodes hold up to F-1 separators and F children. Child i of an internal node
// covers keys in [sep[i-1], sep[i]). No sibling links.
#include "treeorder/tree.hpp"

#include <algorithm>
#include <vector>

namespace treeorder {

void Tree::insert_bptree(Key key, Value value) {
    if (root_ == kNoSlot) {
        root_ = new_node(NodeKind::bptree_leaf, 0);
    }
    SlotIndex cur = root_;
    for (;;) {
        const ConstNodeRef n = arena_.node(cur);
        if (n.kind() == NodeKind::bptree_leaf)
            break;
        std::uint32_t i = 0;
        while (i < n.entry_count() && n.key(i) <= key)
            ++i;
        cur = n.child(i);
    }

    NodeRef leaf = arena_.node(cur);
    const std::uint32_t count = leaf.entry_count();
    std::uint32_t pos = 0;
    while (pos < count && leaf.key(pos) < key)
        ++pos;
    if (pos < count && leaf.key(pos) == key) {
        leaf.set_value(pos, value);
        return;
    }
    if (count < leaf.max_entries()) {
        for (std::uint32_t i = count; i > pos; --i) {
            leaf.set_key(i, leaf.key(i - 1));
            leaf.set_value(i, leaf.value(i - 1));
        }
        leaf.set_key(pos, key);
        leaf.set_value(pos, value);
        leaf.set_entry_count(count + 1);
        return;
    }

    std::vector<Key> keys;
    std::vector<Value> values;
    keys.reserve(count + 1);
    values.reserve(count + 1);
    for (std::uint32_t i = 0; i < count; ++i) {
        if (i == pos) {
            keys.push_back(key);
            values.push_back(value);
        }
        keys.push_back(leaf.key(i));
        values.push_back(leaf.value(i));
    }
    if (pos == count) {
        keys.push_back(key);
        values.push_back(value);
    }

    const auto total = static_cast<std::uint32_t>(keys.size());
    const std::uint32_t left_count = total / 2;
    const SlotIndex right = new_node(NodeKind::bptree_leaf, 0);
    NodeRef l = arena_.node(cur);
    NodeRef r = arena_.node(right);
    for (std::uint32_t i = 0; i < left_count; ++i) {
        l.set_key(i, keys[i]);
        l.set_value(i, values[i]);
    }
    l.set_entry_count(left_count);
    for (std::uint32_t i = left_count; i < total; ++i) {
        r.set_key(i - left_count, keys[i]);
        r.set_value(i - left_count, values[i]);
    }
    r.set_entry_count(total - left_count);
    insert_into_parent(cur, keys[left_count], right);
}

// `right` is a new node holding everything >= separator, to be linked just
// after `left` in left's parent.
void Tree::insert_into_parent(SlotIndex left, Key separator, SlotIndex right) {
    const SlotIndex parent = arena_.node(left).parent();
    if (parent == kNoSlot) {
        const SlotIndex top = new_node(NodeKind::bptree_internal, 0);
        NodeRef t = arena_.node(top);
        t.set_entry_count(1);
        t.set_key(0, separator);
        t.set_child(0, left);
        t.set_child(1, right);
        arena_.node(left).set_parent(top);
        arena_.node(right).set_parent(top);
        root_ = top;
        return;
    }

    NodeRef p = arena_.node(parent);
    const std::uint32_t m = p.entry_count();
    std::uint32_t idx = 0; // child index of `left`
    while (p.child(idx) != left)
        ++idx;

    if (m < p.max_entries()) {
        for (std::uint32_t i = m; i > idx; --i)
            p.set_key(i, p.key(i - 1));
        for (std::uint32_t i = m + 1; i > idx + 1; --i)
            p.set_child(i, p.child(i - 1));
        p.set_key(idx, separator);
        p.set_child(idx + 1, right);
        p.set_entry_count(m + 1);
        arena_.node(right).set_parent(parent);
        return;
    }

    std::vector<Key> seps;
    std::vector<SlotIndex> kids;
    for (std::uint32_t i = 0; i < m; ++i)
        seps.push_back(p.key(i));
    for (std::uint32_t i = 0; i <= m; ++i)
        kids.push_back(p.child(i));
    seps.insert(seps.begin() + idx, separator);
    kids.insert(kids.begin() + idx + 1, right);

    // kids.size() == F + 1: left keeps ceil((F+1)/2) children.
    const auto total_kids = static_cast<std::uint32_t>(kids.size());
    const std::uint32_t left_kids = (total_kids + 1) / 2;
    const Key up = seps[left_kids - 1];

    const SlotIndex sibling = new_node(NodeKind::bptree_internal, 0);
    NodeRef lp = arena_.node(parent);
    NodeRef rp = arena_.node(sibling);
    for (std::uint32_t i = 0; i < lp.max_children(); ++i)
        lp.set_child(i, kNoSlot);
    for (std::uint32_t i = 0; i < left_kids; ++i) {
        lp.set_child(i, kids[i]);
        arena_.node(kids[i]).set_parent(parent);
    }
    for (std::uint32_t i = 0; i + 1 < left_kids; ++i)
        lp.set_key(i, seps[i]);
    lp.set_entry_count(left_kids - 1);

    for (std::uint32_t i = left_kids; i < total_kids; ++i) {
        rp.set_child(i - left_kids, kids[i]);
        arena_.node(kids[i]).set_parent(sibling);
    }
    for (std::uint32_t i = left_kids; i < total_kids - 1; ++i)
        rp.set_key(i - left_kids, seps[i]);
    rp.set_entry_count(total_kids - left_kids - 1);

    insert_into_parent(parent, up, sibling);
}

} // namespace treeorder
