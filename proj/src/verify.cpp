#include "treeorder/tree.hpp"

#include <limits>
#include <vector>

namespace treeorder {
namespace {

std::optional<StructureViolation> violation(SlotIndex slot, std::string message) {
    return StructureViolation{slot, std::move(message)};
}

} // namespace

std::optional<StructureViolation> Tree::verify_structure() const {
    if (auto v = verify_links())
        return v;
    if (root_ == kNoSlot)
        return std::nullopt;
    switch (kind_) {
    case TreeKind::bst:
    case TreeKind::avl: return verify_binary();
    case TreeKind::octree: return verify_octree();
    case TreeKind::bptree: return verify_bptree();
    }
    return std::nullopt;
}

// Every live slot reachable exactly once from the root, child and parent links
// agree, and the root has no parent.
std::optional<StructureViolation> Tree::verify_links() const {
    const std::size_t n = arena_.size();
    if (root_ == kNoSlot) {
        if (n != 0)
            return violation(kNoSlot, "empty root but " + std::to_string(n) + " live slots");
        return std::nullopt;
    }
    if (root_ >= n)
        return violation(root_, "root outside live slots");
    if (arena_.node(root_).parent() != kNoSlot)
        return violation(root_, "root has a parent link");

    std::vector<std::uint8_t> seen(n, 0);
    std::vector<SlotIndex> stack{root_};
    std::size_t reached = 0;
    while (!stack.empty()) {
        const SlotIndex s = stack.back();
        stack.pop_back();
        if (seen[s])
            return violation(s, "slot reachable twice");
        seen[s] = 1;
        ++reached;
        const ConstNodeRef node = arena_.node(s);
        for (std::uint32_t pos = 0; pos < node.max_children(); ++pos) {
            const SlotIndex c = node.child(pos);
            if (c == kNoSlot)
                continue;
            if (c >= n)
                return violation(s, "child link " + std::to_string(pos) + " outside live slots");
            if (arena_.node(c).parent() != s)
                return violation(c, "parent link " + std::to_string(arena_.node(c).parent()) + " but linked from " +
                                        std::to_string(s));
            stack.push_back(c);
        }
    }
    if (reached != n)
        return violation(kNoSlot, std::to_string(n - reached) + " live slots unreachable from root");
    return std::nullopt;
}

std::optional<StructureViolation> Tree::verify_binary() const {
    const NodeKind expected = kind_ == TreeKind::avl ? NodeKind::avl : NodeKind::bst;
    struct Frame {
        SlotIndex slot;
        Key lo;      // exclusive unless has_lo is false
        Key hi;
        bool has_lo, has_hi;
    };
    std::vector<Frame> stack{{root_, 0, 0, false, false}};
    // AVL heights are checked against the children's stored heights, which
    // are in turn checked when the children are popped.
    while (!stack.empty()) {
        const Frame f = stack.back();
        stack.pop_back();
        const ConstNodeRef n = arena_.node(f.slot);
        if (n.kind() != expected)
            return violation(f.slot, std::string("node kind ") + to_string(n.kind()));
        if (n.entry_count() != 1)
            return violation(f.slot, "binary node must hold exactly one entry");
        const Key k = n.key(0);
        if ((f.has_lo && k <= f.lo) || (f.has_hi && k >= f.hi))
            return violation(f.slot, "key " + std::to_string(k) + " violates search order");
        if (kind_ == TreeKind::avl) {
            const auto hl = height_of(n.child(0));
            const auto hr = height_of(n.child(1));
            if (n.aux() != 1 + std::max(hl, hr))
                return violation(f.slot, "stale AVL height");
            if (hl > hr + 1 || hr > hl + 1)
                return violation(f.slot, "AVL balance factor out of range");
        }
        if (n.child(0) != kNoSlot)
            stack.push_back({n.child(0), f.lo, k, f.has_lo, true});
        if (n.child(1) != kNoSlot)
            stack.push_back({n.child(1), k, f.hi, true, f.has_hi});
    }
    return std::nullopt;
}

std::optional<StructureViolation> Tree::verify_octree() const {
    struct Frame {
        SlotIndex slot;
        std::uint32_t depth;
        Key prefix; // Morton bits fixed by the path, aligned to full width
    };
    std::vector<Frame> stack{{root_, 0, 0}};
    while (!stack.empty()) {
        const Frame f = stack.back();
        stack.pop_back();
        const ConstNodeRef n = arena_.node(f.slot);
        if (n.aux() != f.depth)
            return violation(f.slot, "stored depth " + std::to_string(n.aux()) + " != " + std::to_string(f.depth));
        const unsigned fixed_bits = 3 * f.depth;
        const Key mask = fixed_bits == 0 ? 0 : (~Key{0} << (63 - fixed_bits)) & ((Key{1} << 63) - 1);
        if (n.kind() == NodeKind::octree_leaf) {
            if (n.entry_count() > n.max_entries())
                return violation(f.slot, "leaf over capacity");
            for (std::uint32_t i = 0; i < n.entry_count(); ++i) {
                const Key k = n.key(i);
                if ((k >> 63) != 0 || (k & mask) != f.prefix)
                    return violation(f.slot, "key " + std::to_string(k) + " outside octree cell");
                for (std::uint32_t j = 0; j < i; ++j)
                    if (n.key(j) == k)
                        return violation(f.slot, "duplicate key in leaf");
            }
            for (std::uint32_t pos = 0; pos < n.max_children(); ++pos)
                if (n.child(pos) != kNoSlot)
                    return violation(f.slot, "octree leaf has a child");
        } else if (n.kind() == NodeKind::octree_internal) {
            if (n.entry_count() != 0)
                return violation(f.slot, "octree internal node holds entries");
            if (f.depth >= kOctreeMaxDepth)
                return violation(f.slot, "internal node at maximum depth");
            const unsigned shift = 3 * (kOctreeMaxDepth - 1 - f.depth);
            for (std::uint32_t pos = 0; pos < 8; ++pos) {
                const SlotIndex c = n.child(pos);
                if (c != kNoSlot)
                    stack.push_back({c, f.depth + 1, f.prefix | (Key{pos} << shift)});
            }
        } else {
            return violation(f.slot, std::string("node kind ") + to_string(n.kind()));
        }
    }
    return std::nullopt;
}

std::optional<StructureViolation> Tree::verify_bptree() const {
    const std::uint32_t fanout = options_.bptree_fanout;
    const std::uint32_t min_children = (fanout + 1) / 2;
    const std::uint32_t min_entries = fanout / 2; // ceil((F-1)/2)
    struct Frame {
        SlotIndex slot;
        std::uint32_t depth;
        Key lo, hi; // lo inclusive, hi exclusive
        bool has_lo, has_hi;
    };
    std::vector<Frame> stack{{root_, 0, 0, 0, false, false}};
    std::optional<std::uint32_t> leaf_depth;
    while (!stack.empty()) {
        const Frame f = stack.back();
        stack.pop_back();
        const ConstNodeRef n = arena_.node(f.slot);
        const bool is_root = f.slot == root_;
        const std::uint32_t m = n.entry_count();
        if (m > n.max_entries())
            return violation(f.slot, "entry count over capacity");
        auto in_range = [&](Key k) { return (!f.has_lo || k >= f.lo) && (!f.has_hi || k < f.hi); };
        for (std::uint32_t i = 0; i < m; ++i) {
            if (!in_range(n.key(i)))
                return violation(f.slot, "key " + std::to_string(n.key(i)) + " outside separator range");
            if (i > 0 && n.key(i - 1) >= n.key(i))
                return violation(f.slot, "keys not strictly increasing");
        }
        if (n.kind() == NodeKind::bptree_leaf) {
            if (!is_root && m < min_entries)
                return violation(f.slot, "leaf underfull");
            if (leaf_depth && *leaf_depth != f.depth)
                return violation(f.slot, "leaves at unequal depth");
            leaf_depth = f.depth;
            for (std::uint32_t pos = 0; pos < n.max_children(); ++pos)
                if (n.child(pos) != kNoSlot)
                    return violation(f.slot, "leaf has a child");
        } else if (n.kind() == NodeKind::bptree_internal) {
            const std::uint32_t kids = m + 1;
            if (is_root ? kids < 2 : kids < min_children)
                return violation(f.slot, "internal node underfull");
            for (std::uint32_t pos = 0; pos < n.max_children(); ++pos) {
                const SlotIndex c = n.child(pos);
                if ((pos < kids) != (c != kNoSlot))
                    return violation(f.slot, "child links do not match separator count");
                if (c == kNoSlot)
                    continue;
                Frame child{c, f.depth + 1, f.lo, f.hi, f.has_lo, f.has_hi};
                if (pos > 0) {
                    child.lo = n.key(pos - 1);
                    child.has_lo = true;
                }
                if (pos < m) {
                    child.hi = n.key(pos);
                    child.has_hi = true;
                }
                stack.push_back(child);
            }
        } else {
            return violation(f.slot, std::string("node kind ") + to_string(n.kind()));
        }
    }
    return std::nullopt;
}

} // namespace treeorder
