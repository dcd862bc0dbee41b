#pragma once

#include "treeorder/arena.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace treeorder {

class AccessModel;

enum class TreeKind { bst, avl, octree, bptree };

const char* to_string(TreeKind kind);
std::optional<TreeKind> parse_tree_kind(std::string_view name);

struct TreeOptions {
    std::uint32_t bptree_fanout = 16;      // max children per internal node
    std::uint32_t octree_leaf_capacity = 4; // entries per octree leaf before it splits
};

SlotLayout slot_layout_for(TreeKind kind, const TreeOptions& options);

struct ChildLink {
    SlotIndex slot = kNoSlot;
    std::uint32_t position = 0; // structural position: left/right, octant, B+ child index

    friend bool operator==(const ChildLink&, const ChildLink&) = default;
};

struct StructureViolation {
    SlotIndex slot = kNoSlot;
    std::string message;
};

// A key-value tree whose nodes live in a SlotArena owned by the tree. Links are
// slot indices, so the tree stays valid while reorder algorithms move nodes
// around with copy_node/swap_nodes. Copying a Tree copies its whole arena.
class Tree {
public:
    Tree(TreeKind kind, std::vector<MemoryRegion> regions, TreeOptions options = {});

    // Duplicate keys overwrite the stored value without changing structure.
    void insert(Key key, Value value);

    // Walks root-to-termination. With a model, every visited node is recorded
    // in visit order and the lookup counts as one operation; `path` receives
    // the visited slots.
    std::optional<Value> lookup(Key key, AccessModel* model = nullptr, std::vector<SlotIndex>* path = nullptr) const;

    std::vector<ChildLink> children_of(SlotIndex slot) const;
    void children_of(SlotIndex slot, std::vector<ChildLink>& out) const;

    std::optional<StructureViolation> verify_structure() const;

    void copy_node(SlotIndex src, SlotIndex dst) { arena_.copy_node(src, dst, root_); }
    void swap_nodes(SlotIndex a, SlotIndex b) { arena_.swap_nodes(a, b, root_); }

    TreeKind kind() const { return kind_; }
    const TreeOptions& options() const { return options_; }
    SlotIndex root() const { return root_; }
    std::size_t size() const { return arena_.size(); }
    bool empty() const { return root_ == kNoSlot; }

    // Set by any node creation, rotation or split; cleared by a full-tree
    // Path Reorder, after which every subtree occupies a contiguous interval.
    bool structure_changed_since_reorder() const { return structure_changed_; }
    void mark_path_layout_restored() { structure_changed_ = false; }

    SlotArena& arena() { return arena_; }
    const SlotArena& arena() const { return arena_; }

private:
    SlotIndex new_node(NodeKind kind, std::uint32_t aux);

    void insert_binary(Key key, Value value);
    void rebalance_from(SlotIndex slot);
    std::uint32_t height_of(SlotIndex slot) const;
    void update_height(SlotIndex slot);
    SlotIndex rotate(SlotIndex top, std::uint32_t dir);
    void replace_child(SlotIndex parent, SlotIndex from, SlotIndex to);

    void insert_octree(SlotIndex start, Key key, Value value);
    void insert_bptree(Key key, Value value);
    void insert_into_parent(SlotIndex left, Key separator, SlotIndex right);

    std::optional<StructureViolation> verify_links() const;
    std::optional<StructureViolation> verify_binary() const;
    std::optional<StructureViolation> verify_octree() const;
    std::optional<StructureViolation> verify_bptree() const;

    TreeKind kind_;
    TreeOptions options_;
    SlotArena arena_;
    SlotIndex root_ = kNoSlot;
    NodeId next_node_id_ = 0;
    bool structure_changed_ = false;
};

// Octree keys are 63-bit Morton codes: bit 3*i+0/1/2 carries bit i of x/y/z.
inline constexpr unsigned kOctreeMaxDepth = 21;
Key morton_encode(std::uint32_t x, std::uint32_t y, std::uint32_t z);
std::uint32_t octant_at_depth(Key morton, unsigned depth);

} // namespace treeorder
