#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace treeorder {

using SlotIndex = std::uint32_t;
using NodeId = std::uint64_t;
using Key = std::uint64_t;
using Value = std::uint64_t;

inline constexpr SlotIndex kNoSlot = std::numeric_limits<SlotIndex>::max();

class ArenaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ArenaFull : public ArenaError {
public:
    using ArenaError::ArenaError;
};

struct MemoryRegion {
    std::uint32_t region_id = 0;
    std::size_t capacity_slots = 0;
    std::uint32_t benefit_rank = 0; // 0 = most beneficial, filled first
    double access_cost_weight = 1.0;
};

struct PhysicalLocation {
    std::uint32_t region_id = 0;
    std::size_t offset = 0;

    friend bool operator==(const PhysicalLocation&, const PhysicalLocation&) = default;
};

enum class NodeKind : std::uint8_t {
    bst = 0,
    avl = 1,
    octree_internal = 2,
    octree_leaf = 3,
    bptree_internal = 4,
    bptree_leaf = 5,
};

const char* to_string(NodeKind kind);

// Shape of one fixed-size slot. Every slot of an arena has the same word
// count regardless of which node kind it currently holds.
//
//   word 0            header: kind | entry_count << 8 | aux << 32
//   word 1            parent slot
//   word 2            node id
//   words 3..3+C      child slots (kNoSlot when absent)
//   next K words      keys
//   next K words      values
struct SlotLayout {
    std::uint32_t max_children = 2;
    std::uint32_t max_entries = 1;

    std::size_t words() const { return 3 + max_children + 2 * std::size_t{max_entries}; }
    std::size_t bytes() const { return words() * sizeof(std::uint64_t); }
};

// Read-only view of one slot. Raw pointer into arena storage; invalidated by
// allocate_slot().
class ConstNodeRef {
public:
    ConstNodeRef(const std::uint64_t* words, const SlotLayout* layout) : w_(words), layout_(layout) {}

    NodeKind kind() const { return static_cast<NodeKind>(w_[0] & 0xff); }
    std::uint32_t entry_count() const { return static_cast<std::uint32_t>((w_[0] >> 8) & 0xffff); }
    std::uint32_t aux() const { return static_cast<std::uint32_t>(w_[0] >> 32); }
    SlotIndex parent() const { return static_cast<SlotIndex>(w_[1]); }
    NodeId node_id() const { return w_[2]; }
    SlotIndex child(std::uint32_t pos) const { return static_cast<SlotIndex>(w_[3 + pos]); }
    Key key(std::uint32_t i) const { return w_[keys_offset() + i]; }
    Value value(std::uint32_t i) const { return w_[keys_offset() + layout_->max_entries + i]; }

    std::uint32_t max_children() const { return layout_->max_children; }
    std::uint32_t max_entries() const { return layout_->max_entries; }

    const std::uint64_t* raw() const { return w_; }

protected:
    std::size_t keys_offset() const { return 3 + layout_->max_children; }

    const std::uint64_t* w_;
    const SlotLayout* layout_;
};

class NodeRef : public ConstNodeRef {
public:
    NodeRef(std::uint64_t* words, const SlotLayout* layout) : ConstNodeRef(words, layout) {}

    void set_header(NodeKind kind, std::uint32_t entry_count, std::uint32_t aux) {
        mut()[0] = static_cast<std::uint64_t>(kind) | (static_cast<std::uint64_t>(entry_count & 0xffff) << 8) |
                   (static_cast<std::uint64_t>(aux) << 32);
    }
    void set_kind(NodeKind kind) { set_header(kind, entry_count(), aux()); }
    void set_entry_count(std::uint32_t n) { set_header(kind(), n, aux()); }
    void set_aux(std::uint32_t a) { set_header(kind(), entry_count(), a); }
    void set_parent(SlotIndex p) { mut()[1] = p; }
    void set_node_id(NodeId id) { mut()[2] = id; }
    void set_child(std::uint32_t pos, SlotIndex c) { mut()[3 + pos] = c; }
    void set_key(std::uint32_t i, Key k) { mut()[keys_offset() + i] = k; }
    void set_value(std::uint32_t i, Value v) { mut()[keys_offset() + layout_->max_entries + i] = v; }

private:
    std::uint64_t* mut() const { return const_cast<std::uint64_t*>(w_); }
};

// Abstract array of fixed-size node slots laid over an ordered list of memory
// regions. Region with benefit rank 0 occupies the lowest indices. One extra
// slot (temp_slot() == capacity()) sits outside the index space and serves as
// the scratch node for swaps and cycle rotations.
class SlotArena {
public:
    SlotArena(std::vector<MemoryRegion> regions, SlotLayout layout);

    // Appends a zeroed slot. Fills region 0 first, then region 1, ...
    SlotIndex allocate_slot();

    PhysicalLocation resolve(SlotIndex index) const;
    SlotIndex resolve_physical(std::uint32_t region_id, std::size_t offset) const;
    const MemoryRegion& region_of(SlotIndex index) const;

    // Copies src into dst and repairs links: the parent (or `root` when the
    // node has no parent) points at dst, and every child's parent link is dst.
    // One copy operation.
    void copy_node(SlotIndex src, SlotIndex dst, SlotIndex& root);

    // Exchanges a and b through the temp slot. Three copy operations.
    void swap_nodes(SlotIndex a, SlotIndex b, SlotIndex& root);

    double weighted_access_cost(std::span<const SlotIndex> trace) const;

    NodeRef node(SlotIndex index) { return {slot_words(index), &layout_}; }
    ConstNodeRef node(SlotIndex index) const { return {slot_words(index), &layout_}; }

    std::size_t capacity() const { return capacity_; }
    std::size_t size() const { return next_free_; }
    SlotIndex temp_slot() const { return static_cast<SlotIndex>(capacity_); }
    std::uint64_t copy_ops() const { return copy_ops_; }
    const SlotLayout& layout() const { return layout_; }
    std::span<const MemoryRegion> regions() const { return regions_; }

    // node_id of every live slot in index order.
    std::vector<NodeId> layout_ids() const;

private:
    std::uint64_t* slot_words(SlotIndex index);
    const std::uint64_t* slot_words(SlotIndex index) const;
    void check_index(SlotIndex index, const char* what) const;

    std::vector<MemoryRegion> regions_;     // ascending benefit_rank
    std::vector<std::size_t> region_start_; // first slot index of each region
    SlotLayout layout_;
    std::size_t capacity_ = 0;
    std::size_t next_free_ = 0;
    std::uint64_t copy_ops_ = 0;
    std::vector<std::uint64_t> words_; // grows with next_free_
    std::vector<std::uint64_t> temp_;
};

} // namespace treeorder
