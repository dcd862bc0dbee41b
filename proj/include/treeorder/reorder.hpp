#pragma once

#include "treeorder/access_model.hpp"
#include "treeorder/arena.hpp"
#include "treeorder/tree.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace treeorder {

class InvalidMap : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Representation {
    location, // perm[i] = current index of the node that must end up at i
    target,   // perm[i] = index the node currently at i must move to
};

bool is_permutation(std::span<const SlotIndex> perm);

class ReorderMap {
public:
    // Throws InvalidMap unless perm is a permutation of 0..n-1.
    ReorderMap(Representation representation, std::vector<SlotIndex> perm);

    static ReorderMap identity(std::size_t n, Representation representation = Representation::location);

    Representation representation() const { return representation_; }
    std::span<const SlotIndex> perm() const { return perm_; }
    std::size_t size() const { return perm_.size(); }
    SlotIndex operator[](std::size_t i) const { return perm_[i]; }
    bool is_identity() const;

    friend bool operator==(const ReorderMap&, const ReorderMap&) = default;

private:
    friend void map_reorder(Tree& tree, ReorderMap& map);

    Representation representation_;
    std::vector<SlotIndex> perm_;
};

ReorderMap invert_map(const ReorderMap& map);

struct CycleStats {
    std::vector<std::size_t> cycle_lengths; // nontrivial cycles only, in discovery order
    std::size_t trivial_cycles = 0;

    // Copies a minimal in-place application needs: sum of (c + 1) over c > 1.
    std::uint64_t predicted_copies() const;
    std::size_t misplaced() const;
};

CycleStats cycle_stats(const ReorderMap& map);

// Applies a Location map with one temp copy per nontrivial cycle plus one copy
// per cycle element. Leaves `map` as the identity.
void map_reorder(Tree& tree, ReorderMap& map);

enum class MergeVariant { buffer, shell };

// Sort slots 0..n-1 into (frequency desc, node id asc) order using swaps.
void native_buffer_merge_sort(Tree& tree, const AccessModel& model);
void native_shell_merge_sort(Tree& tree, const AccessModel& model);

// Same sort over an index array; no node is copied.
ReorderMap build_merge_sort_map(const AccessModel& model, const Tree& tree, MergeVariant variant);

enum class PathReorderStatus {
    done,
    needs_full_reorder, // subtree start refused: structure changed since the last full Path Reorder
};

// Depth-first placement from start_node, children in descending frequency:
// the k-th visited node lands at (start_loc + k) mod n. One swap per visited
// node that is not already in place.
PathReorderStatus native_path_reorder(Tree& tree, const AccessModel& model, SlotIndex start_node, SlotIndex start_loc);

// Location map reproducing native_path_reorder's final layout. Covers the whole
// array and is the identity outside the visited interval.
ReorderMap build_path_reorder_map(const Tree& tree, const AccessModel& model, SlotIndex start_node,
                                  SlotIndex start_loc);

// build_path_reorder_map + map_reorder, with the same subtree guard as the
// native variant.
PathReorderStatus map_path_reorder(Tree& tree, const AccessModel& model, SlotIndex start_node, SlotIndex start_loc);

enum class Algorithm {
    native_buffer_merge_sort,
    native_shell_merge_sort,
    native_path_reorder,
    map_buffer_merge_sort,
    map_shell_merge_sort,
    map_path_reorder,
};

inline constexpr Algorithm kAllAlgorithms[] = {
    Algorithm::native_buffer_merge_sort, Algorithm::native_shell_merge_sort, Algorithm::native_path_reorder,
    Algorithm::map_buffer_merge_sort,    Algorithm::map_shell_merge_sort,    Algorithm::map_path_reorder,
};

const char* to_string(Algorithm algorithm);
std::optional<Algorithm> parse_algorithm(std::string_view name);
bool is_path_reorder(Algorithm algorithm);

// Whole-tree reorder with the given algorithm (Path Reorder from the root at 0).
void reorder_full(Tree& tree, const AccessModel& model, Algorithm algorithm);

} // namespace treeorder
