#include "treeorder/reorder.hpp"

#include "treeorder/merge_sort.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

namespace treeorder {

bool is_permutation(std::span<const SlotIndex> perm) {
    std::vector<std::uint8_t> seen(perm.size(), 0);
    for (SlotIndex v : perm) {
        if (v >= perm.size() || seen[v])
            return false;
        seen[v] = 1;
    }
    return true;
}

ReorderMap::ReorderMap(Representation representation, std::vector<SlotIndex> perm)
    : representation_(representation), perm_(std::move(perm)) {
    if (!is_permutation(perm_))
        throw InvalidMap("reorder map is not a permutation of 0.." + std::to_string(perm_.size()));
}

ReorderMap ReorderMap::identity(std::size_t n, Representation representation) {
    std::vector<SlotIndex> perm(n);
    std::iota(perm.begin(), perm.end(), SlotIndex{0});
    return {representation, std::move(perm)};
}

bool ReorderMap::is_identity() const {
    for (std::size_t i = 0; i < perm_.size(); ++i)
        if (perm_[i] != i)
            return false;
    return true;
}

ReorderMap invert_map(const ReorderMap& map) {
    std::vector<SlotIndex> out(map.size());
    for (std::size_t i = 0; i < map.size(); ++i)
        out[map[i]] = static_cast<SlotIndex>(i);
    const auto other =
        map.representation() == Representation::location ? Representation::target : Representation::location;
    return {other, std::move(out)};
}

std::uint64_t CycleStats::predicted_copies() const {
    std::uint64_t total = 0;
    for (std::size_t c : cycle_lengths)
        total += c + 1;
    return total;
}

std::size_t CycleStats::misplaced() const {
    return std::accumulate(cycle_lengths.begin(), cycle_lengths.end(), std::size_t{0});
}

CycleStats cycle_stats(const ReorderMap& map) {
    CycleStats stats;
    std::vector<std::uint8_t> seen(map.size(), 0);
    for (std::size_t i = 0; i < map.size(); ++i) {
        if (seen[i])
            continue;
        std::size_t len = 0;
        for (std::size_t j = i; !seen[j]; j = map[j]) {
            seen[j] = 1;
            ++len;
        }
        if (len == 1)
            ++stats.trivial_cycles;
        else
            stats.cycle_lengths.push_back(len);
    }
    return stats;
}

void map_reorder(Tree& tree, ReorderMap& map) {
    if (map.representation() != Representation::location)
        throw InvalidMap("map_reorder expects Location Representation");
    if (map.size() != tree.size())
        throw InvalidMap("map covers " + std::to_string(map.size()) + " slots but tree has " +
                         std::to_string(tree.size()));
    if (!is_permutation(map.perm_))
        throw InvalidMap("map_reorder: map is not a permutation");

    auto& perm = map.perm_;
    const SlotIndex temp = tree.arena().temp_slot();
    for (SlotIndex i = 0; i < perm.size(); ++i) {
        if (perm[i] == i)
            continue;
        tree.copy_node(i, temp);
        SlotIndex cl = i;
        SlotIndex cs = perm[i];
        while (cs != i) {
            tree.copy_node(cs, cl);
            perm[cl] = cl;
            cl = cs;
            cs = perm[cl];
        }
        tree.copy_node(temp, cl);
        perm[cl] = cl;
    }
}

namespace {

std::vector<NodeId> slot_ids(const Tree& tree) { return tree.arena().layout_ids(); }

} // namespace

void native_buffer_merge_sort(Tree& tree, const AccessModel& model) {
    const SlotArena& arena = tree.arena();
    merge_sort::buffer_merge_sort(
        tree.size(),
        [&](std::size_t i, std::size_t j) {
            return hotter(model, arena.node(static_cast<SlotIndex>(i)).node_id(),
                          arena.node(static_cast<SlotIndex>(j)).node_id());
        },
        [&](std::size_t i, std::size_t j) { tree.swap_nodes(static_cast<SlotIndex>(i), static_cast<SlotIndex>(j)); });
}

void native_shell_merge_sort(Tree& tree, const AccessModel& model) {
    const SlotArena& arena = tree.arena();
    merge_sort::shell_merge_sort(
        tree.size(),
        [&](std::size_t i, std::size_t j) {
            return hotter(model, arena.node(static_cast<SlotIndex>(i)).node_id(),
                          arena.node(static_cast<SlotIndex>(j)).node_id());
        },
        [&](std::size_t i, std::size_t j) { tree.swap_nodes(static_cast<SlotIndex>(i), static_cast<SlotIndex>(j)); });
}

ReorderMap build_merge_sort_map(const AccessModel& model, const Tree& tree, MergeVariant variant) {
    const std::vector<NodeId> ids = slot_ids(tree);
    std::vector<SlotIndex> order(ids.size());
    std::iota(order.begin(), order.end(), SlotIndex{0});
    auto before = [&](std::size_t i, std::size_t j) { return hotter(model, ids[order[i]], ids[order[j]]); };
    auto swap = [&](std::size_t i, std::size_t j) { std::swap(order[i], order[j]); };
    if (variant == MergeVariant::buffer)
        merge_sort::buffer_merge_sort(order.size(), before, swap);
    else
        merge_sort::shell_merge_sort(order.size(), before, swap);
    return {Representation::location, std::move(order)};
}

namespace {

void check_path_args(const Tree& tree, SlotIndex start_node, SlotIndex start_loc) {
    const std::size_t n = tree.size();
    if (n == 0)
        return;
    if (start_node >= n)
        throw std::out_of_range("path reorder start node " + std::to_string(start_node) + " is not live");
    if (start_loc >= n)
        throw std::out_of_range("path reorder start location " + std::to_string(start_loc) + " >= " +
                                std::to_string(n));
}

// Pending child visits, pushed in reverse frequency order so the hottest child
// is popped first. Entries name the (already placed) parent slot and the child
// position; the child's slot is read only when it is visited.
struct PendingChild {
    SlotIndex parent;
    std::uint32_t position;
};

void push_children(const AccessModel& model, const Tree& tree, SlotIndex slot, std::vector<ChildLink>& scratch,
                   std::vector<PendingChild>& stack) {
    children_sorted_by_frequency(model, tree, slot, scratch);
    for (auto it = scratch.rbegin(); it != scratch.rend(); ++it)
        stack.push_back({slot, it->position});
}

} // namespace

PathReorderStatus native_path_reorder(Tree& tree, const AccessModel& model, SlotIndex start_node,
                                      SlotIndex start_loc) {
    check_path_args(tree, start_node, start_loc);
    const std::size_t n = tree.size();
    if (n <= 1)
        return PathReorderStatus::done;
    const bool full = start_node == tree.root();
    if (!full && tree.structure_changed_since_reorder())
        return PathReorderStatus::needs_full_reorder;

    SlotIndex loc = start_loc;
    auto place = [&](SlotIndex node) {
        const SlotIndex at = loc;
        if (node != at)
            tree.swap_nodes(node, at);
        loc = static_cast<SlotIndex>((loc + 1) % n);
        return at;
    };

    std::vector<ChildLink> scratch;
    std::vector<PendingChild> stack;
    push_children(model, tree, place(start_node), scratch, stack);
    while (!stack.empty()) {
        const PendingChild next = stack.back();
        stack.pop_back();
        const SlotIndex child = tree.arena().node(next.parent).child(next.position);
        push_children(model, tree, place(child), scratch, stack);
    }
    if (full)
        tree.mark_path_layout_restored();
    return PathReorderStatus::done;
}

ReorderMap build_path_reorder_map(const Tree& tree, const AccessModel& model, SlotIndex start_node,
                                  SlotIndex start_loc) {
    check_path_args(tree, start_node, start_loc);
    const std::size_t n = tree.size();
    // location[i]: original slot of the node virtually at i.
    // target[s]:   virtual position of the node originally at slot s.
    std::vector<SlotIndex> location(n);
    std::iota(location.begin(), location.end(), SlotIndex{0});
    std::vector<SlotIndex> target = location;
    if (n <= 1)
        return {Representation::location, std::move(location)};

    SlotIndex loc = start_loc;
    auto place = [&](SlotIndex original) {
        const SlotIndex from = target[original];
        if (from != loc) {
            const SlotIndex displaced = location[loc];
            std::swap(location[from], location[loc]);
            target[original] = loc;
            target[displaced] = from;
        }
        loc = static_cast<SlotIndex>((loc + 1) % n);
    };

    // The tree is not modified here, so links keep naming original slots.
    std::vector<ChildLink> scratch;
    std::vector<SlotIndex> stack{start_node};
    while (!stack.empty()) {
        const SlotIndex original = stack.back();
        stack.pop_back();
        place(original);
        children_sorted_by_frequency(model, tree, original, scratch);
        for (auto it = scratch.rbegin(); it != scratch.rend(); ++it)
            stack.push_back(it->slot);
    }
    return {Representation::location, std::move(location)};
}

PathReorderStatus map_path_reorder(Tree& tree, const AccessModel& model, SlotIndex start_node, SlotIndex start_loc) {
    check_path_args(tree, start_node, start_loc);
    if (tree.size() <= 1)
        return PathReorderStatus::done;
    const bool full = start_node == tree.root();
    if (!full && tree.structure_changed_since_reorder())
        return PathReorderStatus::needs_full_reorder;
    ReorderMap map = build_path_reorder_map(tree, model, start_node, start_loc);
    map_reorder(tree, map);
    if (full)
        tree.mark_path_layout_restored();
    return PathReorderStatus::done;
}

const char* to_string(Algorithm algorithm) {
    switch (algorithm) {
    case Algorithm::native_buffer_merge_sort: return "native-buffer-ms";
    case Algorithm::native_shell_merge_sort: return "native-shell-ms";
    case Algorithm::native_path_reorder: return "native-path";
    case Algorithm::map_buffer_merge_sort: return "map-buffer-ms";
    case Algorithm::map_shell_merge_sort: return "map-shell-ms";
    case Algorithm::map_path_reorder: return "map-path";
    }
    return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
    for (Algorithm a : kAllAlgorithms)
        if (name == to_string(a))
            return a;
    return std::nullopt;
}

bool is_path_reorder(Algorithm algorithm) {
    return algorithm == Algorithm::native_path_reorder || algorithm == Algorithm::map_path_reorder;
}

void reorder_full(Tree& tree, const AccessModel& model, Algorithm algorithm) {
    if (tree.empty())
        return;
    switch (algorithm) {
    case Algorithm::native_buffer_merge_sort: native_buffer_merge_sort(tree, model); break;
    case Algorithm::native_shell_merge_sort: native_shell_merge_sort(tree, model); break;
    case Algorithm::native_path_reorder: native_path_reorder(tree, model, tree.root(), 0); break;
    case Algorithm::map_buffer_merge_sort: {
        ReorderMap map = build_merge_sort_map(model, tree, MergeVariant::buffer);
        map_reorder(tree, map);
        break;
    }
    case Algorithm::map_shell_merge_sort: {
        ReorderMap map = build_merge_sort_map(model, tree, MergeVariant::shell);
        map_reorder(tree, map);
        break;
    }
    case Algorithm::map_path_reorder: map_path_reorder(tree, model, tree.root(), 0); break;
    }
}

} // namespace treeorder
