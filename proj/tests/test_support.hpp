#pragma once

// Shared helpers and independent oracles for the test suites. Nothing here
// calls into the reorder module; expected layouts are computed from scratch.

#include "treeorder/access_model.hpp"
#include "treeorder/tree.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <utility>
#include <vector>

namespace treeorder::testing {

inline std::vector<MemoryRegion> regions(std::initializer_list<std::size_t> caps,
                                         std::initializer_list<double> weights = {}) {
    std::vector<MemoryRegion> out;
    std::uint32_t r = 0;
    auto w = weights.begin();
    for (std::size_t cap : caps) {
        const double weight = w != weights.end() ? *w++ : 1.0 + 2.0 * r;
        out.push_back({r, cap, r, weight});
        ++r;
    }
    return out;
}

inline std::vector<MemoryRegion> roomy_regions(std::size_t n) { return regions({n / 4 + 1, 24 * n + 64}); }

inline Tree tree_with_keys(TreeKind kind, const std::vector<Key>& keys, TreeOptions options = {}) {
    Tree tree(kind, roomy_regions(keys.size()), options);
    for (Key k : keys)
        tree.insert(k, k * 7 + 1);
    return tree;
}

inline Key random_key(std::mt19937_64& rng, TreeKind kind) {
    return kind == TreeKind::octree ? rng() >> 1 : rng();
}

struct RandomInstance {
    Tree tree;
    AccessModel model;
    std::map<Key, Value> contents;
    std::vector<Key> reads;
};

// Random tree of `n_keys` keys with a skewed read profile recorded in the model.
// Small key ranges are mixed in so that BSTs also grow deep, degenerate paths.
inline RandomInstance random_instance(TreeKind kind, std::size_t n_keys, std::uint64_t seed,
                                      TreeOptions options = {}) {
    std::mt19937_64 rng(seed);
    RandomInstance inst{Tree(kind, roomy_regions(n_keys), options), {}, {}, {}};
    std::vector<Key> keys;
    const bool clustered = seed % 3 == 0;
    while (keys.size() < n_keys) {
        Key k = clustered ? (rng() % (4 * n_keys + 8)) : random_key(rng, kind);
        if (kind == TreeKind::octree)
            k &= (Key{1} << 63) - 1;
        if (inst.contents.emplace(k, rng()).second)
            keys.push_back(k);
    }
    for (Key k : keys)
        inst.tree.insert(k, inst.contents[k]);
    if (keys.empty())
        return inst;
    std::vector<Key> hot(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(std::max<std::size_t>(1, keys.size() / 10)));
    const std::size_t n_reads = 4 * n_keys + 1;
    for (std::size_t r = 0; r < n_reads; ++r) {
        const bool pick_hot = rng() % 10 != 0;
        const Key k = pick_hot ? hot[rng() % hot.size()] : keys[rng() % keys.size()];
        inst.reads.push_back(k);
        inst.tree.lookup(k, &inst.model);
    }
    return inst;
}

inline bool contents_match(const Tree& tree, const std::map<Key, Value>& contents) {
    for (const auto& [k, v] : contents) {
        auto got = tree.lookup(k);
        if (!got || *got != v)
            return false;
    }
    return true;
}

// Applies uniform random swaps so no reorder starts from the insertion layout.
inline void shuffle_slots(Tree& tree, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = tree.size(); i > 1; --i) {
        const auto j = static_cast<SlotIndex>(rng() % i);
        if (j != i - 1)
            tree.swap_nodes(static_cast<SlotIndex>(i - 1), j);
    }
}

// Moves nodes so that slot i holds node id ids[i].
inline void arrange(Tree& tree, const std::vector<NodeId>& ids) {
    for (SlotIndex i = 0; i < ids.size(); ++i) {
        if (tree.arena().node(i).node_id() == ids[i])
            continue;
        for (SlotIndex j = i + 1; j < tree.size(); ++j) {
            if (tree.arena().node(j).node_id() == ids[i]) {
                tree.swap_nodes(i, j);
                break;
            }
        }
    }
}

// Oracle: canonical frequency order of node ids by plain std::sort.
inline std::vector<NodeId> sorted_by_frequency(const AccessModel& model, std::vector<NodeId> ids) {
    std::sort(ids.begin(), ids.end(), [&](NodeId a, NodeId b) {
        const auto fa = model.frequency(a), fb = model.frequency(b);
        return fa != fb ? fa > fb : a < b;
    });
    return ids;
}

// Oracle: recursive DFS visit order by node id, children by (freq desc, id asc).
inline void path_order_ids(const Tree& tree, const AccessModel& model, SlotIndex slot, std::vector<NodeId>& out) {
    out.push_back(tree.arena().node(slot).node_id());
    std::vector<std::pair<NodeId, SlotIndex>> kids;
    for (const ChildLink& c : tree.children_of(slot))
        kids.emplace_back(tree.arena().node(c.slot).node_id(), c.slot);
    std::sort(kids.begin(), kids.end(), [&](const auto& a, const auto& b) {
        const auto fa = model.frequency(a.first), fb = model.frequency(b.first);
        return fa != fb ? fa > fb : a.first < b.first;
    });
    for (const auto& [id, s] : kids)
        path_order_ids(tree, model, s, out);
}

// Oracle: apply a Location permutation to an id array directly.
inline std::vector<NodeId> apply_location(const std::vector<NodeId>& ids, const std::vector<SlotIndex>& perm) {
    std::vector<NodeId> out(ids.size());
    for (std::size_t i = 0; i < perm.size(); ++i)
        out[i] = ids[perm[i]];
    return out;
}

// Oracle: cycle lengths of a permutation by repeated orbit walking.
inline std::vector<std::size_t> orbit_lengths(const std::vector<SlotIndex>& perm) {
    std::vector<std::size_t> lengths;
    std::vector<bool> done(perm.size(), false);
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (done[i])
            continue;
        std::size_t len = 0, j = i;
        do {
            done[j] = true;
            j = perm[j];
            ++len;
        } while (j != i);
        lengths.push_back(len);
    }
    return lengths;
}

inline std::uint64_t minimal_copies(const std::vector<SlotIndex>& perm) {
    std::uint64_t total = 0;
    for (std::size_t c : orbit_lengths(perm))
        if (c > 1)
            total += c + 1;
    return total;
}

inline std::vector<SlotIndex> random_permutation(std::size_t n, std::mt19937_64& rng) {
    std::vector<SlotIndex> perm(n);
    for (std::size_t i = 0; i < n; ++i)
        perm[i] = static_cast<SlotIndex>(i);
    std::shuffle(perm.begin(), perm.end(), rng);
    return perm;
}

// Subtree slots reached from `slot`.
inline std::vector<SlotIndex> subtree_slots(const Tree& tree, SlotIndex slot) {
    std::vector<SlotIndex> out{slot};
    for (std::size_t i = 0; i < out.size(); ++i)
        for (const ChildLink& c : tree.children_of(out[i]))
            out.push_back(c.slot);
    return out;
}

inline constexpr TreeKind kAllKinds[] = {TreeKind::bst, TreeKind::avl, TreeKind::octree, TreeKind::bptree};

} // namespace treeorder::testing
