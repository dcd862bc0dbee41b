#include "test_support.hpp"

#include "treeorder/arena.hpp"
#include "treeorder/tree.hpp"

#include <gtest/gtest.h>

#include <vector>

using namespace treeorder;
using treeorder::testing::regions;

namespace {

SlotArena small_arena(std::initializer_list<std::size_t> caps) { return SlotArena(regions(caps), SlotLayout{2, 1}); }

} // namespace

TEST(Arena, AllocationFillsRegionsInOrder) {
    SlotArena arena = small_arena({2, 4});
    EXPECT_EQ(arena.allocate_slot(), 0u);
    EXPECT_EQ(arena.allocate_slot(), 1u);
    const SlotIndex third = arena.allocate_slot();
    EXPECT_EQ(third, 2u);
    EXPECT_EQ(arena.resolve(third), (PhysicalLocation{1, 0}));
}

TEST(Arena, FullArenaThrows) {
    SlotArena arena = small_arena({3});
    for (int i = 0; i < 3; ++i)
        arena.allocate_slot();
    EXPECT_THROW(arena.allocate_slot(), ArenaFull);
    EXPECT_EQ(arena.size(), 3u);
}

TEST(Arena, RegionsSortedByBenefitRank) {
    std::vector<MemoryRegion> rs{{7, 4, 1, 3.0}, {9, 2, 0, 1.0}};
    SlotArena arena(rs, SlotLayout{2, 1});
    EXPECT_EQ(arena.resolve(0).region_id, 9u);
    EXPECT_EQ(arena.resolve(2).region_id, 7u);
    EXPECT_EQ(arena.resolve_physical(7, 0), 2u);
}

TEST(Arena, RejectsBadRegions) {
    EXPECT_THROW(SlotArena({}, SlotLayout{}), std::invalid_argument);
    EXPECT_THROW(SlotArena({{0, 0, 0, 1.0}}, SlotLayout{}), std::invalid_argument);
    EXPECT_THROW(SlotArena({{0, 1, 0, 1.0}, {1, 1, 2, 1.0}}, SlotLayout{}), std::invalid_argument);
    EXPECT_THROW(SlotArena({{0, 1, 0, 1.0}, {1, 1, 0, 1.0}}, SlotLayout{}), std::invalid_argument);
    EXPECT_THROW(SlotArena({{0, 1, 0, -1.0}}, SlotLayout{}), std::invalid_argument);
}

TEST(Arena, ResolveExamples) {
    SlotArena arena = small_arena({2, 4});
    EXPECT_EQ(arena.resolve(5), (PhysicalLocation{1, 3}));
    EXPECT_EQ(arena.resolve_physical(0, 0), 0u);
    EXPECT_THROW(arena.resolve(6), std::out_of_range);
    EXPECT_THROW(arena.resolve_physical(0, 2), std::out_of_range);
    EXPECT_THROW(arena.resolve_physical(5, 0), std::out_of_range);
}

// Exhaustive round trip for every region split of n <= 64 slots into up to
// three regions, checked against a linear scan over cumulative capacities.
TEST(Arena, ResolveIsBijectionExhaustive) {
    for (std::size_t a = 1; a <= 24; ++a) {
        for (std::size_t b = 1; b <= 24; ++b) {
            for (std::size_t c = 0; c <= 16; c += 4) {
                std::vector<MemoryRegion> rs{{0, a, 0, 1.0}, {1, b, 1, 2.0}};
                if (c > 0)
                    rs.push_back({2, c, 2, 3.0});
                SlotArena arena(rs, SlotLayout{2, 1});
                const std::size_t n = a + b + c;
                ASSERT_LE(n, 64u);
                for (SlotIndex i = 0; i < n; ++i) {
                    const PhysicalLocation loc = arena.resolve(i);
                    std::uint32_t expected_region = i < a ? 0 : (i < a + b ? 1 : 2);
                    std::size_t expected_offset = i < a ? i : (i < a + b ? i - a : i - a - b);
                    ASSERT_EQ(loc.region_id, expected_region);
                    ASSERT_EQ(loc.offset, expected_offset);
                    ASSERT_EQ(arena.resolve_physical(loc.region_id, loc.offset), i);
                }
            }
        }
    }
}

TEST(Arena, CopyRootUpdatesRootAndChildren) {
    // Keys 30 (slot 0), 10, 40, 20: swap puts the root at slot 3 and node 20
    // at slot 0. Park node 20 in the temp slot, copy the root from slot 3 to
    // slot 0, then put node 20 into slot 3.
    Tree tree(TreeKind::bst, regions({8}));
    for (Key k : {30, 10, 40, 20})
        tree.insert(k, k);
    tree.swap_nodes(0, 3);
    ASSERT_EQ(tree.root(), 3u);
    const SlotIndex temp = tree.arena().temp_slot();
    tree.copy_node(0, temp);

    const auto before = tree.arena().copy_ops();
    tree.copy_node(3, 0);
    EXPECT_EQ(tree.root(), 0u);
    ASSERT_EQ(tree.children_of(0).size(), 2u);
    for (const ChildLink& c : tree.children_of(0))
        EXPECT_EQ(tree.arena().node(c.slot).parent(), 0u);
    EXPECT_EQ(tree.arena().copy_ops(), before + 1);

    tree.copy_node(temp, 3);
    EXPECT_FALSE(tree.verify_structure());
}

TEST(Arena, CopyLeafRepointsParent) {
    // 50 30 70 20 40 80 10 25: slot 5 holds 80, the right child of 70 at slot 2.
    Tree tree(TreeKind::bst, regions({16}));
    for (Key k : {50, 30, 70, 20, 40, 80, 10, 25})
        tree.insert(k, k);
    ASSERT_EQ(tree.arena().node(2).child(1), 5u);
    const auto before = tree.arena().copy_ops();
    tree.copy_node(5, 7);
    EXPECT_EQ(tree.arena().node(2).child(1), 7u);
    EXPECT_EQ(tree.arena().node(7).key(0), 80u);
    EXPECT_EQ(tree.arena().copy_ops(), before + 1);
}

TEST(Arena, CopyRoundTripThroughTemp) {
    Tree tree = treeorder::testing::tree_with_keys(TreeKind::avl, {5, 3, 8, 1, 4});
    const auto ids = tree.arena().layout_ids();
    const auto before = tree.arena().copy_ops();
    tree.copy_node(1, tree.arena().temp_slot());
    tree.copy_node(tree.arena().temp_slot(), 1);
    EXPECT_EQ(tree.arena().copy_ops(), before + 2);
    EXPECT_EQ(tree.arena().layout_ids(), ids);
    EXPECT_FALSE(tree.verify_structure());
}

TEST(Arena, CopyToSelfRejected) {
    Tree tree = treeorder::testing::tree_with_keys(TreeKind::bst, {1, 2});
    EXPECT_THROW(tree.copy_node(1, 1), ArenaError);
    EXPECT_THROW(tree.copy_node(0, 5), ArenaError);
}

TEST(Arena, SwapParentAndChild) {
    Tree tree(TreeKind::bst, regions({4}));
    tree.insert(1, 10);
    tree.insert(2, 20); // right child at slot 1
    const auto before = tree.arena().copy_ops();
    tree.swap_nodes(0, 1);
    EXPECT_EQ(tree.root(), 1u);
    EXPECT_EQ(tree.arena().node(1).key(0), 1u);
    EXPECT_EQ(tree.arena().node(1).child(1), 0u);
    EXPECT_EQ(tree.arena().node(0).parent(), 1u);
    EXPECT_EQ(tree.arena().node(1).parent(), kNoSlot);
    EXPECT_EQ(tree.arena().copy_ops(), before + 3);
    EXPECT_FALSE(tree.verify_structure());
}

TEST(Arena, SwapUnrelatedLeaves) {
    // 3 (s0) with children 1 (s1) and 4 (s2); 1 has children 0 (s3) and 2 (s4).
    Tree tree(TreeKind::bst, regions({8}));
    for (Key k : {3, 1, 4, 0, 2})
        tree.insert(k, k);
    tree.swap_nodes(2, 3);
    EXPECT_EQ(tree.arena().node(0).child(0), 1u);
    EXPECT_EQ(tree.arena().node(0).child(1), 3u);
    EXPECT_EQ(tree.arena().node(1).child(0), 2u);
    EXPECT_EQ(tree.arena().node(1).child(1), 4u);
    EXPECT_EQ(tree.arena().node(3).key(0), 4u);
    EXPECT_EQ(tree.arena().node(2).key(0), 0u);
    EXPECT_EQ(tree.arena().copy_ops(), 3u);
    EXPECT_FALSE(tree.verify_structure());
}

TEST(Arena, SwapIsInvolution) {
    Tree tree = treeorder::testing::tree_with_keys(TreeKind::avl, {10, 5, 15, 3, 7, 12, 20});
    const auto ids = tree.arena().layout_ids();
    const auto root = tree.root();
    tree.swap_nodes(0, 4);
    tree.swap_nodes(0, 4);
    EXPECT_EQ(tree.arena().layout_ids(), ids);
    EXPECT_EQ(tree.root(), root);
    EXPECT_EQ(tree.arena().copy_ops(), 6u);
    EXPECT_THROW(tree.swap_nodes(2, 2), ArenaError);
}

// Link integrity and copy accounting under random swap/copy sequences.
TEST(Arena, RandomSwapsPreserveLinks) {
    std::mt19937_64 rng(42);
    for (TreeKind kind : treeorder::testing::kAllKinds) {
        auto inst = treeorder::testing::random_instance(kind, 200, 7, TreeOptions{4, 2});
        Tree& tree = inst.tree;
        for (int step = 0; step < 500; ++step) {
            const auto a = static_cast<SlotIndex>(rng() % tree.size());
            const auto b = static_cast<SlotIndex>(rng() % tree.size());
            const auto before = tree.arena().copy_ops();
            if (a == b)
                continue;
            if (step % 2) {
                tree.swap_nodes(a, b);
                ASSERT_EQ(tree.arena().copy_ops(), before + 3);
            } else {
                const SlotIndex temp = tree.arena().temp_slot();
                tree.copy_node(a, temp);
                tree.copy_node(b, a);
                tree.copy_node(temp, b);
                ASSERT_EQ(tree.arena().copy_ops(), before + 3);
            }
        }
        ASSERT_FALSE(tree.verify_structure()) << to_string(kind);
        EXPECT_TRUE(treeorder::testing::contents_match(tree, inst.contents));
    }
}

TEST(Arena, WeightedAccessCost) {
    SlotArena arena(regions({2, 4}, {1.0, 3.0}), SlotLayout{2, 1});
    for (int i = 0; i < 6; ++i)
        arena.allocate_slot();
    const std::vector<SlotIndex> trace{0, 0, 5};
    EXPECT_DOUBLE_EQ(arena.weighted_access_cost(trace), 5.0);
    EXPECT_DOUBLE_EQ(arena.weighted_access_cost({}), 0.0);
}
