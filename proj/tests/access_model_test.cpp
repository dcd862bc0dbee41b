#include "test_support.hpp"

#include "treeorder/access_model.hpp"

#include <gtest/gtest.h>

#include <numeric>

using namespace treeorder;
using treeorder::testing::regions;

TEST(AccessModel, CountsAndGlobals) {
    AccessModel model;
    model.record_access(3);
    model.record_access(3);
    model.record_access(0);
    model.record_operation();
    EXPECT_EQ(model.frequency(3), 2u);
    EXPECT_EQ(model.frequency(0), 1u);
    EXPECT_EQ(model.frequency(99), 0u);
    EXPECT_EQ(model.total_accesses(), 3u);
    EXPECT_EQ(model.accesses_since_reorder(), 3u);
    EXPECT_EQ(model.operations_since_reorder(), 1u);
    EXPECT_EQ(model.node_accesses_since_reorder(3), 2u);

    model.reset_node(3);
    EXPECT_EQ(model.node_accesses_since_reorder(3), 0u);
    EXPECT_EQ(model.frequency(3), 2u);
    model.reset_global();
    EXPECT_EQ(model.operations_since_reorder(), 0u);
    EXPECT_EQ(model.accesses_since_reorder(), 0u);
    EXPECT_EQ(model.total_accesses(), 3u);
}

// Sum of per-node counts equals total path length over all lookups.
TEST(AccessModel, CountsConserveVisits) {
    for (TreeKind kind : treeorder::testing::kAllKinds) {
        auto inst = treeorder::testing::random_instance(kind, 200, 4);
        AccessModel model;
        std::uint64_t visits = 0;
        std::vector<SlotIndex> path;
        for (Key k : inst.reads) {
            inst.tree.lookup(k, &model, &path);
            visits += path.size();
        }
        std::uint64_t sum = 0;
        for (NodeId id = 0; id < inst.tree.size(); ++id)
            sum += model.frequency(id);
        EXPECT_EQ(sum, visits);
        EXPECT_EQ(model.total_accesses(), visits);
        EXPECT_EQ(model.operations_since_reorder(), inst.reads.size());
    }
}

TEST(AccessModel, FrequencyFollowsNodeAcrossMoves) {
    Tree tree = treeorder::testing::tree_with_keys(TreeKind::bst, {2, 1, 3});
    AccessModel model;
    tree.lookup(1, &model);
    tree.swap_nodes(0, 1);
    tree.lookup(1, &model);
    EXPECT_EQ(model.frequency(tree.arena().node(0).node_id()), 2u);
}

TEST(AccessModel, ChildrenSortedByFrequencyThenId) {
    // Octree root with children in octants 0, 3, 5 at node ids 1, 3, 2.
    const Key high = Key{1} << 20;
    auto point = [&](std::uint32_t o) { return morton_encode(o & 1 ? high : 0, o & 2 ? high : 0, o & 4 ? high : 0); };
    Tree tree(TreeKind::octree, regions({16}), TreeOptions{16, 1});
    for (std::uint32_t o : {5u, 0u, 3u})
        tree.insert(point(o), o);
    AccessModel model;
    std::vector<NodeId> ids;
    for (const ChildLink& c : tree.children_of(tree.root()))
        ids.push_back(tree.arena().node(c.slot).node_id());
    // Equal counts everywhere: pure id order.
    for (NodeId id : ids)
        model.record_access(id);
    auto sorted = children_sorted_by_frequency(model, tree, tree.root());
    ASSERT_EQ(sorted.size(), 3u);
    for (std::size_t i = 1; i < sorted.size(); ++i)
        EXPECT_LT(tree.arena().node(sorted[i - 1].slot).node_id(), tree.arena().node(sorted[i].slot).node_id());
    // Bump the octant 5 child to the front.
    model.record_access(ids[2]);
    sorted = children_sorted_by_frequency(model, tree, tree.root());
    EXPECT_EQ(sorted[0].position, 5u);
}

TEST(AccessModel, ChildRatios) {
    Tree tree = treeorder::testing::tree_with_keys(TreeKind::bst, {2, 1, 3});
    AccessModel model;
    EXPECT_EQ(child_ratios(model, tree, 0), (std::vector<ChildRatio>{{0, 0.0}, {1, 0.0}}));
    for (int i = 0; i < 8; ++i)
        model.record_access(1);
    for (int i = 0; i < 2; ++i)
        model.record_access(2);
    const auto r = child_ratios(model, tree, 0);
    ASSERT_EQ(r.size(), 2u);
    EXPECT_DOUBLE_EQ(r[0].ratio, 0.8);
    EXPECT_DOUBLE_EQ(r[1].ratio, 0.2);
    EXPECT_TRUE(child_ratios(model, tree, 1).empty());
}

TEST(AccessModel, ChildRatiosThreeWay) {
    Tree tree(TreeKind::bptree, regions({16}), TreeOptions{3, 4});
    for (Key k = 1; k <= 4; ++k)
        tree.insert(k, k);
    const auto kids = tree.children_of(tree.root());
    ASSERT_EQ(kids.size(), 3u);
    AccessModel model;
    const int counts[] = {1, 1, 2};
    for (std::size_t i = 0; i < 3; ++i)
        for (int c = 0; c < counts[i]; ++c)
            model.record_access(tree.arena().node(kids[i].slot).node_id());
    const auto r = child_ratios(model, tree, tree.root());
    ASSERT_EQ(r.size(), 3u);
    EXPECT_DOUBLE_EQ(r[0].ratio, 0.25);
    EXPECT_DOUBLE_EQ(r[1].ratio, 0.25);
    EXPECT_DOUBLE_EQ(r[2].ratio, 0.5);
}

TEST(AccessModel, SnapshotScope) {
    Tree tree = treeorder::testing::tree_with_keys(TreeKind::bst, {40, 20, 60, 10, 30, 50, 70});
    AccessModel model;
    for (Key k : {10, 30, 30, 50, 70})
        tree.lookup(k, &model);
    EXPECT_EQ(model.snapshot(0), nullptr);

    // Subtree at slot 1 (key 20): its nodes reset, everything else untouched.
    snapshot_after_reorder(model, tree, 1);
    ASSERT_NE(model.snapshot(1), nullptr);
    EXPECT_EQ(*model.snapshot(1), child_ratios(model, tree, 1));
    EXPECT_EQ(model.snapshot(0), nullptr);
    EXPECT_EQ(model.node_accesses_since_reorder(1), 0u);
    EXPECT_EQ(model.node_accesses_since_reorder(4), 0u);
    EXPECT_EQ(model.node_accesses_since_reorder(0), 5u);
    EXPECT_EQ(model.node_accesses_since_reorder(2), 2u);
    EXPECT_EQ(model.operations_since_reorder(), 5u);
    EXPECT_EQ(model.frequency(1), 3u);

    snapshot_after_reorder(model, tree, tree.root());
    for (NodeId id = 0; id < 7; ++id) {
        EXPECT_NE(model.snapshot(id), nullptr);
        EXPECT_EQ(model.node_accesses_since_reorder(id), 0u);
    }
    EXPECT_EQ(model.operations_since_reorder(), 0u);
    EXPECT_EQ(model.accesses_since_reorder(), 0u);
}
