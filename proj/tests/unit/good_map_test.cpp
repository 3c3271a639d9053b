#include <gtest/gtest.h>

#include "mti/good_map.hpp"
#include "random_trees.hpp"

using namespace mti;
using mti::testing::tree_from;

namespace {

NodeId N(std::uint64_t v) { return NodeId{v}; }

MergeTree two_leaf() { return tree_from({{0, 0, 2}, {1, 2, 2}, {2, 4, -1}}); }
MergeTree chain(Scalar lo, Scalar hi) {
  return MergeTree::from_records(std::vector<NodeRecord>{{N(0), lo, N(1)}, {N(1), hi, std::nullopt}});
}
// x(1), y(3) -> z(7)
MergeTree wide_y() { return tree_from({{0, 1, 2}, {1, 3, 2}, {2, 7, -1}}); }

NodeId at_level(const AugmentedPair& aug, NodeId from, const Scalar& v) {
  return std::get<NodeId>(ancestor_at_value(aug.target, from, v));
}

}  // namespace

TEST(PairTables, NoPairWhenGapIsExactlyTwoEps) {
  const auto aug = extend_and_augment(two_leaf(), chain(1, 5), Epsilon(1));
  const auto tables = build_pair_tables(aug, Epsilon(1));
  EXPECT_EQ(tables.lca(N(0), N(1)), N(2));
  EXPECT_FALSE(tables.two_eps_pair(N(0), N(1)));
}

TEST(PairTables, PairAtTwoForHalfEps) {
  const Epsilon eps(Scalar(1, 2));
  const auto aug = extend_and_augment(two_leaf(), chain(Scalar(1, 2), Scalar(9, 2)), eps);
  const auto tables = build_pair_tables(aug, eps);
  const auto pair = tables.two_eps_pair(N(0), N(1));
  ASSERT_TRUE(pair);
  EXPECT_EQ(pair->u_r, *aug.source.parent(N(0)));
  EXPECT_EQ(aug.source.value(pair->u_r), Scalar(2));
  EXPECT_EQ(pair->u_s, N(1));
  // Reversed argument order orients the pair.
  const auto rev = tables.two_eps_pair(N(1), N(0));
  ASSERT_TRUE(rev);
  EXPECT_EQ(rev->u_r, N(1));
  EXPECT_EQ(rev->u_s, pair->u_r);
}

TEST(PairTables, FirstPairIsTheHighest) {
  // a(0), b(1) -> c(10); levels 2..8 inserted on both paths via the target.
  const auto f = tree_from({{0, 0, 2}, {1, 1, 2}, {2, 10, -1}});
  const auto g = tree_from({{0, 3, 1}, {1, 5, 2}, {2, 7, 3}, {3, 11, -1}});
  const Epsilon eps(1);
  const auto aug = extend_and_augment(f, g, eps);
  const auto tables = build_pair_tables(aug, eps);
  const auto pair = tables.two_eps_pair(N(0), N(1));
  ASSERT_TRUE(pair);
  EXPECT_EQ(aug.source.value(pair->u_r), Scalar(6));  // 10 - 6 = 4 > 2; 10 - 8 = 2 is not
  EXPECT_EQ(aug.source.value(pair->u_s), Scalar(6));
}

TEST(TargetNodes, Examples) {
  const auto g = tree_from({{0, 1, 2}, {1, 3, 2}, {2, 5, -1}});
  const auto aug = extend_and_augment(chain(0, 4), g, Epsilon(1));
  EXPECT_EQ(target_nodes(aug, 5), std::vector<NodeId>{aug.target.root()});
  EXPECT_TRUE(target_nodes(aug, 0).empty());
  const auto at3 = target_nodes(aug, 3);
  ASSERT_EQ(at3.size(), 2u);
  EXPECT_EQ(at3[0], N(1));
  EXPECT_EQ(aug.target.value(at3[1]), Scalar(3));
}

TEST(ExtendAssignment, Zips) {
  const auto f = two_leaf();
  const auto g = chain(1, 5);
  const auto pm = extend_assignment(N(0), N(0), node_to_root_path(f, N(0)), node_to_root_path(g, N(0)));
  EXPECT_EQ(pm.source, (std::vector<NodeId>{N(0), N(2)}));
  EXPECT_EQ(pm.image, (std::vector<NodeId>{N(0), N(1)}));
  const auto root = extend_assignment(N(2), N(1), node_to_root_path(f, N(2)), node_to_root_path(g, N(1)));
  EXPECT_EQ(root.image, std::vector<NodeId>{N(1)});
  EXPECT_THROW(extend_assignment(N(2), N(0), node_to_root_path(f, N(2)), node_to_root_path(g, N(0))),
               PathLengthMismatch);
}

TEST(ConstructMap, SingleLeafAlwaysDefined) {
  const auto aug = extend_and_augment(chain(0, 4), wide_y(), Epsilon(1));
  const auto tables = build_pair_tables(aug, Epsilon(1));
  for (NodeId t : target_nodes(aug, 1)) {
    const auto phi = construct_map({{N(0), t}}, aug, tables);
    ASSERT_TRUE(phi);
    EXPECT_EQ(phi->size(), aug.source.size());
  }
}

TEST(ConstructMap, BranchesMeetingTooHighAreRejected) {
  const Epsilon eps(1);
  const auto aug = extend_and_augment(two_leaf(), wide_y(), eps);
  const auto tables = build_pair_tables(aug, eps);
  EXPECT_FALSE(construct_map({{N(0), N(0)}, {N(1), N(1)}}, aug, tables));
}

TEST(ConstructMap, SharedPathIsDefined) {
  const Epsilon eps(1);
  const auto aug = extend_and_augment(two_leaf(), chain(1, 5), eps);
  const auto tables = build_pair_tables(aug, eps);
  const NodeId at3 = at_level(aug, N(0), 3);
  const auto phi = construct_map({{N(0), N(0)}, {N(1), at3}}, aug, tables);
  ASSERT_TRUE(phi);
  EXPECT_EQ(phi->at(N(2)), N(1));
  EXPECT_EQ(aug.target.value(phi->at(N(2))), Scalar(5));
  for (const auto& [u, t] : phi->entries()) EXPECT_EQ(aug.target.value(t), aug.source.value(u) + eps.value());
  EXPECT_TRUE(is_eps_good(*phi, aug, tables, eps));
}

TEST(IsEpsGood, IdentityAtZero) {
  const auto t = tree_from({{0, 0, 3}, {1, 1, 3}, {2, 2, 4}, {3, 3, 4}, {4, 5, -1}});
  const Epsilon eps(0);
  const auto aug = extend_and_augment(t, t, eps);
  const auto tables = build_pair_tables(aug, eps);
  LeafAssignment id;
  for (NodeId l : aug.source.leaves()) id.emplace(l, l);
  const auto phi = construct_map(id, aug, tables);
  ASSERT_TRUE(phi);
  for (const auto& [u, v] : phi->entries()) EXPECT_EQ(u, v);
  EXPECT_TRUE(is_eps_good(*phi, aug, tables, eps));
}

TEST(IsEpsGood, CollapsedPairFails) {
  const Epsilon eps(Scalar(1, 2));
  const auto aug = extend_and_augment(two_leaf(), chain(Scalar(1, 2), Scalar(9, 2)), eps);
  const auto tables = build_pair_tables(aug, eps);
  const NodeId at52 = at_level(aug, N(0), Scalar(5, 2));
  const auto phi = construct_map({{N(0), N(0)}, {N(1), at52}}, aug, tables);
  ASSERT_TRUE(phi);
  const auto pair = tables.two_eps_pair(N(0), N(1));
  ASSERT_TRUE(pair);
  EXPECT_EQ(phi->at(pair->u_r), phi->at(pair->u_s));
  EXPECT_FALSE(is_eps_good(*phi, aug, tables, eps));
}

TEST(IsEpsGood, DeepUncoveredSpurFails) {
  // x(1), y(2) -> z(5); the chain maps onto the x-path and y hangs 3 below z.
  const auto g = tree_from({{0, 1, 2}, {1, 2, 2}, {2, 5, -1}});
  const Epsilon eps(1);
  const auto aug = extend_and_augment(chain(0, 4), g, eps);
  const auto tables = build_pair_tables(aug, eps);
  const auto phi = construct_map({{N(0), N(0)}, }, aug, tables);
  ASSERT_TRUE(phi);
  EXPECT_FALSE(phi->covers(N(1)));
  EXPECT_FALSE(is_eps_good(*phi, aug, tables, eps));
  // With a shallower spur the same map is good.
  const auto g2 = tree_from({{0, 1, 2}, {1, 4, 2}, {2, 5, -1}});
  const auto aug2 = extend_and_augment(chain(0, 4), g2, eps);
  const auto tables2 = build_pair_tables(aug2, eps);
  const auto phi2 = construct_map({{N(0), N(0)}}, aug2, tables2);
  ASSERT_TRUE(phi2);
  EXPECT_TRUE(is_eps_good(*phi2, aug2, tables2, eps));
}

TEST(Refinement, SingleLeafKeepsEverything) {
  const Epsilon eps(1);
  const auto aug = extend_and_augment(chain(2, 4), wide_y(), eps);
  const auto tables = build_pair_tables(aug, eps);
  EXPECT_EQ(refined_target_nodes(N(0), aug, tables, eps), target_nodes(aug, 3));
  EXPECT_EQ(target_nodes(aug, 3).size(), 2u);
}

TEST(Refinement, DeadBranchIsPruned) {
  const Epsilon eps(1);
  const auto aug = extend_and_augment(two_leaf(), wide_y(), eps);
  const auto tables = build_pair_tables(aug, eps);
  const auto all = target_nodes(aug, 3);
  ASSERT_EQ(all.size(), 2u);
  const auto kept = refined_target_nodes(N(1), aug, tables, eps);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_NE(kept[0], N(1));
  EXPECT_EQ(refined_target_nodes(N(0), aug, tables, eps), target_nodes(aug, 1));
}

TEST(SearchContext, FastPathMatchesMaterializedMaps) {
  mti::testing::Rng rng(17);
  int checked = 0;
  for (int i = 0; i < 150; ++i) {
    const auto f = mti::testing::random_tree(rng, {1, 3, 6, 0, 12, 30});
    const auto g = mti::testing::random_tree(rng, {1, 4, 8, 0, 12, 30});
    for (const auto& eps : generate_candidates(f, g)) {
      const auto aug = extend_and_augment(f, g, eps);
      const SearchContext ctx(aug, eps);
      std::vector<std::size_t> choice(ctx.leaf_count(), 0);
      bool empty = false;
      for (std::size_t k = 0; k < ctx.leaf_count(); ++k) empty = empty || ctx.targets(k).empty();
      if (empty) continue;
      auto scratch = ctx.make_scratch();
      while (true) {
        const auto assignment = ctx.assignment(choice);
        const auto phi = construct_map(assignment, aug, ctx.tables());
        EXPECT_EQ(ctx.well_defined(choice), phi.has_value());
        const bool slow = phi && is_eps_good(*phi, aug, ctx.tables(), eps);
        EXPECT_EQ(ctx.accepts(choice, scratch), slow);
        ++checked;
        std::size_t k = 0;
        while (k < choice.size() && ++choice[k] == ctx.targets(k).size()) choice[k++] = 0;
        if (k == choice.size()) break;
      }
    }
  }
  EXPECT_GT(checked, 1000);
}
