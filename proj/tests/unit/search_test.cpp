#include <gtest/gtest.h>

#include "mti/search.hpp"
#include "random_trees.hpp"

using namespace mti;
using mti::testing::tree_from;

namespace {

NodeId N(std::uint64_t v) { return NodeId{v}; }

MergeTree two_leaf() { return tree_from({{0, 0, 2}, {1, 2, 2}, {2, 4, -1}}); }
MergeTree chain15() { return tree_from({{0, 1, 1}, {1, 5, -1}}); }
MergeTree wide_y() { return tree_from({{0, 1, 2}, {1, 3, 2}, {2, 7, -1}}); }

}  // namespace

TEST(Direction, ExactComparison) {
  EXPECT_EQ(choose_direction(4, 10), Direction::FToG);
  EXPECT_EQ(choose_direction(10, 4), Direction::GToF);
  EXPECT_EQ(choose_direction(3, 3), Direction::FToG);
  EXPECT_EQ(choose_direction(2, 4), Direction::FToG);  // 16 == 16
  EXPECT_EQ(choose_direction(4, 2), Direction::FToG);
  EXPECT_EQ(choose_direction(1, 5), Direction::GToF);
  EXPECT_EQ(choose_direction(40, 41), Direction::FToG);
  EXPECT_EQ(to_string(Direction::FToG), "f->g");
}

TEST(IsEpsInterleaved, IdenticalTreesAtZero) {
  const auto t = tree_from({{0, 0, 3}, {1, 1, 3}, {2, 2, 4}, {3, 3, 4}, {4, 5, -1}});
  const auto r = is_eps_interleaved(t, t, Epsilon(0));
  ASSERT_TRUE(r.interleaved);
  ASSERT_TRUE(r.witness);
  for (const auto& [u, v] : r.witness->map.entries()) EXPECT_EQ(u, v);
  EXPECT_EQ(r.maps_enumerated, 1u);
}

TEST(IsEpsInterleaved, FixturePair) {
  const auto yes = is_eps_interleaved(two_leaf(), chain15(), Epsilon(1));
  EXPECT_TRUE(yes.interleaved);
  ASSERT_TRUE(yes.witness);
  EXPECT_EQ(yes.direction, Direction::FToG);  // 1^2 <= 2^1
  const auto no = is_eps_interleaved(two_leaf(), chain15(), Epsilon(Scalar(1, 2)));
  EXPECT_FALSE(no.interleaved);
  EXPECT_FALSE(no.witness);
  EXPECT_EQ(no.maps_enumerated, 0u);
  EXPECT_EQ(no.early_exit, "leaf-gap");
}

TEST(IsEpsInterleaved, EmptyRefinedListShortCircuits) {
  // Source has two leaves; the target Y has a branch that cannot host the merge.
  const auto f = tree_from({{0, 0, 2}, {1, 2, 2}, {2, 3, -1}});
  const auto g = tree_from({{0, 1, 2}, {1, 3, 2}, {2, 9, -1}});
  SearchConfig cfg;
  const auto r = is_eps_interleaved(f, g, Epsilon(1), cfg);
  EXPECT_FALSE(r.interleaved);
  if (r.early_exit) EXPECT_TRUE(*r.early_exit == "empty-targets" || *r.early_exit == "leaf-gap");
}

TEST(IsEpsInterleaved, BudgetIsAnError) {
  SearchConfig cfg;
  cfg.refinement = false;
  cfg.max_maps = 1;
  // f->g is chosen (2^2 == 2^2); the first assignment fails, so a second is needed.
  EXPECT_THROW(is_eps_interleaved(two_leaf(), wide_y(), Epsilon(1), cfg), SearchBudgetExceeded);
  cfg.max_maps = 0;
  EXPECT_THROW(is_eps_interleaved(two_leaf(), wide_y(), Epsilon(1), cfg), Error);
}

TEST(IsEpsInterleaved, WitnessInvariants) {
  mti::testing::Rng rng(2);
  for (int i = 0; i < 60; ++i) {
    const auto f = mti::testing::random_tree(rng, {1, 4, 8, 0, 20, 30});
    const auto g = mti::testing::random_tree(rng, {1, 4, 8, 0, 20, 30});
    for (const auto& eps : generate_candidates(f, g)) {
      const auto r = is_eps_interleaved(f, g, eps);
      if (!r.interleaved) continue;
      const auto& w = *r.witness;
      EXPECT_EQ(w.map.size(), w.aug.source.size());
      for (const auto& [u, t] : w.map.entries()) {
        EXPECT_EQ(w.aug.target.value(t), w.aug.source.value(u) + eps.value());
        if (auto p = w.aug.source.parent(u)) EXPECT_TRUE(w.aug.target.is_ancestor(w.map.at(*p), t));
      }
      std::uint64_t bound = 1;
      for (auto s : r.refined_target_sizes) bound *= s;
      EXPECT_LE(r.maps_enumerated, bound);
    }
  }
}

TEST(Distance, Examples) {
  EXPECT_EQ(compute_interleaving_distance(two_leaf(), chain15()).epsilon_star, Epsilon(1));
  EXPECT_EQ(compute_interleaving_distance(chain15(), two_leaf()).epsilon_star, Epsilon(1));
  EXPECT_EQ(compute_interleaving_distance(two_leaf(), two_leaf()).epsilon_star, Epsilon(0));
  const auto single = MergeTree::single(3);
  EXPECT_EQ(compute_interleaving_distance(single, MergeTree::single(5)).epsilon_star, Epsilon(2));
}

TEST(Distance, ReportContents) {
  const auto r = compute_interleaving_distance(two_leaf(), chain15());
  EXPECT_EQ(r.candidate_count, 4u);
  EXPECT_FALSE(r.trace.empty());
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(r.witness->epsilon, r.epsilon_star);
  std::uint64_t total = 0;
  for (const auto& t : r.trace) total += t.maps_enumerated;
  EXPECT_EQ(total, r.total_maps);
  bool star_seen = false;
  for (const auto& t : r.trace) {
    if (t.epsilon == r.epsilon_star) star_seen = t.verdict;
    if (t.epsilon < r.epsilon_star) EXPECT_FALSE(t.verdict);
  }
  EXPECT_TRUE(star_seen);
}

TEST(Distance, RefinementParallelAndSwapAgree) {
  mti::testing::Rng rng(13);
  for (int i = 0; i < 60; ++i) {
    const auto f = mti::testing::random_tree(rng, {1, 4, 8, 0, 20, 30});
    const auto g = mti::testing::random_tree(rng, {1, 4, 8, 0, 20, 30});
    SearchConfig off;
    off.refinement = false;
    SearchConfig par;
    par.parallel = true;
    par.threads = 3;
    const auto on = compute_interleaving_distance(f, g);
    EXPECT_EQ(compute_interleaving_distance(f, g, off).epsilon_star, on.epsilon_star);
    EXPECT_EQ(compute_interleaving_distance(f, g, par).epsilon_star, on.epsilon_star);
    EXPECT_EQ(compute_interleaving_distance(g, f).epsilon_star, on.epsilon_star);
    for (const auto& eps : generate_candidates(f, g)) {
      const auto a = is_eps_interleaved(f, g, eps);
      const auto b = is_eps_interleaved(f, g, eps, off);
      EXPECT_EQ(a.interleaved, b.interleaved);
      EXPECT_LE(a.maps_enumerated, b.maps_enumerated);
      EXPECT_LE(a.kappa(), b.kappa());
    }
  }
}

TEST(Distance, DeterministicWitnessIgnoresParallel) {
  SearchConfig cfg;
  cfg.parallel = true;
  cfg.deterministic_witness = true;
  const auto a = compute_interleaving_distance(two_leaf(), wide_y(), cfg);
  const auto b = compute_interleaving_distance(two_leaf(), wide_y());
  ASSERT_TRUE(a.witness && b.witness);
  EXPECT_EQ(a.witness->map, b.witness->map);
  EXPECT_EQ(a.total_maps, b.total_maps);
}

TEST(Distance, MonotoneVerdicts) {
  mti::testing::Rng rng(29);
  for (int i = 0; i < 40; ++i) {
    const auto f = mti::testing::random_tree(rng, {1, 4, 8, 0, 20, 30});
    const auto g = mti::testing::random_tree(rng, {1, 4, 8, 0, 20, 30});
    bool seen = false;
    for (const auto& eps : generate_candidates(f, g)) {
      const bool v = is_eps_interleaved(f, g, eps).interleaved;
      EXPECT_FALSE(seen && !v);
      seen = seen || v;
    }
    EXPECT_TRUE(seen);
  }
}

TEST(Distance, ParallelBudgetStillThrows) {
  SearchConfig cfg;
  cfg.parallel = true;
  cfg.threads = 2;
  cfg.refinement = false;
  cfg.max_maps = 1;
  EXPECT_THROW(is_eps_interleaved(two_leaf(), wide_y(), Epsilon(1), cfg), SearchBudgetExceeded);
  (void)N;
}
