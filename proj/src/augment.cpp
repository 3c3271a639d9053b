#include "mti/augment.hpp"

#include <algorithm>
#include <set>

namespace mti {

std::pair<MergeTree, MergeTree> extend_trees(const MergeTree& mf, const MergeTree& mg, const Epsilon& eps) {
  MergeTree f = mf;
  MergeTree g = mg;
  const Scalar aligned = f.value(f.root()) + eps.value();
  const Scalar& top_g = g.value(g.root());
  if (top_g < aligned) {
    g.add_root_above(aligned);
  } else if (top_g > aligned) {
    f.add_root_above(top_g - eps.value());
  }
  return {std::move(f), std::move(g)};
}

LevelTable build_level_table(const MergeTree& tree) {
  LevelTable table;
  for (const auto& n : tree.nodes()) table[n.value].push_back(n.id);
  for (auto& [_, ids] : table) std::sort(ids.begin(), ids.end());
  return table;
}

namespace {

void insert_levels(MergeTree& tree, const std::set<Scalar>& levels) {
  std::vector<NodeId> lower_ends;
  for (const auto& n : tree.nodes()) {
    if (n.parent) lower_ends.push_back(n.id);
  }
  for (NodeId child : lower_ends) {
    const Scalar lo = tree.value(child);
    const Scalar hi = tree.value(*tree.parent(child));
    NodeId below = child;
    for (auto it = levels.upper_bound(lo); it != levels.end() && *it < hi; ++it) {
      below = tree.insert_node_on_edge(below, *it);
    }
  }
}

std::unordered_map<NodeId, std::optional<NodeId>> identity_origin(const MergeTree& aug, const MergeTree& input) {
  std::unordered_map<NodeId, std::optional<NodeId>> origin;
  for (const auto& n : aug.nodes()) {
    origin.emplace(n.id, input.contains(n.id) ? std::optional<NodeId>(n.id) : std::nullopt);
  }
  return origin;
}

}  // namespace

AugmentedPair augment(const MergeTree& mf, const MergeTree& mg, const Epsilon& eps) {
  const Scalar& e = eps.value();
  if (mg.value(mg.root()) != mf.value(mf.root()) + e) {
    throw Error("augment requires aligned roots; call extend_trees first");
  }
  std::set<Scalar> f_levels;
  std::set<Scalar> g_levels;
  for (const auto& n : mf.nodes()) {
    f_levels.insert(n.value);
    g_levels.insert(n.value + e);
  }
  for (const auto& n : mg.nodes()) {
    g_levels.insert(n.value);
    f_levels.insert(n.value - e);
  }

  AugmentedPair out{mf, mg, eps, {}, {}, {}, {}};
  insert_levels(out.source, f_levels);
  insert_levels(out.target, g_levels);
  out.source_origin = identity_origin(out.source, mf);
  out.target_origin = identity_origin(out.target, mg);
  out.source_levels = build_level_table(out.source);
  out.target_levels = build_level_table(out.target);
  return out;
}

AugmentedPair extend_and_augment(const MergeTree& mf, const MergeTree& mg, const Epsilon& eps) {
  auto [f, g] = extend_trees(mf, mg, eps);
  AugmentedPair out = augment(f, g, eps);
  out.source_origin = identity_origin(out.source, mf);
  out.target_origin = identity_origin(out.target, mg);
  return out;
}

}  // namespace mti
