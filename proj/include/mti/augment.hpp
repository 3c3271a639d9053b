#pragma once

#include <map>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mti/candidates.hpp"
#include "mti/merge_tree.hpp"

namespace mti {

/// value -> node ids at exactly that value, ids ascending.
using LevelTable = std::map<Scalar, std::vector<NodeId>>;

/// The two trees after root alignment and level augmentation for one
/// epsilon. `source` is the tree whose leaves are assigned; `target` is
/// the tree they are mapped into (target value = source value + epsilon).
struct AugmentedPair {
  MergeTree source;
  MergeTree target;
  Epsilon epsilon;
  /// Node id -> id in the caller's input tree; nullopt for inserted nodes and
  /// for a root added by extension.
  std::unordered_map<NodeId, std::optional<NodeId>> source_origin;
  std::unordered_map<NodeId, std::optional<NodeId>> target_origin;
  LevelTable source_levels;
  LevelTable target_levels;
};

/// Root alignment: afterwards value(root(mg)) == value(root(mf)) + eps.
std::pair<MergeTree, MergeTree> extend_trees(const MergeTree& mf, const MergeTree& mg, const Epsilon& eps);

/// Inserts degree-2 nodes so that every node value h of either tree (taken
/// as h in mf-coordinates and h + eps in mg-coordinates) hosts a node on
/// every edge crossing it. Requires already-aligned roots.
AugmentedPair augment(const MergeTree& mf, const MergeTree& mg, const Epsilon& eps);

/// extend_trees followed by augment, with origins relative to the inputs.
AugmentedPair extend_and_augment(const MergeTree& mf, const MergeTree& mg, const Epsilon& eps);

LevelTable build_level_table(const MergeTree& tree);

}  // namespace mti
