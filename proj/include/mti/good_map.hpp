#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "mti/augment.hpp"

namespace mti {

class PathLengthMismatch : public Error {
 public:
  using Error::Error;
};

/// A broken internal invariant. Never expected on valid inputs.
class InternalError : public Error {
 public:
  using Error::Error;
};

/// Leaf of the source tree -> node of the target tree.
using LeafAssignment = std::map<NodeId, NodeId>;

/// Zip of one source leaf-to-root path with one target node-to-root path.
struct PathMap {
  std::vector<NodeId> source;
  std::vector<NodeId> image;  // image[k] is the image of source[k]

  std::size_t size() const { return source.size(); }
};

/// Total map from source nodes to target nodes, with its image cached.
class TreeMap {
 public:
  /// Returns false (and leaves the map unchanged) if `u` already maps elsewhere.
  bool assign(NodeId u, NodeId target);

  std::optional<NodeId> find(NodeId u) const;
  /// Throws UnknownNode if `u` is not in the domain.
  NodeId at(NodeId u) const;
  const std::map<NodeId, NodeId>& entries() const { return map_; }
  const std::set<NodeId>& image() const { return image_; }
  bool covers(NodeId target) const { return image_.contains(target); }
  std::size_t size() const { return map_.size(); }

  friend bool operator==(const TreeMap&, const TreeMap&) = default;

 private:
  std::map<NodeId, NodeId> map_;
  std::set<NodeId> image_;
};

/// First equal-value node pair below a leaf pair's LCA whose gap to the LCA
/// exceeds 2 epsilon. `u_r` lies on the first leaf's path, `u_s` on the second.
struct TwoEpsilonPair {
  NodeId u_r;
  NodeId u_s;
  std::size_t pos_r = 0;  // index of u_r on the first leaf's path
  std::size_t pos_s = 0;

  friend bool operator==(const TwoEpsilonPair&, const TwoEpsilonPair&) = default;
};

/// LCA and 2-epsilon-pair data for one ordered leaf pair (a, b).
struct LeafPairInfo {
  NodeId lca;
  std::size_t lca_pos_a = 0;  // index of the LCA on a's leaf-to-root path
  std::size_t lca_pos_b = 0;
  std::optional<TwoEpsilonPair> pair;  // u_r on a's path, u_s on b's path
};

/// Dense tables over the source leaves (in (value, id) order). Stored for
/// a < b; `get` orients the entry for either argument order.
class PairTables {
 public:
  PairTables() = default;
  PairTables(const MergeTree& source, const Epsilon& eps);

  const std::vector<NodeId>& leaves() const { return leaves_; }
  std::size_t leaf_count() const { return leaves_.size(); }
  const NodePath& path(std::size_t leaf_index) const { return paths_[leaf_index]; }
  std::size_t index_of(NodeId leaf) const;

  /// Requires a != b.
  LeafPairInfo get(std::size_t a, std::size_t b) const;
  NodeId lca(NodeId a, NodeId b) const;
  std::optional<TwoEpsilonPair> two_eps_pair(NodeId a, NodeId b) const;

 private:
  const LeafPairInfo& stored(std::size_t a, std::size_t b) const;

  std::vector<NodeId> leaves_;
  std::vector<NodePath> paths_;
  std::vector<LeafPairInfo> entries_;  // row-major upper triangle
};

PairTables build_pair_tables(const AugmentedPair& aug, const Epsilon& eps);

/// Synchronized descent below the LCA of the two leaf-to-root paths.
std::optional<TwoEpsilonPair> find_two_eps_pair(const MergeTree& tree, const NodePath& pa, const NodePath& pb,
                                                NodeId lca, const Epsilon& eps);

/// Target-tree nodes at exactly `level`, ids ascending.
std::vector<NodeId> target_nodes(const AugmentedPair& aug, const Scalar& level);

/// Throws PathLengthMismatch when the paths differ in length.
PathMap extend_assignment(NodeId u, NodeId target, const NodePath& p, const NodePath& p_prime);

/// Union of the per-leaf path maps, or nullopt when two path maps disagree at
/// their leaves' LCA. Throws InternalError if LCA agreement holds but the
/// union is still inconsistent somewhere.
std::optional<TreeMap> construct_map(const LeafAssignment& phi, const AugmentedPair& aug, const PairTables& tables);

/// 2-epsilon-pair separation for every leaf pair, and closeness of every
/// uncovered target leaf to its nearest covered ancestor.
bool is_eps_good(const TreeMap& phi, const AugmentedPair& aug, const PairTables& tables, const Epsilon& eps);

/// Targets of leaf u_k that survive pairwise compatibility with every other leaf.
std::vector<NodeId> refined_target_nodes(NodeId u_k, const AugmentedPair& aug, const PairTables& tables,
                                         const Epsilon& eps);

/// Precomputed, immutable state for enumerating leaf assignments of one
/// augmented pair. Shareable across threads.
class SearchContext {
 public:
  SearchContext(const AugmentedPair& aug, const Epsilon& eps);
  SearchContext(const AugmentedPair& aug, PairTables tables, const Epsilon& eps);

  const AugmentedPair& aug() const { return *aug_; }
  const PairTables& tables() const { return tables_; }
  const Epsilon& epsilon() const { return eps_; }
  std::size_t leaf_count() const { return tables_.leaf_count(); }

  /// Unrefined targets of leaf i, ids ascending.
  const std::vector<NodeId>& targets(std::size_t leaf) const { return targets_[leaf]; }
  /// Indices into targets(leaf) kept by refinement.
  std::vector<std::size_t> refined(std::size_t leaf) const;

  /// Per-assignment scratch space; one per worker.
  struct Scratch {
    std::vector<char> covered;
  };
  Scratch make_scratch() const;

  /// choice[i] indexes targets(i). Equivalent to construct_map followed by
  /// is_eps_good, without materializing the map.
  bool accepts(const std::vector<std::size_t>& choice, Scratch& scratch) const;
  bool well_defined(const std::vector<std::size_t>& choice) const;

  LeafAssignment assignment(const std::vector<std::size_t>& choice) const;

 private:
  bool compatible(std::size_t a, std::size_t ta, std::size_t b, std::size_t tb) const;
  std::size_t dense(NodeId target) const;

  const AugmentedPair* aug_;
  Epsilon eps_;
  PairTables tables_;
  std::vector<std::vector<NodeId>> targets_;
  // target_paths_[leaf][t] = dense ids of the path from targets_[leaf][t] to the root
  std::vector<std::vector<std::vector<std::size_t>>> target_paths_;
  std::vector<NodeId> target_ids_;               // dense -> id
  std::unordered_map<NodeId, std::size_t> dense_;  // id -> dense
  std::vector<std::size_t> target_parent_;         // dense; root maps to itself
  std::vector<Scalar> target_value_;
  std::vector<std::size_t> target_leaves_;         // dense
};

}  // namespace mti
