#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "mti/scalar.hpp"

namespace mti {

/// Stable node identifier, unique within one tree and never reused.
struct NodeId {
  std::uint64_t value = 0;

  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

std::string to_string(NodeId id);

}  // namespace mti

template <>
struct std::hash<mti::NodeId> {
  std::size_t operator()(mti::NodeId id) const noexcept { return std::hash<std::uint64_t>{}(id.value); }
};

namespace mti {

/// One row of a tree as it is read or written: no derived data.
struct NodeRecord {
  NodeId id;
  Scalar value;
  std::optional<NodeId> parent;

  friend bool operator==(const NodeRecord&, const NodeRecord&) = default;
};

struct MergeNode {
  NodeId id;
  Scalar value;
  std::optional<NodeId> parent;
  std::vector<NodeId> children;  // sorted by (value, id)
};

enum class TreeRule {
  Empty,
  DuplicateId,
  NoRoot,
  MultipleRoots,
  OrphanNode,        // parent id that is not in the tree
  CycleDetected,     // node not reachable from the root
  NonIncreasingEdge  // value(child) >= value(parent)
};

std::string_view to_string(TreeRule rule);

struct TreeViolation {
  TreeRule rule;
  std::optional<NodeId> node;
};

/// Verdict of validate_tree / validate_records. `violation` names the first
/// offending node and rule when the check fails.
struct TreeCheck {
  std::optional<TreeViolation> violation;

  bool ok() const { return !violation.has_value(); }
  explicit operator bool() const { return ok(); }
};

class TreeError : public Error {
 public:
  TreeError(TreeRule rule, std::optional<NodeId> node, const std::string& what);
  TreeError(TreeViolation violation);

  TreeRule rule() const { return rule_; }
  const std::optional<NodeId>& node() const { return node_; }

 private:
  TreeRule rule_;
  std::optional<NodeId> node_;
};

class UnknownNode : public Error {
 public:
  explicit UnknownNode(NodeId id);
};

TreeCheck validate_records(std::span<const NodeRecord> records);

/// Rooted tree whose node values strictly increase toward the root.
///
/// Instances are always valid: the only constructor validates, and the two
/// mutators (`insert_node_on_edge`, `add_root_above`) preserve every invariant.
class MergeTree {
 public:
  /// Throws TreeError describing the first violated rule.
  static MergeTree from_records(std::span<const NodeRecord> records);
  static MergeTree single(Scalar value, NodeId id = NodeId{0});

  NodeId root() const { return root_; }
  std::size_t size() const { return nodes_.size(); }
  bool contains(NodeId id) const { return index_.contains(id); }

  const MergeNode& node(NodeId id) const;
  const Scalar& value(NodeId id) const { return node(id).value; }
  std::optional<NodeId> parent(NodeId id) const { return node(id).parent; }
  const std::vector<NodeId>& children(NodeId id) const { return node(id).children; }
  bool is_leaf(NodeId id) const { return node(id).children.empty(); }

  /// Leaves sorted by (value, id) ascending.
  const std::vector<NodeId>& leaves() const { return leaf_cache_; }
  /// All ids, ascending.
  std::vector<NodeId> node_ids() const;
  /// Records sorted by id.
  std::vector<NodeRecord> records() const;
  /// Node storage, in insertion order.
  const std::vector<MergeNode>& nodes() const { return nodes_; }

  /// True when `ancestor` lies on the path from `node` to the root (inclusive).
  bool is_ancestor(NodeId ancestor, NodeId node) const;

  /// Splits the edge child -> parent(child) with a fresh degree-2 node.
  /// Requires value(child) < value < value(parent(child)).
  NodeId insert_node_on_edge(NodeId child, const Scalar& value);

  /// Puts a fresh root above the current one. Requires value > value(root).
  NodeId add_root_above(const Scalar& value);

  NodeId next_id() const { return NodeId{next_id_}; }

 private:
  MergeTree() = default;
  MergeNode& mutable_node(NodeId id);
  void sort_children(MergeNode& n);
  void rebuild_leaf_cache();
  NodeId mint();

  std::vector<MergeNode> nodes_;
  std::unordered_map<NodeId, std::size_t> index_;
  std::vector<NodeId> leaf_cache_;
  NodeId root_{};
  std::uint64_t next_id_ = 0;
};

/// Re-checks every MergeTree invariant, including the derived tables.
TreeCheck validate_tree(const MergeTree& tree);

/// Structural and value equality (same ids, values, parents).
bool same_tree(const MergeTree& a, const MergeTree& b);

/// Path from a node to the root, inclusive, with O(1) position lookup.
class NodePath {
 public:
  NodePath() = default;
  explicit NodePath(std::vector<NodeId> nodes);

  const std::vector<NodeId>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  NodeId operator[](std::size_t i) const { return nodes_[i]; }
  NodeId front() const { return nodes_.front(); }
  NodeId back() const { return nodes_.back(); }

  bool contains(NodeId id) const { return position_.contains(id); }
  /// Index of `id` in the path; throws UnknownNode if absent.
  std::size_t position(NodeId id) const;
  std::optional<NodeId> parent_of(NodeId id) const;
  std::optional<NodeId> child_of(NodeId id) const;

 private:
  std::vector<NodeId> nodes_;
  std::unordered_map<NodeId, std::size_t> position_;
};

NodePath node_to_root_path(const MergeTree& tree, NodeId u);

/// Least common ancestor, by walking both root-to-node paths in lockstep.
NodeId find_lca(const MergeTree& tree, NodeId u, NodeId v);

const std::vector<NodeId>& leaves(const MergeTree& tree);

struct EdgeLocus {
  NodeId child;
  NodeId parent;
  Scalar value;

  friend bool operator==(const EdgeLocus&, const EdgeLocus&) = default;
};

/// A point of the tree: either a node, or a point strictly inside an edge.
using AncestorLocus = std::variant<NodeId, EdgeLocus>;

class TargetOutOfRange : public Error {
 public:
  using Error::Error;
};

/// The unique point with value `target` on the path from u to the root.
AncestorLocus ancestor_at_value(const MergeTree& tree, NodeId u, const Scalar& target);

class ValueNotInteriorToEdge : public Error {
 public:
  using Error::Error;
};

NodeId insert_node_on_edge(MergeTree& tree, NodeId child, const Scalar& value);

}  // namespace mti
