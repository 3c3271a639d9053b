#include "mti/merge_tree.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

namespace mti {

std::string to_string(NodeId id) { return std::to_string(id.value); }

std::string_view to_string(TreeRule rule) {
  switch (rule) {
    case TreeRule::Empty: return "Empty";
    case TreeRule::DuplicateId: return "DuplicateId";
    case TreeRule::NoRoot: return "NoRoot";
    case TreeRule::MultipleRoots: return "MultipleRoots";
    case TreeRule::OrphanNode: return "OrphanNode";
    case TreeRule::CycleDetected: return "CycleDetected";
    case TreeRule::NonIncreasingEdge: return "NonIncreasingEdge";
  }
  return "?";
}

namespace {

std::string describe(TreeRule rule, const std::optional<NodeId>& node) {
  std::string msg(to_string(rule));
  if (node) msg += " at node " + to_string(*node);
  return msg;
}

}  // namespace

TreeError::TreeError(TreeRule rule, std::optional<NodeId> node, const std::string& what)
    : Error(what), rule_(rule), node_(node) {}

TreeError::TreeError(TreeViolation violation)
    : TreeError(violation.rule, violation.node, describe(violation.rule, violation.node)) {}

UnknownNode::UnknownNode(NodeId id) : Error("unknown node " + to_string(id)) {}

TreeCheck validate_records(std::span<const NodeRecord> records) {
  auto fail = [](TreeRule rule, std::optional<NodeId> node) { return TreeCheck{TreeViolation{rule, node}}; };
  if (records.empty()) return fail(TreeRule::Empty, std::nullopt);

  std::unordered_map<NodeId, std::size_t> index;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!index.emplace(records[i].id, i).second) return fail(TreeRule::DuplicateId, records[i].id);
  }

  std::optional<NodeId> root;
  for (const auto& r : records) {
    if (r.parent) {
      if (!index.contains(*r.parent)) return fail(TreeRule::OrphanNode, r.id);
    } else if (root) {
      return fail(TreeRule::MultipleRoots, r.id);
    } else {
      root = r.id;
    }
  }
  if (!root) return fail(TreeRule::NoRoot, std::nullopt);

  // Reachability from the root: with one root and no dangling parents, any
  // unreachable node sits on (or hangs below) a parent cycle.
  std::unordered_map<NodeId, std::vector<NodeId>> kids;
  for (const auto& r : records) {
    if (r.parent) kids[*r.parent].push_back(r.id);
  }
  std::unordered_set<NodeId> seen{*root};
  std::deque<NodeId> queue{*root};
  while (!queue.empty()) {
    const NodeId cur = queue.front();
    queue.pop_front();
    if (auto it = kids.find(cur); it != kids.end()) {
      for (NodeId k : it->second) {
        if (seen.insert(k).second) queue.push_back(k);
      }
    }
  }
  for (const auto& r : records) {
    if (!seen.contains(r.id)) return fail(TreeRule::CycleDetected, r.id);
  }

  for (const auto& r : records) {
    if (r.parent && r.value >= records[index.at(*r.parent)].value) return fail(TreeRule::NonIncreasingEdge, r.id);
  }
  return {};
}

MergeTree MergeTree::from_records(std::span<const NodeRecord> records) {
  if (auto check = validate_records(records); !check) throw TreeError(*check.violation);

  std::vector<NodeRecord> sorted(records.begin(), records.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.id < b.id; });

  MergeTree tree;
  tree.nodes_.reserve(sorted.size());
  for (const auto& r : sorted) {
    tree.index_.emplace(r.id, tree.nodes_.size());
    tree.nodes_.push_back(MergeNode{r.id, r.value, r.parent, {}});
    if (!r.parent) tree.root_ = r.id;
  }
  for (const auto& r : sorted) {
    if (r.parent) tree.mutable_node(*r.parent).children.push_back(r.id);
  }
  for (auto& n : tree.nodes_) tree.sort_children(n);
  tree.next_id_ = sorted.back().id.value + 1;
  tree.rebuild_leaf_cache();
  return tree;
}

MergeTree MergeTree::single(Scalar value, NodeId id) {
  const NodeRecord r{id, std::move(value), std::nullopt};
  return from_records(std::span(&r, 1));
}

const MergeNode& MergeTree::node(NodeId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw UnknownNode(id);
  return nodes_[it->second];
}

MergeNode& MergeTree::mutable_node(NodeId id) {
  auto it = index_.find(id);
  if (it == index_.end()) throw UnknownNode(id);
  return nodes_[it->second];
}

void MergeTree::sort_children(MergeNode& n) {
  std::sort(n.children.begin(), n.children.end(), [this](NodeId a, NodeId b) {
    const auto& va = value(a);
    const auto& vb = value(b);
    return va != vb ? va < vb : a < b;
  });
}

void MergeTree::rebuild_leaf_cache() {
  leaf_cache_.clear();
  for (const auto& n : nodes_) {
    if (n.children.empty()) leaf_cache_.push_back(n.id);
  }
  std::sort(leaf_cache_.begin(), leaf_cache_.end(), [this](NodeId a, NodeId b) {
    const auto& va = value(a);
    const auto& vb = value(b);
    return va != vb ? va < vb : a < b;
  });
}

NodeId MergeTree::mint() { return NodeId{next_id_++}; }

std::vector<NodeId> MergeTree::node_ids() const {
  std::vector<NodeId> ids;
  ids.reserve(nodes_.size());
  for (const auto& n : nodes_) ids.push_back(n.id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::vector<NodeRecord> MergeTree::records() const {
  std::vector<NodeRecord> out;
  out.reserve(nodes_.size());
  for (NodeId id : node_ids()) {
    const auto& n = node(id);
    out.push_back(NodeRecord{n.id, n.value, n.parent});
  }
  return out;
}

bool MergeTree::is_ancestor(NodeId ancestor, NodeId node_id) const {
  const Scalar& target = value(ancestor);
  std::optional<NodeId> cur = node_id;
  while (cur) {
    if (*cur == ancestor) return true;
    if (value(*cur) >= target) return false;
    cur = parent(*cur);
  }
  return false;
}

NodeId MergeTree::insert_node_on_edge(NodeId child, const Scalar& v) {
  const auto& c = node(child);
  if (!c.parent) throw ValueNotInteriorToEdge("node " + to_string(child) + " is the root; it has no parent edge");
  const NodeId up = *c.parent;
  if (!(c.value < v && v < value(up))) {
    throw ValueNotInteriorToEdge("value " + v.to_string() + " is not strictly inside edge " + to_string(child) +
                                 " -> " + to_string(up));
  }
  const NodeId z = mint();
  index_.emplace(z, nodes_.size());
  nodes_.push_back(MergeNode{z, v, up, {child}});
  mutable_node(child).parent = z;
  auto& p = mutable_node(up);
  std::replace(p.children.begin(), p.children.end(), child, z);
  sort_children(p);
  return z;
}

NodeId MergeTree::add_root_above(const Scalar& v) {
  if (!(v > value(root_))) {
    throw TreeError(TreeRule::NonIncreasingEdge, root_, "new root value must exceed the current root value");
  }
  const NodeId z = mint();
  const NodeId old = root_;
  index_.emplace(z, nodes_.size());
  nodes_.push_back(MergeNode{z, v, std::nullopt, {old}});
  mutable_node(old).parent = z;
  root_ = z;
  return z;
}

TreeCheck validate_tree(const MergeTree& tree) {
  const auto recs = tree.records();
  if (auto check = validate_records(recs); !check) return check;

  auto fail = [](TreeRule rule, NodeId node) { return TreeCheck{TreeViolation{rule, node}}; };
  for (const auto& n : tree.nodes()) {
    for (NodeId k : n.children) {
      if (!tree.contains(k) || tree.parent(k) != n.id) return fail(TreeRule::OrphanNode, k);
    }
    if (n.parent) {
      const auto& sib = tree.children(*n.parent);
      if (std::count(sib.begin(), sib.end(), n.id) != 1) return fail(TreeRule::OrphanNode, n.id);
    }
  }
  std::vector<NodeId> expected;
  for (const auto& n : tree.nodes()) {
    if (n.children.empty()) expected.push_back(n.id);
  }
  std::sort(expected.begin(), expected.end(), [&](NodeId a, NodeId b) {
    return tree.value(a) != tree.value(b) ? tree.value(a) < tree.value(b) : a < b;
  });
  if (expected != tree.leaves()) return fail(TreeRule::OrphanNode, tree.root());
  return {};
}

bool same_tree(const MergeTree& a, const MergeTree& b) { return a.records() == b.records(); }

NodePath::NodePath(std::vector<NodeId> nodes) : nodes_(std::move(nodes)) {
  position_.reserve(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) position_.emplace(nodes_[i], i);
}

std::size_t NodePath::position(NodeId id) const {
  auto it = position_.find(id);
  if (it == position_.end()) throw UnknownNode(id);
  return it->second;
}

std::optional<NodeId> NodePath::parent_of(NodeId id) const {
  const auto i = position(id);
  if (i + 1 >= nodes_.size()) return std::nullopt;
  return nodes_[i + 1];
}

std::optional<NodeId> NodePath::child_of(NodeId id) const {
  const auto i = position(id);
  if (i == 0) return std::nullopt;
  return nodes_[i - 1];
}

NodePath node_to_root_path(const MergeTree& tree, NodeId u) {
  std::vector<NodeId> nodes;
  std::optional<NodeId> cur = u;
  while (cur) {
    nodes.push_back(*cur);
    cur = tree.parent(*cur);
  }
  return NodePath(std::move(nodes));
}

NodeId find_lca(const MergeTree& tree, NodeId u, NodeId v) {
  const auto pu = node_to_root_path(tree, u).nodes();
  const auto pv = node_to_root_path(tree, v).nodes();
  auto iu = pu.rbegin();
  auto iv = pv.rbegin();
  NodeId lca = *iu;
  for (; iu != pu.rend() && iv != pv.rend() && *iu == *iv; ++iu, ++iv) lca = *iu;
  return lca;
}

const std::vector<NodeId>& leaves(const MergeTree& tree) { return tree.leaves(); }

AncestorLocus ancestor_at_value(const MergeTree& tree, NodeId u, const Scalar& target) {
  if (target < tree.value(u) || target > tree.value(tree.root())) {
    throw TargetOutOfRange("value " + target.to_string() + " is outside [" + tree.value(u).to_string() + ", " +
                           tree.value(tree.root()).to_string() + "]");
  }
  NodeId cur = u;
  while (tree.value(cur) != target) {
    const NodeId up = *tree.parent(cur);
    if (tree.value(up) > target) return EdgeLocus{cur, up, target};
    cur = up;
  }
  return cur;
}

NodeId insert_node_on_edge(MergeTree& tree, NodeId child, const Scalar& value) {
  return tree.insert_node_on_edge(child, value);
}

}  // namespace mti
