#include "mti/good_map.hpp"

#include <algorithm>

namespace mti {

bool TreeMap::assign(NodeId u, NodeId target) {
  auto [it, inserted] = map_.emplace(u, target);
  if (!inserted) return it->second == target;
  image_.insert(target);
  return true;
}

std::optional<NodeId> TreeMap::find(NodeId u) const {
  auto it = map_.find(u);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

NodeId TreeMap::at(NodeId u) const {
  auto it = map_.find(u);
  if (it == map_.end()) throw UnknownNode(u);
  return it->second;
}

namespace {

std::size_t triangle_index(std::size_t a, std::size_t b, std::size_t n) {
  return a * n - a * (a + 1) / 2 + (b - a - 1);
}

}  // namespace

std::optional<TwoEpsilonPair> find_two_eps_pair(const MergeTree& tree, const NodePath& pa, const NodePath& pb,
                                                NodeId lca, const Epsilon& eps) {
  const Scalar limit = eps.twice();
  const Scalar& top = tree.value(lca);
  std::size_t a = pa.position(lca);
  std::size_t b = pb.position(lca);
  while (a > 0 && b > 0) {
    const Scalar& va = tree.value(pa[a - 1]);
    const Scalar& vb = tree.value(pb[b - 1]);
    if (va == vb) {
      if (top - va > limit) return TwoEpsilonPair{pa[a - 1], pb[b - 1], a - 1, b - 1};
      --a;
      --b;
    } else if (va > vb) {
      --a;
    } else {
      --b;
    }
  }
  return std::nullopt;
}

PairTables::PairTables(const MergeTree& source, const Epsilon& eps) : leaves_(source.leaves()) {
  const std::size_t n = leaves_.size();
  paths_.reserve(n);
  for (NodeId leaf : leaves_) paths_.push_back(node_to_root_path(source, leaf));
  entries_.reserve(n * (n - 1) / 2);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      LeafPairInfo info;
      info.lca = find_lca(source, leaves_[a], leaves_[b]);
      info.lca_pos_a = paths_[a].position(info.lca);
      info.lca_pos_b = paths_[b].position(info.lca);
      info.pair = find_two_eps_pair(source, paths_[a], paths_[b], info.lca, eps);
      entries_.push_back(std::move(info));
    }
  }
}

std::size_t PairTables::index_of(NodeId leaf) const {
  for (std::size_t i = 0; i < leaves_.size(); ++i) {
    if (leaves_[i] == leaf) return i;
  }
  throw UnknownNode(leaf);
}

const LeafPairInfo& PairTables::stored(std::size_t a, std::size_t b) const {
  return entries_[triangle_index(a, b, leaves_.size())];
}

LeafPairInfo PairTables::get(std::size_t a, std::size_t b) const {
  if (a == b) throw Error("pair tables have no entry for a leaf with itself");
  if (a < b) return stored(a, b);
  LeafPairInfo out = stored(b, a);
  std::swap(out.lca_pos_a, out.lca_pos_b);
  if (out.pair) {
    std::swap(out.pair->u_r, out.pair->u_s);
    std::swap(out.pair->pos_r, out.pair->pos_s);
  }
  return out;
}

NodeId PairTables::lca(NodeId a, NodeId b) const { return get(index_of(a), index_of(b)).lca; }

std::optional<TwoEpsilonPair> PairTables::two_eps_pair(NodeId a, NodeId b) const {
  return get(index_of(a), index_of(b)).pair;
}

PairTables build_pair_tables(const AugmentedPair& aug, const Epsilon& eps) { return PairTables(aug.source, eps); }

std::vector<NodeId> target_nodes(const AugmentedPair& aug, const Scalar& level) {
  auto it = aug.target_levels.find(level);
  if (it == aug.target_levels.end()) return {};
  return it->second;
}

PathMap extend_assignment(NodeId u, NodeId target, const NodePath& p, const NodePath& p_prime) {
  if (p.size() == 0 || p.front() != u) throw Error("path does not start at " + to_string(u));
  if (p_prime.size() == 0 || p_prime.front() != target) throw Error("path does not start at " + to_string(target));
  if (p.size() != p_prime.size()) {
    throw PathLengthMismatch("path of " + to_string(u) + " has " + std::to_string(p.size()) + " nodes, path of " +
                             to_string(target) + " has " + std::to_string(p_prime.size()));
  }
  return PathMap{p.nodes(), p_prime.nodes()};
}

std::optional<TreeMap> construct_map(const LeafAssignment& phi, const AugmentedPair& aug, const PairTables& tables) {
  const std::size_t n = tables.leaf_count();
  std::vector<PathMap> maps;
  maps.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const NodeId leaf = tables.leaves()[i];
    auto it = phi.find(leaf);
    if (it == phi.end()) throw Error("leaf assignment misses leaf " + to_string(leaf));
    maps.push_back(extend_assignment(leaf, it->second, tables.path(i), node_to_root_path(aug.target, it->second)));
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const LeafPairInfo info = tables.get(a, b);
      if (maps[a].image[info.lca_pos_a] != maps[b].image[info.lca_pos_b]) return std::nullopt;
    }
  }
  TreeMap out;
  for (const auto& pm : maps) {
    for (std::size_t k = 0; k < pm.size(); ++k) {
      if (!out.assign(pm.source[k], pm.image[k])) {
        throw InternalError("path maps agree at every leaf LCA but conflict at " + to_string(pm.source[k]));
      }
    }
  }
  if (out.size() != aug.source.size()) throw InternalError("constructed map is not total on the source tree");
  return out;
}

bool is_eps_good(const TreeMap& phi, const AugmentedPair& aug, const PairTables& tables, const Epsilon& eps) {
  const std::size_t n = tables.leaf_count();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const LeafPairInfo info = tables.get(a, b);
      if (info.pair && phi.at(info.pair->u_r) == phi.at(info.pair->u_s)) return false;
    }
  }
  const Scalar limit = eps.twice();
  for (NodeId w : aug.target.leaves()) {
    if (phi.covers(w)) continue;
    NodeId up = w;
    while (!phi.covers(up)) {
      auto p = aug.target.parent(up);
      if (!p) throw InternalError("target root is not in the image");
      up = *p;
    }
    if (aug.target.value(up) - aug.target.value(w) > limit) return false;
  }
  return true;
}

std::vector<NodeId> refined_target_nodes(NodeId u_k, const AugmentedPair& aug, const PairTables& tables,
                                         const Epsilon& eps) {
  const SearchContext ctx(aug, tables, eps);
  const std::size_t k = tables.index_of(u_k);
  std::vector<NodeId> out;
  for (std::size_t t : ctx.refined(k)) out.push_back(ctx.targets(k)[t]);
  return out;
}

SearchContext::SearchContext(const AugmentedPair& aug, const Epsilon& eps)
    : SearchContext(aug, build_pair_tables(aug, eps), eps) {}

SearchContext::SearchContext(const AugmentedPair& aug, PairTables tables, const Epsilon& eps)
    : aug_(&aug), eps_(eps), tables_(std::move(tables)) {
  const MergeTree& tgt = aug.target;
  target_ids_ = tgt.node_ids();
  for (std::size_t i = 0; i < target_ids_.size(); ++i) dense_.emplace(target_ids_[i], i);
  target_parent_.resize(target_ids_.size());
  target_value_.reserve(target_ids_.size());
  for (std::size_t i = 0; i < target_ids_.size(); ++i) {
    const auto p = tgt.parent(target_ids_[i]);
    target_parent_[i] = p ? dense_.at(*p) : i;
    target_value_.push_back(tgt.value(target_ids_[i]));
  }
  for (NodeId w : tgt.leaves()) target_leaves_.push_back(dense_.at(w));

  const std::size_t n = tables_.leaf_count();
  targets_.resize(n);
  target_paths_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const NodeId leaf = tables_.leaves()[i];
    targets_[i] = target_nodes(aug, aug.source.value(leaf) + eps.value());
    for (NodeId t : targets_[i]) {
      const PathMap pm = extend_assignment(leaf, t, tables_.path(i), node_to_root_path(tgt, t));
      std::vector<std::size_t> path;
      path.reserve(pm.size());
      for (NodeId x : pm.image) path.push_back(dense_.at(x));
      target_paths_[i].push_back(std::move(path));
    }
  }
}

std::size_t SearchContext::dense(NodeId target) const { return dense_.at(target); }

bool SearchContext::compatible(std::size_t a, std::size_t ta, std::size_t b, std::size_t tb) const {
  const LeafPairInfo info = tables_.get(a, b);
  const auto& pa = target_paths_[a][ta];
  const auto& pb = target_paths_[b][tb];
  if (pa[info.lca_pos_a] != pb[info.lca_pos_b]) return false;
  return !info.pair || pa[info.pair->pos_r] != pb[info.pair->pos_s];
}

std::vector<std::size_t> SearchContext::refined(std::size_t k) const {
  std::vector<std::size_t> out;
  const std::size_t n = leaf_count();
  for (std::size_t tk = 0; tk < targets_[k].size(); ++tk) {
    bool keep = true;
    for (std::size_t l = 0; l < n && keep; ++l) {
      if (l == k) continue;
      bool some = false;
      for (std::size_t tl = 0; tl < targets_[l].size() && !some; ++tl) some = compatible(k, tk, l, tl);
      keep = some;
    }
    if (keep) out.push_back(tk);
  }
  return out;
}

SearchContext::Scratch SearchContext::make_scratch() const { return Scratch{std::vector<char>(target_ids_.size())}; }

bool SearchContext::well_defined(const std::vector<std::size_t>& choice) const {
  const std::size_t n = leaf_count();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const LeafPairInfo info = tables_.get(a, b);
      if (target_paths_[a][choice[a]][info.lca_pos_a] != target_paths_[b][choice[b]][info.lca_pos_b]) return false;
    }
  }
  return true;
}

bool SearchContext::accepts(const std::vector<std::size_t>& choice, Scratch& scratch) const {
  const std::size_t n = leaf_count();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (!compatible(a, choice[a], b, choice[b])) return false;
    }
  }
  auto& covered = scratch.covered;
  std::fill(covered.begin(), covered.end(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t x : target_paths_[i][choice[i]]) covered[x] = 1;
  }
  const Scalar limit = eps_.twice();
  for (std::size_t w : target_leaves_) {
    if (covered[w]) continue;
    std::size_t up = w;
    while (!covered[up]) {
      if (target_parent_[up] == up) throw InternalError("target root is not in the image");
      up = target_parent_[up];
    }
    if (target_value_[up] - target_value_[w] > limit) return false;
  }
  return true;
}

LeafAssignment SearchContext::assignment(const std::vector<std::size_t>& choice) const {
  LeafAssignment out;
  for (std::size_t i = 0; i < leaf_count(); ++i) out.emplace(tables_.leaves()[i], targets_[i][choice[i]]);
  return out;
}

}  // namespace mti
