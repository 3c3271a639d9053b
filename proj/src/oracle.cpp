#include "mti/oracle.hpp"

#include <algorithm>
#include <set>

namespace mti {

InstanceTooLarge::InstanceTooLarge(std::size_t eta_f, std::size_t eta_g)
    : Error("oracle accepts at most " + std::to_string(kOracleMaxLeavesF) + " and " +
            std::to_string(kOracleMaxLeavesG) + " leaves, got " + std::to_string(eta_f) + " and " +
            std::to_string(eta_g)) {}

bool OracleReport::monotone() const { return std::is_sorted(verdicts.begin(), verdicts.end()); }

namespace {

std::vector<NodeId> ancestors(const MergeTree& t, NodeId u) {
  std::vector<NodeId> out{u};
  while (auto p = t.parent(out.back())) out.push_back(*p);
  return out;
}

NodeId lowest_common_ancestor(const MergeTree& t, NodeId x, NodeId y) {
  const auto ax = ancestors(t, x);
  const auto up_y = ancestors(t, y);
  const std::set<NodeId> ay(up_y.begin(), up_y.end());
  for (NodeId a : ax) {
    if (ay.contains(a)) return a;
  }
  throw InternalError("nodes share no ancestor");
}

std::vector<Epsilon> candidate_values(const MergeTree& mf, const MergeTree& mg) {
  std::vector<Scalar> all;
  for (const auto& a : mf.nodes()) {
    for (const auto& b : mg.nodes()) all.push_back((a.value - b.value).abs());
  }
  for (const MergeTree* t : {&mf, &mg}) {
    const auto& ns = t->nodes();
    for (std::size_t i = 0; i < ns.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) all.push_back((ns[i].value - ns[j].value).abs().half());
    }
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  std::vector<Epsilon> out;
  for (auto& s : all) out.emplace_back(std::move(s));
  return out;
}

void require_no_crossing(const MergeTree& t, const std::set<Scalar>& levels, const char* which) {
  for (const auto& n : t.nodes()) {
    if (!n.parent) continue;
    const Scalar& lo = n.value;
    const Scalar& hi = t.value(*n.parent);
    auto it = levels.upper_bound(lo);
    if (it != levels.end() && *it < hi) {
      throw InternalError(std::string("oracle: ") + which + " edge above " + to_string(n.id) + " crosses level " +
                          it->to_string());
    }
  }
}

void verify_augmentation(const AugmentedPair& aug, const Epsilon& eps) {
  const Scalar& e = eps.value();
  if (aug.target.value(aug.target.root()) != aug.source.value(aug.source.root()) + e) {
    throw InternalError("oracle: augmented roots are not aligned");
  }
  std::set<Scalar> src_levels;
  std::set<Scalar> tgt_levels;
  for (const auto& n : aug.source.nodes()) {
    src_levels.insert(n.value);
    tgt_levels.insert(n.value + e);
  }
  for (const auto& n : aug.target.nodes()) {
    tgt_levels.insert(n.value);
    src_levels.insert(n.value - e);
  }
  require_no_crossing(aug.source, src_levels, "source");
  require_no_crossing(aug.target, tgt_levels, "target");
}

/// Maps every node on each leaf's root path to the ancestor of the leaf's
/// image at the shifted value. nullopt when no such ancestor exists or two
/// leaves force different images on a shared node.
std::optional<TreeMap> build_map(const AugmentedPair& aug, const std::vector<NodeId>& leaves,
                                 const std::vector<NodeId>& images, const Epsilon& eps) {
  TreeMap phi;
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    const auto up = ancestors(aug.target, images[i]);
    for (NodeId u : ancestors(aug.source, leaves[i])) {
      const Scalar want = aug.source.value(u) + eps.value();
      auto hit = std::find_if(up.begin(), up.end(), [&](NodeId t) { return aug.target.value(t) == want; });
      if (hit == up.end()) return std::nullopt;
      if (!phi.assign(u, *hit)) return std::nullopt;
    }
  }
  return phi;
}

bool check_direction(const MergeTree& src, const MergeTree& tgt, const Epsilon& eps, std::uint64_t& maps) {
  const AugmentedPair aug = extend_and_augment(src, tgt, eps);
  verify_augmentation(aug, eps);

  std::vector<NodeId> leaves;
  for (const auto& n : aug.source.nodes()) {
    if (n.children.empty()) leaves.push_back(n.id);
  }
  std::vector<std::vector<NodeId>> options;
  for (NodeId leaf : leaves) {
    const Scalar want = aug.source.value(leaf) + eps.value();
    std::vector<NodeId> opts;
    for (const auto& t : aug.target.nodes()) {
      if (t.value == want) opts.push_back(t.id);
    }
    if (opts.empty()) return false;
    options.push_back(std::move(opts));
  }

  std::vector<std::size_t> idx(leaves.size(), 0);
  std::vector<NodeId> images(leaves.size());
  while (true) {
    for (std::size_t i = 0; i < leaves.size(); ++i) images[i] = options[i][idx[i]];
    ++maps;
    auto phi = build_map(aug, leaves, images, eps);
    if (phi && oracle_eps_good_check(*phi, aug, eps)) return true;
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == options[k].size()) idx[k++] = 0;
    if (k == idx.size()) return false;
  }
}

}  // namespace

bool oracle_eps_good_check(const TreeMap& phi, const AugmentedPair& aug, const Epsilon& eps) {
  const MergeTree& src = aug.source;
  const MergeTree& tgt = aug.target;
  const Scalar limit = eps.twice();

  for (const auto& n : src.nodes()) {
    auto img = phi.find(n.id);
    if (!img || !tgt.contains(*img) || tgt.value(*img) != n.value + eps.value()) return false;
  }

  std::map<NodeId, std::vector<NodeId>> preimages;
  for (const auto& [u, t] : phi.entries()) preimages[t].push_back(u);
  for (const auto& [t, us] : preimages) {
    for (std::size_t i = 0; i < us.size(); ++i) {
      for (std::size_t j = i + 1; j < us.size(); ++j) {
        const NodeId c = lowest_common_ancestor(src, us[i], us[j]);
        if (src.value(c) - src.value(us[i]) > limit) return false;
      }
    }
  }

  for (const auto& w : tgt.nodes()) {
    if (phi.covers(w.id)) continue;
    NodeId up = w.id;
    while (!phi.covers(up)) {
      auto p = tgt.parent(up);
      if (!p) return false;
      up = *p;
    }
    if (tgt.value(up) - w.value > limit) return false;
  }
  return true;
}

bool oracle_is_eps_interleaved(const MergeTree& mf, const MergeTree& mg, const Epsilon& eps, std::uint64_t& maps) {
  return check_direction(mf, mg, eps, maps) || check_direction(mg, mf, eps, maps);
}

OracleReport oracle_distance(const MergeTree& mf, const MergeTree& mg) {
  const std::size_t eta_f = mf.leaves().size();
  const std::size_t eta_g = mg.leaves().size();
  if (eta_f > kOracleMaxLeavesF || eta_g > kOracleMaxLeavesG) throw InstanceTooLarge(eta_f, eta_g);

  OracleReport report;
  report.candidates = candidate_values(mf, mg);
  std::optional<Epsilon> star;
  for (const auto& eps : report.candidates) {
    const bool ok = oracle_is_eps_interleaved(mf, mg, eps, report.maps_checked);
    report.verdicts.push_back(ok);
    if (ok && !star) star = eps;
  }
  if (!star) throw InternalError("oracle: not interleaved at any candidate value");
  report.epsilon_star = *star;
  return report;
}

}  // namespace mti
