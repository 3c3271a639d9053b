#include "mti/candidates.hpp"

#include <algorithm>
#include <set>

namespace mti {

Epsilon::Epsilon(Scalar value) : value_(std::move(value)) {
  if (value_.is_negative()) throw Error("epsilon must be non-negative, got " + value_.to_string());
}

CandidateList::CandidateList(std::vector<Epsilon> sorted_unique) : values_(std::move(sorted_unique)) {
  if (std::adjacent_find(values_.begin(), values_.end(), std::greater_equal<>{}) != values_.end()) {
    throw Error("candidate list must be strictly ascending");
  }
}

namespace {

std::vector<Scalar> node_values(const MergeTree& t) {
  std::vector<Scalar> out;
  out.reserve(t.size());
  for (const auto& n : t.nodes()) out.push_back(n.value);
  return out;
}

}  // namespace

CandidateList generate_candidates(const MergeTree& mf, const MergeTree& mg) {
  const auto vf = node_values(mf);
  const auto vg = node_values(mg);
  std::set<Scalar> pi;
  for (const auto& a : vf) {
    for (const auto& b : vg) pi.insert((a - b).abs());
  }
  for (const auto* vals : {&vf, &vg}) {
    for (std::size_t i = 0; i < vals->size(); ++i) {
      for (std::size_t j = i + 1; j < vals->size(); ++j) pi.insert(((*vals)[i] - (*vals)[j]).abs().half());
    }
  }
  std::vector<Epsilon> out;
  out.reserve(pi.size());
  for (const auto& s : pi) out.emplace_back(s);
  return CandidateList(std::move(out));
}

}  // namespace mti
