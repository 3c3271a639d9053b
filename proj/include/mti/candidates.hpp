#pragma once

#include <vector>

#include "mti/merge_tree.hpp"

namespace mti {

/// Non-negative exact shift value.
class Epsilon {
 public:
  /// Throws Error when `value` is negative.
  explicit Epsilon(Scalar value);
  Epsilon() = default;

  const Scalar& value() const { return value_; }
  Scalar twice() const { return value_ + value_; }

  friend bool operator==(const Epsilon&, const Epsilon&) = default;
  friend auto operator<=>(const Epsilon& a, const Epsilon& b) { return a.value_ <=> b.value_; }

 private:
  Scalar value_;
};

/// Sorted, duplicate-free candidate values for the distance: all cross-tree
/// value differences and all halved within-tree differences.
class CandidateList {
 public:
  CandidateList() = default;
  explicit CandidateList(std::vector<Epsilon> sorted_unique);

  const std::vector<Epsilon>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  const Epsilon& operator[](std::size_t i) const { return values_[i]; }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

 private:
  std::vector<Epsilon> values_;
};

CandidateList generate_candidates(const MergeTree& mf, const MergeTree& mg);

}  // namespace mti
