#pragma once

#include <cstdint>
#include <vector>

#include "mti/good_map.hpp"

namespace mti {

/// Brute-force verifier for small instances. Shares only the tree model and
/// the augmentation step with the engine, and re-checks the augmentation.

class InstanceTooLarge : public Error {
 public:
  InstanceTooLarge(std::size_t eta_f, std::size_t eta_g);
};

inline constexpr std::size_t kOracleMaxLeavesF = 4;
inline constexpr std::size_t kOracleMaxLeavesG = 5;

struct OracleReport {
  Epsilon epsilon_star;
  std::vector<Epsilon> candidates;  // ascending
  std::vector<bool> verdicts;       // verdicts[i] for candidates[i]
  std::uint64_t maps_checked = 0;

  bool monotone() const;
};

/// Checks a map against the definition directly: range shift at every node,
/// equal-value nodes with equal images meet within 2 epsilon, and every
/// uncovered target node has a covered ancestor within 2 epsilon.
bool oracle_eps_good_check(const TreeMap& phi, const AugmentedPair& aug, const Epsilon& eps);

/// Exhaustive check of one epsilon, both directions. `maps` accumulates.
bool oracle_is_eps_interleaved(const MergeTree& mf, const MergeTree& mg, const Epsilon& eps, std::uint64_t& maps);

/// Linear scan over every candidate value. Throws InstanceTooLarge when
/// mf has more than 4 leaves or mg more than 5.
OracleReport oracle_distance(const MergeTree& mf, const MergeTree& mg);

}  // namespace mti
