#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mti/good_map.hpp"

namespace mti {

class SearchBudgetExceeded : public Error {
 public:
  SearchBudgetExceeded(std::uint64_t budget, const Epsilon& eps);

  std::uint64_t budget() const { return budget_; }

 private:
  std::uint64_t budget_;
};

struct SearchConfig {
  bool refinement = true;
  std::uint64_t max_maps = 10'000'000;
  bool parallel = false;
  bool deterministic_witness = false;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Throws Error when the config is unusable (max_maps == 0).
void validate(const SearchConfig& cfg);

enum class Direction { FToG, GToF };

std::string_view to_string(Direction d);

/// f->g iff eta_g^eta_f <= eta_f^eta_g, exactly.
Direction choose_direction(const MergeTree& mf, const MergeTree& mg);
Direction choose_direction(std::size_t eta_f, std::size_t eta_g);

struct Witness {
  Direction direction = Direction::FToG;
  Epsilon epsilon;
  AugmentedPair aug;  // aug.source is the tree of the direction's origin
  LeafAssignment assignment;
  TreeMap map;
};

struct InterleaveResult {
  bool interleaved = false;
  Direction direction = Direction::FToG;
  std::optional<Witness> witness;
  std::uint64_t maps_enumerated = 0;
  /// Target-list size per source leaf, in leaf order, as enumerated.
  std::vector<std::size_t> refined_target_sizes;
  /// Why the search stopped early, if it did: "leaf-gap", "empty-targets".
  std::optional<std::string> early_exit;

  std::size_t kappa() const;
};

InterleaveResult is_eps_interleaved(const MergeTree& mf, const MergeTree& mg, const Epsilon& eps,
                                    const SearchConfig& cfg = {});

struct TraceEntry {
  Epsilon epsilon;
  bool verdict = false;
  std::uint64_t maps_enumerated = 0;
  std::size_t kappa = 0;
};

struct DistanceReport {
  Epsilon epsilon_star;
  std::size_t candidate_count = 0;
  std::vector<TraceEntry> trace;
  std::optional<Witness> witness;
  std::uint64_t total_maps = 0;
  std::chrono::nanoseconds wall_time{0};
};

DistanceReport compute_interleaving_distance(const MergeTree& mf, const MergeTree& mg, const SearchConfig& cfg = {});

}  // namespace mti
