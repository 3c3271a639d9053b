#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mti/oracle.hpp"
#include "mti/search.hpp"

namespace mti {

inline constexpr const char* kToolVersion = "1.0.0";

inline constexpr const char* kWitnessSchema = "mt-interleave/witness/v1";
inline constexpr const char* kReportSchema = "mt-interleave/report/v1";

struct Manifest {
  std::string subcommand;
  std::vector<std::string> inputs;
  SearchConfig config;
  std::optional<Scalar> epsilon;
  bool compare = false;
};

nlohmann::json tree_json(const MergeTree& tree, const std::unordered_map<NodeId, std::optional<NodeId>>& origin);

/// Deterministic: arrays are ordered by node id, object keys sorted.
nlohmann::json witness_json(const Witness& w);

nlohmann::json manifest_json(const Manifest& m);

/// Inverse of manifest_json for a full report document. Throws Error on a
/// wrong schema tag or a malformed manifest.
Manifest manifest_from_report(const nlohmann::json& report);
nlohmann::json distance_json(const DistanceReport& r);
nlohmann::json interleave_json(const InterleaveResult& r, const Epsilon& eps);
nlohmann::json oracle_json(const OracleReport& r, const std::optional<Epsilon>& engine_star);
nlohmann::json candidates_json(const CandidateList& pi);

/// {"schema", "manifest", "result"}.
nlohmann::json report_document(const Manifest& m, nlohmann::json result);

/// Pretty-printed with a trailing newline.
std::string dump(const nlohmann::json& j);

}  // namespace mti
