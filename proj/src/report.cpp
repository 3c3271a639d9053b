#include "mti/report.hpp"

namespace mti {

using nlohmann::json;

namespace {

json exact(const Scalar& s) { return s.to_string(); }

json id_or_null(const std::optional<NodeId>& id) { return id ? json(id->value) : json(nullptr); }

json search_config_json(const SearchConfig& c) {
  return {{"refinement", c.refinement},
          {"max_maps", c.max_maps},
          {"parallel", c.parallel},
          {"deterministic_witness", c.deterministic_witness},
          {"threads", c.threads}};
}

}  // namespace

json tree_json(const MergeTree& tree, const std::unordered_map<NodeId, std::optional<NodeId>>& origin) {
  json nodes = json::array();
  for (const auto& r : tree.records()) {
    auto it = origin.find(r.id);
    nodes.push_back({{"id", r.id.value},
                     {"value", exact(r.value)},
                     {"parent", id_or_null(r.parent)},
                     {"origin", it == origin.end() ? json(nullptr) : id_or_null(it->second)}});
  }
  return {{"root", tree.root().value}, {"nodes", std::move(nodes)}};
}

json witness_json(const Witness& w) {
  const MergeTree& src = w.aug.source;
  const MergeTree& tgt = w.aug.target;
  json leaves = json::array();
  for (const auto& [leaf, t] : w.assignment) {
    leaves.push_back(
        {{"leaf", leaf.value}, {"leaf_value", exact(src.value(leaf))}, {"target", t.value}, {"target_value", exact(tgt.value(t))}});
  }
  json pairs = json::array();
  for (const auto& [u, t] : w.map.entries()) {
    pairs.push_back(
        {{"source", u.value}, {"source_value", exact(src.value(u))}, {"target", t.value}, {"target_value", exact(tgt.value(t))}});
  }
  return {{"schema", kWitnessSchema},
          {"direction", std::string(to_string(w.direction))},
          {"epsilon", exact(w.epsilon.value())},
          {"source_tree", w.direction == Direction::FToG ? "a" : "b"},
          {"source", tree_json(src, w.aug.source_origin)},
          {"target", tree_json(tgt, w.aug.target_origin)},
          {"leaf_assignment", std::move(leaves)},
          {"map", std::move(pairs)}};
}

json manifest_json(const Manifest& m) {
  return {{"subcommand", m.subcommand},
          {"inputs", m.inputs},
          {"config", search_config_json(m.config)},
          {"epsilon", m.epsilon ? exact(*m.epsilon) : json(nullptr)},
          {"compare", m.compare},
          {"version", kToolVersion}};
}

Manifest manifest_from_report(const json& report) {
  try {
    if (!report.is_object() || report.value("schema", "") != kReportSchema) {
      throw Error(std::string("not a ") + kReportSchema + " document");
    }
    const json& m = report.at("manifest");
    Manifest out;
    out.subcommand = m.at("subcommand").get<std::string>();
    out.inputs = m.at("inputs").get<std::vector<std::string>>();
    if (out.inputs.size() != 2) throw Error("manifest needs exactly two inputs");
    const json& c = m.at("config");
    out.config.refinement = c.at("refinement").get<bool>();
    out.config.max_maps = c.at("max_maps").get<std::uint64_t>();
    out.config.parallel = c.at("parallel").get<bool>();
    out.config.deterministic_witness = c.at("deterministic_witness").get<bool>();
    out.config.threads = c.at("threads").get<unsigned>();
    validate(out.config);
    if (!m.at("epsilon").is_null()) out.epsilon = Scalar::parse(m.at("epsilon").get<std::string>());
    out.compare = m.value("compare", false);
    return out;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed manifest: ") + e.what());
  }
}

json distance_json(const DistanceReport& r) {
  json trace = json::array();
  for (const auto& t : r.trace) {
    trace.push_back({{"epsilon", exact(t.epsilon.value())},
                     {"verdict", t.verdict},
                     {"maps_enumerated", t.maps_enumerated},
                     {"kappa", t.kappa}});
  }
  return {{"epsilon_star", exact(r.epsilon_star.value())},
          {"epsilon_star_decimal", r.epsilon_star.value().to_double()},
          {"decimal_is_display_only", true},
          {"candidate_count", r.candidate_count},
          {"trace", std::move(trace)},
          {"total_maps", r.total_maps},
          {"wall_time_ms", static_cast<double>(r.wall_time.count()) / 1e6},
          {"witness", r.witness ? witness_json(*r.witness) : json(nullptr)}};
}

json interleave_json(const InterleaveResult& r, const Epsilon& eps) {
  return {{"epsilon", exact(eps.value())},
          {"interleaved", r.interleaved},
          {"direction", std::string(to_string(r.direction))},
          {"maps_enumerated", r.maps_enumerated},
          {"target_list_sizes", r.refined_target_sizes},
          {"kappa", r.kappa()},
          {"early_exit", r.early_exit ? json(*r.early_exit) : json(nullptr)},
          {"witness", r.witness ? witness_json(*r.witness) : json(nullptr)}};
}

json oracle_json(const OracleReport& r, const std::optional<Epsilon>& engine_star) {
  json verdicts = json::array();
  for (std::size_t i = 0; i < r.candidates.size(); ++i) {
    verdicts.push_back({{"epsilon", exact(r.candidates[i].value())}, {"verdict", static_cast<bool>(r.verdicts[i])}});
  }
  return {{"epsilon_star", exact(r.epsilon_star.value())},
          {"verdicts", std::move(verdicts)},
          {"monotone", r.monotone()},
          {"maps_checked", r.maps_checked},
          {"engine_epsilon_star", engine_star ? exact(engine_star->value()) : json(nullptr)}};
}

json candidates_json(const CandidateList& pi) {
  json values = json::array();
  for (const auto& e : pi) values.push_back(exact(e.value()));
  return {{"candidates", std::move(values)}};
}

json report_document(const Manifest& m, json result) {
  return {{"schema", kReportSchema}, {"manifest", manifest_json(m)}, {"result", std::move(result)}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace mti
