// mt_interleave: exact interleaving distance between merge trees.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "mti/ingest.hpp"
#include "mti/oracle.hpp"
#include "mti/report.hpp"
#include "mti/search.hpp"

namespace {

enum Exit : int {
  kOk = 0,
  kNotInterleaved = 1,
  kBadInput = 2,
  kBudget = 3,
  kOracleMismatch = 4,
  kTooLarge = 5,
  kInternal = 6,
};

/// Failure tied to a named input.
struct InputError {
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError{path + ": cannot open"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError{path + ": cannot write"};
  out << text;
  if (!out) throw InputError{path + ": write failed"};
}

mti::MergeTree load_tree(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return mti::parse_tree_document(text);
  } catch (const mti::ParseError& e) {
    throw InputError{path + ":" + std::to_string(e.line()) + ": " + e.what()};
  } catch (const mti::Error& e) {
    throw InputError{path + ": " + e.what()};
  }
}

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("mt_interleave");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("MT_INTERLEAVE_LOG")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to off; only accept "off" when spelled out.
    if (level != spdlog::level::off || std::string_view(env) == "off") spdlog::set_level(level);
  }
}

struct Options {
  std::string tree_a;
  std::string tree_b;
  std::string series;
  std::string out;
  std::optional<std::string> name;
  std::optional<std::string> epsilon;
  std::optional<std::string> witness;
  std::optional<std::string> json;
  bool no_refine = false;
  std::uint64_t max_maps = mti::SearchConfig{}.max_maps;
  bool parallel = false;
  bool deterministic_witness = false;
  bool compare = false;
  std::string report;
};

mti::SearchConfig config_of(const Options& o) {
  mti::SearchConfig c;
  c.refinement = !o.no_refine;
  c.max_maps = o.max_maps;
  c.parallel = o.parallel;
  c.deterministic_witness = o.deterministic_witness;
  return c;
}

mti::Manifest manifest_of(const std::string& sub, const Options& o, std::vector<std::string> inputs) {
  mti::Manifest m{sub, std::move(inputs), config_of(o), std::nullopt};
  return m;
}

void add_search_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--witness", o.witness, "Write the witness map as JSON");
  cmd->add_option("--json", o.json, "Write the machine-readable report");
  cmd->add_flag("--no-refine", o.no_refine, "Enumerate unrefined target lists");
  cmd->add_option("--max-maps", o.max_maps, "Enumeration budget per epsilon")->check(CLI::PositiveNumber);
  cmd->add_flag("--parallel", o.parallel, "Enumerate assignments on several threads");
  cmd->add_flag("--deterministic-witness", o.deterministic_witness, "Force sequential enumeration");
}

int run_distance(const Options& o, std::string& out) {
  const auto a = load_tree(o.tree_a);
  const auto b = load_tree(o.tree_b);
  const auto report = mti::compute_interleaving_distance(a, b, config_of(o));
  if (o.witness) {
    if (!report.witness) throw mti::InternalError("no witness at the distance");
    write_file(*o.witness, mti::dump(mti::witness_json(*report.witness)));
  }
  if (o.json) {
    write_file(*o.json, mti::dump(mti::report_document(manifest_of("distance", o, {o.tree_a, o.tree_b}),
                                                       mti::distance_json(report))));
  }
  out = report.epsilon_star.value().to_string() + "\n";
  return kOk;
}

int run_check(const Options& o, std::string& out) {
  mti::Epsilon eps;
  try {
    eps = mti::Epsilon(mti::Scalar::parse(o.epsilon.value_or("")));
  } catch (const mti::Error& e) {
    throw InputError{"--epsilon: " + std::string(e.what())};
  }
  const auto a = load_tree(o.tree_a);
  const auto b = load_tree(o.tree_b);
  const auto result = mti::is_eps_interleaved(a, b, eps, config_of(o));
  if (o.witness && result.witness) write_file(*o.witness, mti::dump(mti::witness_json(*result.witness)));
  if (o.json) {
    auto m = manifest_of("check", o, {o.tree_a, o.tree_b});
    m.epsilon = eps.value();
    write_file(*o.json, mti::dump(mti::report_document(m, mti::interleave_json(result, eps))));
  }
  out = result.interleaved ? "interleaved\n" : "not-interleaved\n";
  return result.interleaved ? kOk : kNotInterleaved;
}

int run_ingest(const Options& o, std::string&) {
  const std::string text = read_file(o.series);
  mti::MergeTree tree = [&] {
    try {
      return mti::merge_tree_of_series(mti::parse_series_csv(text));
    } catch (const mti::ParseError& e) {
      throw InputError{o.series + ":" + std::to_string(e.line()) + ": " + e.what()};
    } catch (const mti::Error& e) {
      throw InputError{o.series + ": " + e.what()};
    }
  }();
  write_file(o.out, mti::write_tree_document(tree, o.name));
  return kOk;
}

int run_candidates(const Options& o, std::string& out) {
  const auto pi = mti::generate_candidates(load_tree(o.tree_a), load_tree(o.tree_b));
  if (o.json) {
    write_file(*o.json,
               mti::dump(mti::report_document(manifest_of("candidates", o, {o.tree_a, o.tree_b}), mti::candidates_json(pi))));
  }
  for (const auto& e : pi) out += e.value().to_string() + "\n";
  return kOk;
}

int run_oracle(const Options& o, std::string& out) {
  const auto a = load_tree(o.tree_a);
  const auto b = load_tree(o.tree_b);
  const auto report = mti::oracle_distance(a, b);
  std::optional<mti::Epsilon> engine;
  if (o.compare) {
    engine = mti::compute_interleaving_distance(a, b, config_of(o)).epsilon_star;
  }
  if (o.json) {
    auto m = manifest_of("oracle", o, {o.tree_a, o.tree_b});
    m.compare = o.compare;
    write_file(*o.json, mti::dump(mti::report_document(m, mti::oracle_json(report, engine))));
  }
  if (engine && *engine != report.epsilon_star) {
    spdlog::error("oracle epsilon* {} differs from engine epsilon* {}", report.epsilon_star.value().to_string(),
                  engine->value().to_string());
    return kOracleMismatch;
  }
  out = report.epsilon_star.value().to_string() + "\n";
  return kOk;
}

/// Re-runs the subcommand recorded in a report's manifest, sequentially.
int run_replay(Options& o, std::string& out) {
  const std::string text = read_file(o.report);
  mti::Manifest m;
  try {
    m = mti::manifest_from_report(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw InputError{o.report + ": " + e.what()};
  } catch (const mti::Error& e) {
    throw InputError{o.report + ": " + e.what()};
  }
  o.tree_a = m.inputs[0];
  o.tree_b = m.inputs[1];
  o.no_refine = !m.config.refinement;
  o.max_maps = m.config.max_maps;
  o.parallel = false;
  o.deterministic_witness = m.config.deterministic_witness;
  o.compare = m.compare;
  if (m.epsilon) o.epsilon = m.epsilon->to_string();
  if (m.subcommand == "distance") return run_distance(o, out);
  if (m.subcommand == "check") return run_check(o, out);
  if (m.subcommand == "candidates") return run_candidates(o, out);
  if (m.subcommand == "oracle") return run_oracle(o, out);
  throw InputError{o.report + ": cannot replay subcommand '" + m.subcommand + "'"};
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  Options o;
  CLI::App app{"Exact interleaving distance between merge trees"};
  app.set_version_flag("--version", std::string(mti::kToolVersion));
  app.require_subcommand(1);

  auto* distance = app.add_subcommand("distance", "Print the interleaving distance");
  distance->add_option("tree_a", o.tree_a, "First tree file")->required();
  distance->add_option("tree_b", o.tree_b, "Second tree file")->required();
  add_search_flags(distance, o);

  auto* check = app.add_subcommand("check", "Decide whether the trees are epsilon-interleaved");
  check->add_option("tree_a", o.tree_a, "First tree file")->required();
  check->add_option("tree_b", o.tree_b, "Second tree file")->required();
  check->add_option("--epsilon", o.epsilon, "Exact non-negative rational")->required();
  add_search_flags(check, o);

  auto* ingest = app.add_subcommand("ingest", "Build the merge tree of a 1D series");
  ingest->add_option("series", o.series, "CSV with header position,value")->required();
  ingest->add_option("out", o.out, "Output tree file")->required();
  ingest->add_option("--name", o.name, "Tree name recorded in the file");

  auto* candidates = app.add_subcommand("candidates", "List candidate distance values");
  candidates->add_option("tree_a", o.tree_a, "First tree file")->required();
  candidates->add_option("tree_b", o.tree_b, "Second tree file")->required();
  candidates->add_option("--json", o.json, "Write the machine-readable report");

  auto* oracle = app.add_subcommand("oracle", "Brute-force distance for small trees");
  oracle->add_option("tree_a", o.tree_a, "First tree file")->required();
  oracle->add_option("tree_b", o.tree_b, "Second tree file")->required();
  oracle->add_flag("--compare", o.compare, "Also run the engine and require equal results");
  oracle->add_option("--json", o.json, "Write the machine-readable report");
  oracle->add_flag("--no-refine", o.no_refine, "Engine: enumerate unrefined target lists");
  oracle->add_option("--max-maps", o.max_maps, "Engine: enumeration budget per epsilon")->check(CLI::PositiveNumber);

  auto* replay = app.add_subcommand("replay", "Re-run the command recorded in a --json report");
  replay->add_option("report", o.report, "Report written by --json")->required();
  replay->add_option("--witness", o.witness, "Write the witness map as JSON");
  replay->add_option("--json", o.json, "Write a fresh report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  }

  std::string out;
  int code = kInternal;
  try {
    if (*distance) code = run_distance(o, out);
    else if (*check) code = run_check(o, out);
    else if (*ingest) code = run_ingest(o, out);
    else if (*candidates) code = run_candidates(o, out);
    else if (*oracle) code = run_oracle(o, out);
    else if (*replay) code = run_replay(o, out);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.message << "\n";
    return kBadInput;
  } catch (const mti::SearchBudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBudget;
  } catch (const mti::InstanceTooLarge& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kTooLarge;
  } catch (const mti::InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const mti::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  }
  if (code == kOk || code == kNotInterleaved) std::cout << out;
  return code;
}
