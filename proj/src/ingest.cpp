#include "mti/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace mti {

ScalarSeries::ScalarSeries(std::vector<Sample> samples) : samples_(std::move(samples)) {
  if (samples_.empty()) throw SeriesError(SeriesError::Kind::Empty, 0, "series has no samples");
  for (std::size_t i = 1; i < samples_.size(); ++i) {
    if (!(samples_[i - 1].position < samples_[i].position)) {
      throw SeriesError(SeriesError::Kind::PositionsNotIncreasing, i,
                        "sample " + std::to_string(i) + ": positions must be strictly increasing");
    }
  }
}

ScalarSeries ScalarSeries::from_values(const std::vector<Scalar>& values) {
  std::vector<Sample> samples;
  samples.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) samples.push_back({Scalar(static_cast<long>(i)), values[i]});
  return ScalarSeries(std::move(samples));
}

ScalarSeries ScalarSeries::reversed() const {
  std::vector<Sample> out;
  out.reserve(samples_.size());
  for (auto it = samples_.rbegin(); it != samples_.rend(); ++it) out.push_back({-it->position, it->value});
  return ScalarSeries(std::move(out));
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  std::size_t unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    parent_[b] = a;
    return a;
  }

 private:
  std::vector<std::size_t> parent_;
};

struct DraftNode {
  Scalar value;
  std::optional<std::size_t> parent;
  bool alive = true;
};

}  // namespace

MergeTree merge_tree_of_series(const ScalarSeries& series) {
  const auto& s = series.samples();
  const std::size_t n = s.size();
  for (std::size_t i = 1; i < n; ++i) {
    if (s[i - 1].value == s[i].value) {
      throw SeriesError(SeriesError::Kind::EqualAdjacentValues, i,
                        "samples " + std::to_string(i - 1) + " and " + std::to_string(i) + " share value " +
                            s[i].value.to_string());
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s[a].value < s[b].value; });

  std::vector<DraftNode> draft;
  DisjointSets sets(n);
  std::vector<bool> swept(n, false);
  std::unordered_map<std::size_t, std::size_t> top;  // component representative -> draft node

  auto new_node = [&](const Scalar& v) {
    draft.push_back(DraftNode{v, std::nullopt});
    return draft.size() - 1;
  };

  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = order[k];
    const Scalar& v = s[i].value;
    const bool last = k + 1 == n;

    std::vector<std::size_t> comps;
    for (std::size_t j : {i - 1, i + 1}) {
      if (j < n && swept[j]) {
        const std::size_t r = sets.find(j);
        if (std::find(comps.begin(), comps.end(), r) == comps.end()) comps.push_back(r);
      }
    }
    swept[i] = true;

    if (comps.empty()) {
      top[i] = new_node(v);
      continue;
    }
    if (comps.size() == 1) {
      const std::size_t t = top.at(comps[0]);
      const std::size_t rep = sets.unite(comps[0], i);
      top[rep] = t;
      if (last && draft[t].value != v) {
        const std::size_t r = new_node(v);
        draft[t].parent = r;
        top[rep] = r;
      }
      continue;
    }

    std::size_t a = top.at(comps[0]);
    std::size_t b = top.at(comps[1]);
    if (draft[b].value == v && draft[a].value != v) std::swap(a, b);
    std::size_t merged;
    if (draft[a].value == v) {
      // A merge already happened at this exact value; join into that node.
      merged = a;
      if (draft[b].value == v) {
        for (auto& d : draft) {
          if (d.parent == b) d.parent = a;
        }
        draft[b].alive = false;
      } else {
        draft[b].parent = a;
      }
    } else {
      merged = new_node(v);
      draft[a].parent = merged;
      draft[b].parent = merged;
    }
    const std::size_t rep = sets.unite(sets.unite(comps[0], comps[1]), i);
    top[rep] = merged;
  }

  std::vector<std::size_t> renumber(draft.size());
  std::uint64_t next = 0;
  for (std::size_t d = 0; d < draft.size(); ++d) {
    if (draft[d].alive) renumber[d] = next++;
  }
  std::vector<NodeRecord> records;
  records.reserve(next);
  for (std::size_t d = 0; d < draft.size(); ++d) {
    if (!draft[d].alive) continue;
    std::optional<NodeId> parent;
    if (draft[d].parent) parent = NodeId{renumber[*draft[d].parent]};
    records.push_back(NodeRecord{NodeId{renumber[d]}, draft[d].value, parent});
  }
  return MergeTree::from_records(records);
}

ParseError::ParseError(Kind kind, std::size_t line, const std::string& what)
    : Error(line ? "line " + std::to_string(line) + ": " + what : what), kind_(kind), line_(line) {}

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    auto line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<std::uint64_t> parse_id(std::string_view s) {
  std::uint64_t v = 0;
  if (s.empty()) return std::nullopt;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

ParseError::Kind kind_of(TreeRule rule) {
  switch (rule) {
    case TreeRule::Empty: return ParseError::Kind::Empty;
    case TreeRule::DuplicateId: return ParseError::Kind::DuplicateId;
    case TreeRule::NoRoot: return ParseError::Kind::NoRoot;
    case TreeRule::MultipleRoots: return ParseError::Kind::MultipleRoots;
    case TreeRule::OrphanNode: return ParseError::Kind::OrphanNode;
    case TreeRule::CycleDetected: return ParseError::Kind::CycleDetected;
    case TreeRule::NonIncreasingEdge: return ParseError::Kind::NonIncreasingEdge;
  }
  return ParseError::Kind::Syntax;
}

constexpr std::string_view kHeaderPrefix = "# merge-tree v";
constexpr std::string_view kNamePrefix = "# name: ";

}  // namespace

TreeDocument parse_tree_text(std::string_view text) {
  TreeDocument doc;
  const auto lines = split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const auto line = lines[ln];
    const std::size_t lineno = ln + 1;
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line.starts_with(kHeaderPrefix)) {
        const auto v = parse_id(line.substr(kHeaderPrefix.size()));
        if (!v) throw ParseError(ParseError::Kind::Syntax, lineno, "malformed format header");
        if (*v != static_cast<std::uint64_t>(kTreeFormatVersion)) {
          throw ParseError(ParseError::Kind::UnsupportedVersion, lineno,
                           "unsupported tree format version " + std::to_string(*v));
        }
        doc.version = static_cast<int>(*v);
      } else if (line.starts_with(kNamePrefix)) {
        doc.name = std::string(line.substr(kNamePrefix.size()));
      }
      continue;
    }
    const auto fields = split(line, '\t');
    if (fields.size() != 3) {
      throw ParseError(ParseError::Kind::Syntax, lineno, "expected 3 tab-separated fields, got " +
                                                             std::to_string(fields.size()));
    }
    const auto id = parse_id(fields[0]);
    if (!id) throw ParseError(ParseError::Kind::Syntax, lineno, "bad node id '" + std::string(fields[0]) + "'");
    Scalar value;
    try {
      value = Scalar::parse(fields[1]);
    } catch (const ScalarParseError& e) {
      throw ParseError(ParseError::Kind::Syntax, lineno, e.what());
    }
    std::optional<NodeId> parent;
    if (fields[2] != "-") {
      const auto p = parse_id(fields[2]);
      if (!p) throw ParseError(ParseError::Kind::Syntax, lineno, "bad parent id '" + std::string(fields[2]) + "'");
      parent = NodeId{*p};
    }
    doc.records.push_back(NodeRecord{NodeId{*id}, std::move(value), parent});
  }
  return doc;
}

std::string write_tree_text(const TreeDocument& doc) {
  std::vector<NodeRecord> recs = doc.records;
  std::sort(recs.begin(), recs.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  std::string out = std::string(kHeaderPrefix) + std::to_string(doc.version) + "\n";
  if (doc.name) out += std::string(kNamePrefix) + *doc.name + "\n";
  for (const auto& r : recs) {
    out += to_string(r.id);
    out += '\t';
    out += r.value.to_string();
    out += '\t';
    out += r.parent ? to_string(*r.parent) : std::string("-");
    out += '\n';
  }
  return out;
}

MergeTree parse_tree_document(std::string_view text) {
  const TreeDocument doc = parse_tree_text(text);
  if (auto check = validate_records(doc.records); !check) {
    const auto& v = *check.violation;
    // Record i sits on the i-th non-comment, non-empty line.
    std::size_t lineno = 0;
    if (v.node) {
      std::size_t seen = 0;
      std::size_t target = 0;
      for (std::size_t i = 0; i < doc.records.size(); ++i) {
        if (doc.records[i].id == *v.node) target = i;  // last occurrence, for duplicates
      }
      const auto lines = split_lines(text);
      for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        if (lines[ln].empty() || lines[ln].front() == '#') continue;
        if (seen++ == target) {
          lineno = ln + 1;
          break;
        }
      }
    }
    std::string what(to_string(v.rule));
    if (v.node) what += " at node " + to_string(*v.node);
    throw ParseError(kind_of(v.rule), lineno, what);
  }
  return MergeTree::from_records(doc.records);
}

std::string write_tree_document(const MergeTree& tree, const std::optional<std::string>& name) {
  return write_tree_text(TreeDocument{kTreeFormatVersion, name, tree.records()});
}

ScalarSeries parse_series_csv(std::string_view text) {
  const auto lines = split_lines(text);
  std::size_t ln = 0;
  while (ln < lines.size() && lines[ln].empty()) ++ln;
  if (ln == lines.size() || lines[ln] != "position,value") {
    throw ParseError(ParseError::Kind::Syntax, ln + 1, "expected header 'position,value'");
  }
  std::vector<Sample> samples;
  for (++ln; ln < lines.size(); ++ln) {
    if (lines[ln].empty()) continue;
    const auto fields = split(lines[ln], ',');
    if (fields.size() != 2) throw ParseError(ParseError::Kind::Syntax, ln + 1, "expected 2 comma-separated fields");
    try {
      samples.push_back({Scalar::parse(fields[0]), Scalar::parse(fields[1])});
    } catch (const ScalarParseError& e) {
      throw ParseError(ParseError::Kind::Syntax, ln + 1, e.what());
    }
  }
  return ScalarSeries(std::move(samples));
}

}  // namespace mti
