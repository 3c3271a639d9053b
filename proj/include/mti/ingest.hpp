#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mti/merge_tree.hpp"

namespace mti {

struct Sample {
  Scalar position;
  Scalar value;
};

/// A 1D piecewise-linear scalar field given by its samples.
class ScalarSeries {
 public:
  /// Requires at least one sample and strictly increasing positions.
  explicit ScalarSeries(std::vector<Sample> samples);
  /// Samples at positions 0, 1, 2, ...
  static ScalarSeries from_values(const std::vector<Scalar>& values);

  const std::vector<Sample>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  ScalarSeries reversed() const;

 private:
  std::vector<Sample> samples_;
};

class SeriesError : public Error {
 public:
  enum class Kind { Empty, PositionsNotIncreasing, EqualAdjacentValues };
  SeriesError(Kind kind, std::size_t index, const std::string& what) : Error(what), kind_(kind), index_(index) {}
  Kind kind() const { return kind_; }
  std::size_t index() const { return index_; }

 private:
  Kind kind_;
  std::size_t index_;
};

/// Sublevel-set merge tree of the PL interpolation: leaves at local minima,
/// merge nodes where components join, root at the global maximum. Regular
/// points produce no nodes. Throws SeriesError on equal adjacent samples.
MergeTree merge_tree_of_series(const ScalarSeries& series);

class ParseError : public Error {
 public:
  enum class Kind { Syntax, UnsupportedVersion, DuplicateId, NoRoot, MultipleRoots, OrphanNode, CycleDetected,
                    NonIncreasingEdge, Empty };
  ParseError(Kind kind, std::size_t line, const std::string& what);
  Kind kind() const { return kind_; }
  /// 1-based line number, 0 when the error is not tied to a line.
  std::size_t line() const { return line_; }

 private:
  Kind kind_;
  std::size_t line_;
};

inline constexpr int kTreeFormatVersion = 1;

/// In-memory form of the line-oriented tree file.
struct TreeDocument {
  int version = kTreeFormatVersion;
  std::optional<std::string> name;
  std::vector<NodeRecord> records;
};

TreeDocument parse_tree_text(std::string_view text);
std::string write_tree_text(const TreeDocument& doc);

MergeTree parse_tree_document(std::string_view text);
std::string write_tree_document(const MergeTree& tree, const std::optional<std::string>& name = std::nullopt);

/// CSV with header `position,value`.
ScalarSeries parse_series_csv(std::string_view text);

}  // namespace mti
