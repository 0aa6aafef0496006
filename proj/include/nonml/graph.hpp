#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "nonml/matrix.hpp"

namespace nonml {

enum class GraphFormat { EdgeList, Matrix };

/// Undirected simple graph over string-labelled nodes. Node identity is the
/// label; the internal index is the label's position in declaration order.
class LabeledGraph {
 public:
  LabeledGraph() = default;
  explicit LabeledGraph(std::vector<std::string> labels);
  /// Validates symmetry, zero diagonal and unique labels.
  LabeledGraph(std::vector<std::string> labels, BinaryMatrix adjacency);

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t edge_count() const noexcept { return adjacency_.count_ones() / 2; }

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const BinaryMatrix& adjacency() const noexcept { return adjacency_; }

  std::optional<std::size_t> find(const std::string& label) const;
  std::size_t index_of(const std::string& label) const;  // throws UnknownLabel

  bool has_edge(std::size_t u, std::size_t v) const { return adjacency_(u, v) != 0; }
  void set_edge(std::size_t u, std::size_t v, bool present);
  /// Flips the (u,v) indicator in place.
  void toggle(std::size_t u, std::size_t v);

  /// Same graph with nodes re-ordered to `order` (a permutation of labels).
  LabeledGraph reordered(std::span<const std::string> order) const;

  friend bool operator==(const LabeledGraph& a, const LabeledGraph& b) {
    return a.labels_ == b.labels_ && a.adjacency_ == b.adjacency_;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
  BinaryMatrix adjacency_;
};

/// Reads a graph. For edge lists, `declared` labels come first and labels
/// not declared are appended in first-seen order.
LabeledGraph load_graph(const std::filesystem::path& path, GraphFormat format,
                        std::span<const std::string> declared = {});
LabeledGraph parse_edge_list(const std::vector<std::vector<std::string>>& rows,
                             std::span<const std::string> declared);
LabeledGraph parse_matrix(const std::vector<std::vector<std::string>>& rows);

void write_graph(const LabeledGraph& graph, const std::filesystem::path& path, GraphFormat format);
std::string format_edge_list(const LabeledGraph& graph);
std::string format_matrix(const LabeledGraph& graph);

/// Returns a copy of `graph` with the (u,v) edge indicator flipped.
LabeledGraph toggle_edge(const LabeledGraph& graph, const std::string& u, const std::string& v);

/// The collection of reported graphs H_1..H_n as an n x N x N binary tensor
/// over a shared node universe.
class ReportSet {
 public:
  ReportSet(std::vector<std::string> universe, std::vector<std::string> reporters,
            std::vector<BinaryMatrix> slices);

  std::size_t universe_size() const noexcept { return universe_.size(); }
  std::size_t reporter_count() const noexcept { return reporters_.size(); }
  const std::vector<std::string>& universe() const noexcept { return universe_; }
  const std::vector<std::string>& reporters() const noexcept { return reporters_; }

  const BinaryMatrix& slice(std::size_t reporter) const { return slices_.at(reporter); }
  std::uint8_t operator()(std::size_t reporter, std::size_t u, std::size_t v) const {
    return slices_[reporter](u, v);
  }
  std::size_t edge_count(std::size_t reporter) const { return slices_.at(reporter).count_ones() / 2; }

  std::size_t universe_index(const std::string& label) const;
  std::size_t reporter_index(const std::string& label) const;

 private:
  std::vector<std::string> universe_;
  std::vector<std::string> reporters_;
  std::vector<BinaryMatrix> slices_;
};

struct ReportSource {
  std::string reporter;
  std::filesystem::path path;
};

/// Loads one edge-list file per reporter, in the given order.
ReportSet load_reports(std::span<const ReportSource> sources, std::span<const std::string> universe);

}  // namespace nonml
