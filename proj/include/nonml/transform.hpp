#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nonml/graph.hpp"
#include "nonml/matrix.hpp"

namespace nonml {

enum class PairPolicy { Full, Union, Explicit };

std::string to_string(PairPolicy policy);
PairPolicy parse_pair_policy(const std::string& text);

/// An unordered node pair, stored as universe indices with first < second.
struct NodePair {
  std::size_t first = 0;
  std::size_t second = 0;
  friend bool operator==(const NodePair&, const NodePair&) = default;
};

/// Bijection between selected node pairs of the universe and the top-level
/// node indices 0..e-1.
class PairIndex {
 public:
  PairIndex() = default;
  /// Throws on self-pairs, duplicates or out-of-range node indices.
  PairIndex(std::vector<std::string> universe, std::vector<NodePair> pairs, PairPolicy policy);

  std::size_t size() const noexcept { return pairs_.size(); }
  PairPolicy policy() const noexcept { return policy_; }
  const std::vector<std::string>& universe() const noexcept { return universe_; }
  const std::vector<NodePair>& pairs() const noexcept { return pairs_; }
  const NodePair& pair(std::size_t r) const { return pairs_.at(r); }

  std::optional<std::size_t> find(std::size_t u, std::size_t v) const;
  /// "a|b" with the two labels in lexicographic order.
  std::string label(std::size_t r) const;

  friend bool operator==(const PairIndex& a, const PairIndex& b) {
    return a.universe_ == b.universe_ && a.pairs_ == b.pairs_ && a.policy_ == b.policy_;
  }

 private:
  static std::uint64_t key(std::size_t u, std::size_t v);

  std::vector<std::string> universe_;
  std::vector<NodePair> pairs_;
  PairPolicy policy_ = PairPolicy::Full;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

/// Blocked multilevel network C = [[Q, W^T], [W, Y]] with top-level colouring
/// D. Q and D are fixed; W and Y are the tie variables.
struct MultilevelNetwork {
  BinaryMatrix q;  // e x e line graph of the pair list
  BinaryMatrix w;  // n x e affiliations
  BinaryMatrix y;  // n x n social network
  std::vector<std::uint8_t> d;
  PairIndex pair_index;
  std::vector<std::string> reporters;

  std::size_t reporter_count() const noexcept { return y.rows(); }
  std::size_t pair_count() const noexcept { return q.rows(); }

  /// The (e+n) x (e+n) blocked adjacency matrix, pairs first.
  BinaryMatrix blocked() const;
};

PairIndex build_pair_index(const ReportSet& reports, const LabeledGraph* criterion, PairPolicy policy,
                           std::span<const std::pair<std::string, std::string>> explicit_pairs = {});

struct Affiliation {
  BinaryMatrix w;
  std::size_t dropped_edges = 0;                  // report edges outside the pair list
  std::vector<std::size_t> dropped_per_reporter;
  std::vector<NodePair> dropped_pairs;            // distinct, in first-seen order
};

Affiliation build_affiliation(const ReportSet& reports, const PairIndex& pairs);

/// D_r = 1 iff the pair r is an edge of the criterion graph.
std::vector<std::uint8_t> build_colouring(const LabeledGraph& criterion, const PairIndex& pairs);

/// Q_rt = 1 iff pairs r and t share a node.
BinaryMatrix build_line_graph(const PairIndex& pairs);

MultilevelNetwork assemble(BinaryMatrix w, BinaryMatrix y, BinaryMatrix q, std::vector<std::uint8_t> d,
                           PairIndex pairs, std::vector<std::string> reporters);

struct TransformResult {
  MultilevelNetwork network;
  std::size_t dropped_edges = 0;
  std::size_t dropped_pairs = 0;
};

/// End-to-end mapping {reports, social network, optional criterion} -> C.
/// The social graph is re-ordered to the report set's reporter order; with
/// no criterion D is the zero vector.
TransformResult transform(const ReportSet& reports, const LabeledGraph& social, const LabeledGraph* criterion,
                          PairPolicy policy,
                          std::span<const std::pair<std::string, std::string>> explicit_pairs = {});

}  // namespace nonml
