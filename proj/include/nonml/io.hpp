#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nonml/graph.hpp"
#include "nonml/transform.hpp"

namespace nonml {

struct GraphSource {
  std::filesystem::path path;
  GraphFormat format = GraphFormat::EdgeList;
};

/// Inputs of the transform: one edge list per reporter over a shared
/// universe, the social network among reporters and an optional criterion
/// graph over the universe. Relative paths resolve against the manifest.
struct Manifest {
  std::vector<std::string> universe;
  std::vector<ReportSource> reports;
  GraphSource social;
  std::optional<GraphSource> criterion;
  PairPolicy policy = PairPolicy::Full;
  std::vector<std::pair<std::string, std::string>> pairs;  // explicit policy only
};

/// Reads the manifest JSON:
///   {"universe": [...], "reporters": [{"id": "i", "file": "i.csv"}, ...],
///    "social": "social.csv" | {"file": ..., "format": "edgelist"|"matrix"},
///    "criterion": optional like social, "policy": "full"|"union"|"explicit",
///    "pairs": [["u", "s"], ...]}
Manifest load_manifest(const std::filesystem::path& path);

TransformResult run_manifest(const Manifest& manifest);

/// Writes W.csv, Y.csv, Q.csv, D.csv and pairs.json into `dir`.
void write_network(const MultilevelNetwork& net, const std::filesystem::path& dir);

/// Reads a directory produced by write_network. Q is rebuilt from the pair
/// list and must agree with Q.csv.
MultilevelNetwork read_network(const std::filesystem::path& dir);

/// A manifest file is transformed; a directory is read as transform output.
MultilevelNetwork load_network(const std::filesystem::path& path);

std::string format_affiliation_csv(const MultilevelNetwork& net);
std::string format_social_csv(const MultilevelNetwork& net);
std::string format_line_graph_csv(const MultilevelNetwork& net);
std::string format_colouring_csv(const MultilevelNetwork& net);
std::string format_pair_index_json(const PairIndex& pairs);

}  // namespace nonml
