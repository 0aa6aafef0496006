#include "nonml/graph.hpp"

#include <sstream>
#include <unordered_set>

#include "nonml/csv.hpp"
#include "nonml/error.hpp"

namespace nonml {
namespace {

std::unordered_map<std::string, std::size_t> build_index(const std::vector<std::string>& labels,
                                                         const char* what) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!index.emplace(labels[i], i).second) {
      throw Error(ErrorKind::DuplicateLabel, std::string("duplicate ") + what + " label '" + labels[i] + "'");
    }
  }
  return index;
}

void validate_adjacency(const BinaryMatrix& a, std::size_t n, const std::vector<std::string>& labels) {
  if (a.rows() != n || a.cols() != n) {
    throw Error(ErrorKind::Dimension, "adjacency size does not match label count");
  }
  if (!a.is_binary()) throw Error(ErrorKind::Parse, "adjacency entries must be 0 or 1");
  for (std::size_t i = 0; i < n; ++i) {
    if (a(i, i) != 0) throw Error(ErrorKind::SelfLoop, "self-loop on node '" + labels[i] + "'");
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (a(i, j) != a(j, i)) {
        throw Error(ErrorKind::Asymmetric,
                    "asymmetric adjacency between '" + labels[i] + "' and '" + labels[j] + "'");
      }
}

}  // namespace

LabeledGraph::LabeledGraph(std::vector<std::string> labels)
    : labels_(std::move(labels)), index_(build_index(labels_, "node")),
      adjacency_(labels_.size(), labels_.size()) {}

LabeledGraph::LabeledGraph(std::vector<std::string> labels, BinaryMatrix adjacency)
    : labels_(std::move(labels)), index_(build_index(labels_, "node")), adjacency_(std::move(adjacency)) {
  validate_adjacency(adjacency_, labels_.size(), labels_);
}

std::optional<std::size_t> LabeledGraph::find(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t LabeledGraph::index_of(const std::string& label) const {
  auto idx = find(label);
  if (!idx) throw Error(ErrorKind::UnknownLabel, "unknown node '" + label + "'");
  return *idx;
}

void LabeledGraph::set_edge(std::size_t u, std::size_t v, bool present) {
  if (u == v) throw Error(ErrorKind::SelfLoop, "self-loop on node '" + labels_.at(u) + "'");
  adjacency_.set_symmetric(u, v, present ? 1 : 0);
}

void LabeledGraph::toggle(std::size_t u, std::size_t v) { set_edge(u, v, !has_edge(u, v)); }

LabeledGraph LabeledGraph::reordered(std::span<const std::string> order) const {
  if (order.size() != size()) {
    throw Error(ErrorKind::Dimension, "re-ordering must list every node exactly once");
  }
  std::vector<std::size_t> src(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) src[i] = index_of(order[i]);
  BinaryMatrix a(size(), size());
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < size(); ++j) a(i, j) = adjacency_(src[i], src[j]);
  return LabeledGraph(std::vector<std::string>(order.begin(), order.end()), std::move(a));
}

LabeledGraph parse_edge_list(const std::vector<csv::Row>& rows, std::span<const std::string> declared) {
  if (rows.empty() || rows[0].size() != 2 || rows[0][0] != "from" || rows[0][1] != "to") {
    throw Error(ErrorKind::Parse, "edge list must start with header 'from,to'");
  }
  std::vector<std::string> labels(declared.begin(), declared.end());
  std::unordered_map<std::string, std::size_t> index = build_index(labels, "node");
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  auto intern = [&](const std::string& label) {
    if (label.empty()) throw Error(ErrorKind::Parse, "empty node label in edge list");
    auto [it, inserted] = index.emplace(label, labels.size());
    if (inserted) labels.push_back(label);
    return it->second;
  };
  for (std::size_t k = 1; k < rows.size(); ++k) {
    if (rows[k].size() != 2) {
      throw Error(ErrorKind::Parse, "edge list row " + std::to_string(k + 1) + " must have 2 fields");
    }
    const std::size_t u = intern(rows[k][0]);
    const std::size_t v = intern(rows[k][1]);
    if (u == v) throw Error(ErrorKind::SelfLoop, "self-loop on node '" + rows[k][0] + "'");
    edges.emplace_back(u, v);
  }
  BinaryMatrix a(labels.size(), labels.size());
  for (auto [u, v] : edges) a.set_symmetric(u, v, 1);
  return LabeledGraph(std::move(labels), std::move(a));
}

LabeledGraph parse_matrix(const std::vector<csv::Row>& rows) {
  if (rows.empty()) throw Error(ErrorKind::Parse, "matrix file is empty");
  const std::size_t n = rows[0].size() - 1;
  std::vector<std::string> labels(rows[0].begin() + 1, rows[0].end());
  if (rows.size() != n + 1) {
    throw Error(ErrorKind::Parse, "matrix must have one row per column label");
  }
  BinaryMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const csv::Row& row = rows[i + 1];
    if (row.size() != n + 1) {
      throw Error(ErrorKind::Parse, "matrix row " + std::to_string(i + 2) + " has wrong width");
    }
    if (row[0] != labels[i]) {
      throw Error(ErrorKind::Parse, "row label '" + row[0] + "' does not match column label '" + labels[i] + "'");
    }
    for (std::size_t j = 0; j < n; ++j) {
      const std::string& cell = row[j + 1];
      if (cell == "0") {
        a(i, j) = 0;
      } else if (cell == "1") {
        a(i, j) = 1;
      } else {
        throw Error(ErrorKind::Parse, "matrix entry '" + cell + "' is not 0 or 1");
      }
    }
  }
  return LabeledGraph(std::move(labels), std::move(a));
}

LabeledGraph load_graph(const std::filesystem::path& path, GraphFormat format,
                        std::span<const std::string> declared) {
  const auto rows = csv::read(path);
  try {
    if (format == GraphFormat::EdgeList) return parse_edge_list(rows, declared);
    LabeledGraph g = parse_matrix(rows);
    for (const auto& label : declared) {
      if (!g.find(label)) throw Error(ErrorKind::UnknownLabel, "declared node '" + label + "' missing from matrix");
    }
    return g;
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

std::string format_edge_list(const LabeledGraph& graph) {
  std::ostringstream out;
  out << "from,to\n";
  for (std::size_t i = 0; i < graph.size(); ++i)
    for (std::size_t j = i + 1; j < graph.size(); ++j)
      if (graph.has_edge(i, j)) out << csv::escape(graph.labels()[i]) << ',' << csv::escape(graph.labels()[j]) << '\n';
  return out.str();
}

std::string format_matrix(const LabeledGraph& graph) {
  std::ostringstream out;
  for (const auto& label : graph.labels()) out << ',' << csv::escape(label);
  out << '\n';
  for (std::size_t i = 0; i < graph.size(); ++i) {
    out << csv::escape(graph.labels()[i]);
    for (std::size_t j = 0; j < graph.size(); ++j) out << ',' << int(graph.adjacency()(i, j));
    out << '\n';
  }
  return out.str();
}

void write_graph(const LabeledGraph& graph, const std::filesystem::path& path, GraphFormat format) {
  csv::write_text(path, format == GraphFormat::EdgeList ? format_edge_list(graph) : format_matrix(graph));
}

LabeledGraph toggle_edge(const LabeledGraph& graph, const std::string& u, const std::string& v) {
  LabeledGraph out = graph;
  out.toggle(graph.index_of(u), graph.index_of(v));
  return out;
}

ReportSet::ReportSet(std::vector<std::string> universe, std::vector<std::string> reporters,
                     std::vector<BinaryMatrix> slices)
    : universe_(std::move(universe)), reporters_(std::move(reporters)), slices_(std::move(slices)) {
  if (reporters_.empty()) throw Error(ErrorKind::EmptyInput, "a report set needs at least one reporter");
  build_index(universe_, "universe");
  build_index(reporters_, "reporter");
  if (slices_.size() != reporters_.size()) {
    throw Error(ErrorKind::Dimension, "one report slice is required per reporter");
  }
  for (const auto& s : slices_) validate_adjacency(s, universe_.size(), universe_);
}

std::size_t ReportSet::universe_index(const std::string& label) const {
  for (std::size_t i = 0; i < universe_.size(); ++i)
    if (universe_[i] == label) return i;
  throw Error(ErrorKind::UnknownLabel, "node '" + label + "' is not in the universe");
}

std::size_t ReportSet::reporter_index(const std::string& label) const {
  for (std::size_t i = 0; i < reporters_.size(); ++i)
    if (reporters_[i] == label) return i;
  throw Error(ErrorKind::UnknownLabel, "unknown reporter '" + label + "'");
}

ReportSet load_reports(std::span<const ReportSource> sources, std::span<const std::string> universe) {
  if (sources.empty()) throw Error(ErrorKind::EmptyInput, "at least one report is required");
  std::vector<std::string> universe_labels(universe.begin(), universe.end());
  build_index(universe_labels, "universe");
  std::vector<std::string> reporters;
  std::unordered_set<std::string> seen;
  std::vector<BinaryMatrix> slices;
  for (const auto& src : sources) {
    if (!seen.insert(src.reporter).second) {
      throw Error(ErrorKind::DuplicateLabel, "duplicate reporter label '" + src.reporter + "'");
    }
    LabeledGraph g = load_graph(src.path, GraphFormat::EdgeList, universe);
    if (g.size() != universe_labels.size()) {
      throw Error(ErrorKind::UnknownLabel, src.path.string() + ": report of '" + src.reporter +
                                               "' uses node '" + g.labels()[universe_labels.size()] +
                                               "' outside the universe");
    }
    reporters.push_back(src.reporter);
    slices.push_back(g.adjacency());
  }
  return ReportSet(std::move(universe_labels), std::move(reporters), std::move(slices));
}

}  // namespace nonml
