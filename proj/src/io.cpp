#include "nonml/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nonml/csv.hpp"
#include "nonml/error.hpp"

namespace nonml {
namespace {

using json = nlohmann::json;

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, path.string() + ": " + e.what());
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& file) {
  const std::filesystem::path p(file);
  return p.is_absolute() ? p : base / p;
}

GraphFormat parse_format(const std::string& text) {
  if (text == "edgelist" || text == "edge-list" || text == "edges") return GraphFormat::EdgeList;
  if (text == "matrix") return GraphFormat::Matrix;
  throw Error(ErrorKind::InvalidParameter, "unknown graph format '" + text + "'");
}

GraphSource parse_source(const json& node, const std::filesystem::path& base, const std::string& what) {
  if (node.is_string()) return {resolve(base, node.get<std::string>()), GraphFormat::EdgeList};
  if (node.is_object() && node.contains("file") && node["file"].is_string()) {
    GraphSource src{resolve(base, node["file"].get<std::string>()), GraphFormat::EdgeList};
    if (node.contains("format")) src.format = parse_format(node["format"].get<std::string>());
    return src;
  }
  throw Error(ErrorKind::Parse, "manifest field '" + what + "' must be a file name or {file, format}");
}

std::vector<std::string> string_list(const json& node, const std::string& what) {
  if (!node.is_array()) throw Error(ErrorKind::Parse, "'" + what + "' must be an array of strings");
  std::vector<std::string> out;
  for (const auto& v : node) {
    if (!v.is_string()) throw Error(ErrorKind::Parse, "'" + what + "' must be an array of strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

// Labelled 0/1 matrix CSV: header row of column labels after an empty corner.
BinaryMatrix read_labelled_matrix(const std::filesystem::path& path, const std::vector<std::string>& row_labels,
                                  const std::vector<std::string>& col_labels) {
  const auto rows = csv::read(path);
  const std::string name = path.filename().string();
  if (rows.size() != row_labels.size() + 1) throw Error(ErrorKind::Dimension, name + ": wrong number of rows");
  if (rows[0].size() != col_labels.size() + 1) throw Error(ErrorKind::Dimension, name + ": wrong number of columns");
  for (std::size_t c = 0; c < col_labels.size(); ++c) {
    if (rows[0][c + 1] != col_labels[c]) {
      throw Error(ErrorKind::UnknownLabel, name + ": column '" + rows[0][c + 1] + "' expected '" + col_labels[c] + "'");
    }
  }
  BinaryMatrix m(row_labels.size(), col_labels.size());
  for (std::size_t r = 0; r < row_labels.size(); ++r) {
    const auto& row = rows[r + 1];
    if (row.size() != col_labels.size() + 1) throw Error(ErrorKind::Dimension, name + ": ragged row");
    if (row[0] != row_labels[r]) {
      throw Error(ErrorKind::UnknownLabel, name + ": row '" + row[0] + "' expected '" + row_labels[r] + "'");
    }
    for (std::size_t c = 0; c < col_labels.size(); ++c) {
      if (row[c + 1] == "1") {
        m(r, c) = 1;
      } else if (row[c + 1] != "0") {
        throw Error(ErrorKind::Parse, name + ": entry '" + row[c + 1] + "' is not 0 or 1");
      }
    }
  }
  return m;
}

std::string format_labelled_matrix(const BinaryMatrix& m, const std::vector<std::string>& row_labels,
                                   const std::vector<std::string>& col_labels) {
  std::ostringstream out;
  for (const auto& label : col_labels) out << ',' << csv::escape(label);
  out << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out << csv::escape(row_labels[r]);
    for (std::size_t c = 0; c < m.cols(); ++c) out << ',' << int(m(r, c));
    out << '\n';
  }
  return out.str();
}

std::vector<std::string> pair_labels(const PairIndex& pairs) {
  std::vector<std::string> out;
  for (std::size_t r = 0; r < pairs.size(); ++r) out.push_back(pairs.label(r));
  return out;
}

}  // namespace

Manifest load_manifest(const std::filesystem::path& path) {
  const json doc = read_json(path);
  if (!doc.is_object()) throw Error(ErrorKind::Parse, path.string() + ": manifest must be a JSON object");
  const auto base = path.parent_path();
  Manifest m;
  if (!doc.contains("universe")) throw Error(ErrorKind::Parse, "manifest lacks 'universe'");
  m.universe = string_list(doc["universe"], "universe");
  if (!doc.contains("reporters") || !doc["reporters"].is_array()) {
    throw Error(ErrorKind::Parse, "manifest lacks a 'reporters' array");
  }
  for (const auto& r : doc["reporters"]) {
    if (!r.is_object() || !r.contains("id") || !r.contains("file")) {
      throw Error(ErrorKind::Parse, "each reporter needs 'id' and 'file'");
    }
    m.reports.push_back({r["id"].get<std::string>(), resolve(base, r["file"].get<std::string>())});
  }
  if (!doc.contains("social")) throw Error(ErrorKind::Parse, "manifest lacks 'social'");
  m.social = parse_source(doc["social"], base, "social");
  if (doc.contains("criterion") && !doc["criterion"].is_null()) {
    m.criterion = parse_source(doc["criterion"], base, "criterion");
  }
  if (doc.contains("policy")) m.policy = parse_pair_policy(doc["policy"].get<std::string>());
  if (doc.contains("pairs")) {
    for (const auto& p : doc["pairs"]) {
      const auto ends = string_list(p, "pairs");
      if (ends.size() != 2) throw Error(ErrorKind::Parse, "each explicit pair needs two labels");
      m.pairs.emplace_back(ends[0], ends[1]);
    }
  }
  return m;
}

TransformResult run_manifest(const Manifest& manifest) {
  const ReportSet reports = load_reports(manifest.reports, manifest.universe);
  const LabeledGraph social = load_graph(manifest.social.path, manifest.social.format, reports.reporters());
  std::optional<LabeledGraph> criterion;
  if (manifest.criterion) criterion = load_graph(manifest.criterion->path, manifest.criterion->format, manifest.universe);
  return transform(reports, social, criterion ? &*criterion : nullptr, manifest.policy, manifest.pairs);
}

std::string format_affiliation_csv(const MultilevelNetwork& net) {
  return format_labelled_matrix(net.w, net.reporters, pair_labels(net.pair_index));
}

std::string format_social_csv(const MultilevelNetwork& net) {
  return format_labelled_matrix(net.y, net.reporters, net.reporters);
}

std::string format_line_graph_csv(const MultilevelNetwork& net) {
  const auto labels = pair_labels(net.pair_index);
  return format_labelled_matrix(net.q, labels, labels);
}

std::string format_colouring_csv(const MultilevelNetwork& net) {
  std::ostringstream out;
  out << "pair,D\n";
  for (std::size_t r = 0; r < net.d.size(); ++r) out << csv::escape(net.pair_index.label(r)) << ',' << int(net.d[r]) << '\n';
  return out.str();
}

std::string format_pair_index_json(const PairIndex& pairs) {
  json doc;
  doc["policy"] = to_string(pairs.policy());
  doc["universe"] = pairs.universe();
  doc["pairs"] = json::array();
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    const auto& p = pairs.pair(r);
    doc["pairs"].push_back({{"r", r}, {"label", pairs.label(r)},
                            {"nodes", {pairs.universe()[p.first], pairs.universe()[p.second]}}});
  }
  return doc.dump(2) + "\n";
}

void write_network(const MultilevelNetwork& net, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  csv::write_text(dir / "W.csv", format_affiliation_csv(net));
  csv::write_text(dir / "Y.csv", format_social_csv(net));
  csv::write_text(dir / "Q.csv", format_line_graph_csv(net));
  csv::write_text(dir / "D.csv", format_colouring_csv(net));
  csv::write_text(dir / "pairs.json", format_pair_index_json(net.pair_index));
}

MultilevelNetwork read_network(const std::filesystem::path& dir) {
  const json doc = read_json(dir / "pairs.json");
  std::vector<std::string> universe;
  std::vector<NodePair> pairs;
  PairPolicy policy = PairPolicy::Explicit;
  try {
    universe = string_list(doc.at("universe"), "universe");
    policy = parse_pair_policy(doc.at("policy").get<std::string>());
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t k = 0; k < universe.size(); ++k) index.emplace(universe[k], k);
    for (const auto& p : doc.at("pairs")) {
      const auto ends = string_list(p.at("nodes"), "nodes");
      if (ends.size() != 2) throw Error(ErrorKind::Parse, "pairs.json: each pair needs two nodes");
      auto a = index.find(ends[0]), b = index.find(ends[1]);
      if (a == index.end() || b == index.end()) throw Error(ErrorKind::UnknownLabel, "pairs.json: unknown node");
      pairs.push_back({a->second, b->second});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, "pairs.json: " + std::string(e.what()));
  }
  PairIndex index(std::move(universe), std::move(pairs), policy);
  const auto labels = pair_labels(index);

  const auto w_rows = csv::read(dir / "W.csv");
  std::vector<std::string> reporters;
  for (std::size_t r = 1; r < w_rows.size(); ++r) reporters.push_back(w_rows[r].empty() ? "" : w_rows[r][0]);
  BinaryMatrix w = read_labelled_matrix(dir / "W.csv", reporters, labels);
  BinaryMatrix y = read_labelled_matrix(dir / "Y.csv", reporters, reporters);

  const auto d_rows = csv::read(dir / "D.csv");
  if (d_rows.size() != labels.size() + 1) throw Error(ErrorKind::Dimension, "D.csv: wrong number of rows");
  std::vector<std::uint8_t> d(labels.size());
  for (std::size_t r = 0; r < labels.size(); ++r) {
    const auto& row = d_rows[r + 1];
    if (row.size() != 2 || row[0] != labels[r]) throw Error(ErrorKind::UnknownLabel, "D.csv: row " + std::to_string(r + 1));
    if (row[1] != "0" && row[1] != "1") throw Error(ErrorKind::Parse, "D.csv: entry is not 0 or 1");
    d[r] = row[1] == "1";
  }

  BinaryMatrix q = build_line_graph(index);
  if (std::filesystem::exists(dir / "Q.csv") && read_labelled_matrix(dir / "Q.csv", labels, labels) != q) {
    throw Error(ErrorKind::Invariant, "Q.csv is not the line graph of the pair list");
  }
  return assemble(std::move(w), std::move(y), std::move(q), std::move(d), std::move(index), std::move(reporters));
}

MultilevelNetwork load_network(const std::filesystem::path& path) {
  if (std::filesystem::is_directory(path)) return read_network(path);
  return run_manifest(load_manifest(path)).network;
}

}  // namespace nonml
