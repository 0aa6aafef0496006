#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "nonml/graph.hpp"
#include "nonml/transform.hpp"

namespace nonml::testing {

using Edge = std::pair<std::string, std::string>;

inline LabeledGraph graph_from_edges(const std::vector<std::string>& labels, const std::vector<Edge>& edges) {
  LabeledGraph g(labels);
  for (const auto& [a, b] : edges) g.set_edge(g.index_of(a), g.index_of(b), true);
  return g;
}

/// The three-reporter example: universe {u,s,v}; H_i = {us, uv},
/// H_j = {us, sv}, H_k = {sv}; social ties ij and jk; criterion {us}.
struct Toy {
  std::vector<std::string> universe{"u", "s", "v"};
  std::vector<std::string> reporters{"i", "j", "k"};
  ReportSet reports;
  LabeledGraph social;
  LabeledGraph criterion;

  Toy()
      : reports(universe, reporters,
                {graph_from_edges(universe, {{"u", "s"}, {"u", "v"}}).adjacency(),
                 graph_from_edges(universe, {{"u", "s"}, {"s", "v"}}).adjacency(),
                 graph_from_edges(universe, {{"s", "v"}}).adjacency()}),
        social(graph_from_edges(reporters, {{"i", "j"}, {"j", "k"}})),
        criterion(graph_from_edges(universe, {{"u", "s"}})) {}

  MultilevelNetwork network(PairPolicy policy = PairPolicy::Full) const {
    return transform(reports, social, &criterion, policy).network;
  }
};

/// Column of pair {a, b} in the network's pair index.
inline std::size_t pair_col(const MultilevelNetwork& net, const std::string& a, const std::string& b) {
  const auto& u = net.pair_index.universe();
  std::size_t ia = 0, ib = 0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (u[k] == a) ia = k;
    if (u[k] == b) ib = k;
  }
  return *net.pair_index.find(ia, ib);
}

inline std::size_t reporter_row(const MultilevelNetwork& net, const std::string& label) {
  for (std::size_t i = 0; i < net.reporters.size(); ++i)
    if (net.reporters[i] == label) return i;
  return net.reporters.size();
}

/// Random multilevel network with n reporters and e pairs drawn from a
/// universe large enough to hold them. W, Y and D densities are drawn
/// uniformly from (0, 1).
inline MultilevelNetwork random_network(std::mt19937_64& rng, std::size_t n, std::size_t e) {
  std::size_t universe_size = 2;
  while (universe_size * (universe_size - 1) / 2 < e) ++universe_size;
  std::uniform_int_distribution<std::size_t> extra(0, 2);
  universe_size += extra(rng);
  std::vector<std::string> universe;
  for (std::size_t k = 0; k < universe_size; ++k) universe.push_back("u" + std::to_string(k));
  std::vector<NodePair> all;
  for (std::size_t a = 0; a < universe_size; ++a)
    for (std::size_t b = a + 1; b < universe_size; ++b) all.push_back({a, b});
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(e);
  PairIndex pairs(universe, all, PairPolicy::Explicit);

  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double pw = unif(rng), py = unif(rng), pd = unif(rng);
  BinaryMatrix w(n, e), y(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t r = 0; r < e; ++r) w(i, r) = unif(rng) < pw;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) y.set_symmetric(i, j, unif(rng) < py);
  std::vector<std::uint8_t> d(e);
  for (auto& v : d) v = unif(rng) < pd;
  std::vector<std::string> reporters;
  for (std::size_t i = 0; i < n; ++i) reporters.push_back("r" + std::to_string(i));
  BinaryMatrix q = build_line_graph(pairs);
  return assemble(std::move(w), std::move(y), std::move(q), std::move(d), std::move(pairs), std::move(reporters));
}

}  // namespace nonml::testing
