#include "nonml/transform.hpp"

#include <algorithm>
#include <set>

#include "nonml/error.hpp"

namespace nonml {

std::string to_string(PairPolicy policy) {
  switch (policy) {
    case PairPolicy::Full: return "full";
    case PairPolicy::Union: return "union";
    case PairPolicy::Explicit: return "explicit";
  }
  return "full";
}

PairPolicy parse_pair_policy(const std::string& text) {
  if (text == "full" || text == "FULL") return PairPolicy::Full;
  if (text == "union" || text == "UNION") return PairPolicy::Union;
  if (text == "explicit" || text == "EXPLICIT") return PairPolicy::Explicit;
  throw Error(ErrorKind::InvalidParameter, "unknown pair policy '" + text + "'");
}

std::uint64_t PairIndex::key(std::size_t u, std::size_t v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint64_t>(v);
}

PairIndex::PairIndex(std::vector<std::string> universe, std::vector<NodePair> pairs, PairPolicy policy)
    : universe_(std::move(universe)), pairs_(std::move(pairs)), policy_(policy) {
  for (std::size_t r = 0; r < pairs_.size(); ++r) {
    NodePair& p = pairs_[r];
    if (p.first >= universe_.size() || p.second >= universe_.size()) {
      throw Error(ErrorKind::UnknownLabel, "pair refers to a node outside the universe");
    }
    if (p.first == p.second) {
      throw Error(ErrorKind::SelfLoop, "self-pair on node '" + universe_[p.first] + "'");
    }
    if (p.first > p.second) std::swap(p.first, p.second);
    if (!index_.emplace(key(p.first, p.second), r).second) {
      throw Error(ErrorKind::DuplicateLabel, "duplicate pair " + label(r));
    }
  }
}

std::optional<std::size_t> PairIndex::find(std::size_t u, std::size_t v) const {
  auto it = index_.find(key(u, v));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string PairIndex::label(std::size_t r) const {
  const NodePair& p = pairs_.at(r);
  const std::string& a = universe_[p.first];
  const std::string& b = universe_[p.second];
  return a < b ? a + "|" + b : b + "|" + a;
}

BinaryMatrix MultilevelNetwork::blocked() const {
  const std::size_t e = pair_count();
  const std::size_t n = reporter_count();
  BinaryMatrix c(e + n, e + n);
  for (std::size_t r = 0; r < e; ++r)
    for (std::size_t t = 0; t < e; ++t) c(r, t) = q(r, t);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t r = 0; r < e; ++r) {
      c(e + i, r) = w(i, r);
      c(r, e + i) = w(i, r);
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) c(e + i, e + j) = y(i, j);
  return c;
}

namespace {

// Pairs sorted lexicographically on (smaller label, larger label).
std::vector<NodePair> canonical_order(const std::vector<std::string>& universe,
                                      const std::set<std::pair<std::size_t, std::size_t>>& raw) {
  struct Keyed {
    const std::string* lo;
    const std::string* hi;
    NodePair pair;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(raw.size());
  for (auto [u, v] : raw) {
    const std::string* a = &universe[u];
    const std::string* b = &universe[v];
    NodePair p{u, v};
    if (*b < *a) {
      std::swap(a, b);
      std::swap(p.first, p.second);
    }
    keyed.push_back({a, b, p});
  }
  std::sort(keyed.begin(), keyed.end(), [](const Keyed& x, const Keyed& y) {
    if (*x.lo != *y.lo) return *x.lo < *y.lo;
    return *x.hi < *y.hi;
  });
  std::vector<NodePair> out;
  out.reserve(keyed.size());
  for (const auto& k : keyed) out.push_back(k.pair);
  return out;
}

std::vector<std::size_t> criterion_map(const ReportSet& reports, const LabeledGraph& criterion) {
  // Criterion node index -> universe index.
  std::vector<std::size_t> map(criterion.size());
  for (std::size_t u = 0; u < criterion.size(); ++u) map[u] = reports.universe_index(criterion.labels()[u]);
  return map;
}

}  // namespace

PairIndex build_pair_index(const ReportSet& reports, const LabeledGraph* criterion, PairPolicy policy,
                           std::span<const std::pair<std::string, std::string>> explicit_pairs) {
  const auto& universe = reports.universe();
  const std::size_t n_nodes = universe.size();
  auto ordered = [](std::size_t u, std::size_t v) { return u < v ? std::pair{u, v} : std::pair{v, u}; };

  if (policy == PairPolicy::Explicit) {
    std::vector<NodePair> pairs;
    pairs.reserve(explicit_pairs.size());
    for (const auto& [a, b] : explicit_pairs) {
      const std::size_t u = reports.universe_index(a);
      const std::size_t v = reports.universe_index(b);
      if (u == v) throw Error(ErrorKind::SelfLoop, "explicit pair list contains self-pair on '" + a + "'");
      // Keep the caller's order; store endpoints label-sorted.
      pairs.push_back(universe[u] < universe[v] ? NodePair{u, v} : NodePair{v, u});
    }
    return PairIndex(universe, std::move(pairs), policy);
  }

  std::set<std::pair<std::size_t, std::size_t>> raw;
  if (policy == PairPolicy::Full) {
    for (std::size_t u = 0; u < n_nodes; ++u)
      for (std::size_t v = u + 1; v < n_nodes; ++v) raw.insert({u, v});
  } else {
    for (std::size_t i = 0; i < reports.reporter_count(); ++i)
      for (std::size_t u = 0; u < n_nodes; ++u)
        for (std::size_t v = u + 1; v < n_nodes; ++v)
          if (reports(i, u, v)) raw.insert({u, v});
    if (criterion != nullptr) {
      const auto map = criterion_map(reports, *criterion);
      for (std::size_t a = 0; a < criterion->size(); ++a)
        for (std::size_t b = a + 1; b < criterion->size(); ++b)
          if (criterion->has_edge(a, b)) raw.insert(ordered(map[a], map[b]));
    }
  }
  return PairIndex(universe, canonical_order(universe, raw), policy);
}

Affiliation build_affiliation(const ReportSet& reports, const PairIndex& pairs) {
  if (pairs.universe() != reports.universe()) {
    throw Error(ErrorKind::Precondition, "pair index and reports use different universes");
  }
  Affiliation out;
  const std::size_t n = reports.reporter_count();
  const std::size_t n_nodes = reports.universe_size();
  out.w = BinaryMatrix(n, pairs.size());
  out.dropped_per_reporter.assign(n, 0);
  std::set<std::pair<std::size_t, std::size_t>> dropped_seen;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t u = 0; u < n_nodes; ++u)
      for (std::size_t v = u + 1; v < n_nodes; ++v) {
        if (!reports(i, u, v)) continue;
        if (auto r = pairs.find(u, v)) {
          out.w(i, *r) = 1;
        } else {
          ++out.dropped_edges;
          ++out.dropped_per_reporter[i];
          if (dropped_seen.insert({u, v}).second) out.dropped_pairs.push_back({u, v});
        }
      }
  }
  return out;
}

std::vector<std::uint8_t> build_colouring(const LabeledGraph& criterion, const PairIndex& pairs) {
  std::vector<std::size_t> map(pairs.universe().size());
  for (std::size_t u = 0; u < map.size(); ++u) map[u] = criterion.index_of(pairs.universe()[u]);
  std::vector<std::uint8_t> d(pairs.size(), 0);
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    const NodePair& p = pairs.pair(r);
    d[r] = criterion.has_edge(map[p.first], map[p.second]) ? 1 : 0;
  }
  return d;
}

BinaryMatrix build_line_graph(const PairIndex& pairs) {
  const std::size_t e = pairs.size();
  // Bucket pairs by node so only pairs sharing a node are visited.
  std::vector<std::vector<std::size_t>> incident(pairs.universe().size());
  for (std::size_t r = 0; r < e; ++r) {
    incident[pairs.pair(r).first].push_back(r);
    incident[pairs.pair(r).second].push_back(r);
  }
  BinaryMatrix q(e, e);
  for (const auto& bucket : incident)
    for (std::size_t a = 0; a < bucket.size(); ++a)
      for (std::size_t b = a + 1; b < bucket.size(); ++b) q.set_symmetric(bucket[a], bucket[b], 1);
  return q;
}

MultilevelNetwork assemble(BinaryMatrix w, BinaryMatrix y, BinaryMatrix q, std::vector<std::uint8_t> d,
                           PairIndex pairs, std::vector<std::string> reporters) {
  const std::size_t e = pairs.size();
  const std::size_t n = y.rows();
  if (!y.is_square()) throw Error(ErrorKind::Dimension, "Y must be square");
  if (w.rows() != n || w.cols() != e) throw Error(ErrorKind::Dimension, "W must be n x e");
  if (q.rows() != e || q.cols() != e) throw Error(ErrorKind::Dimension, "Q must be e x e");
  if (d.size() != e) throw Error(ErrorKind::Dimension, "D must have length e");
  if (reporters.size() != n) throw Error(ErrorKind::Dimension, "one reporter label is required per row of Y");
  if (!w.is_binary() || !y.is_binary() || !q.is_binary()) {
    throw Error(ErrorKind::Invariant, "W, Y and Q must be binary");
  }
  for (auto v : d)
    if (v > 1) throw Error(ErrorKind::Invariant, "D must be binary");
  if (!y.has_zero_diagonal()) throw Error(ErrorKind::SelfLoop, "Y has a self-loop");
  if (!y.is_symmetric()) throw Error(ErrorKind::Asymmetric, "Y is not symmetric");
  const BinaryMatrix expected = build_line_graph(pairs);
  for (std::size_t r = 0; r < e; ++r)
    for (std::size_t t = 0; t < e; ++t)
      if (q(r, t) != expected(r, t)) {
        throw Error(ErrorKind::Invariant, "Q is not the line graph of the pair list at (" + pairs.label(r) +
                                              ", " + pairs.label(t) + ")");
      }
  return MultilevelNetwork{std::move(q), std::move(w), std::move(y), std::move(d), std::move(pairs),
                           std::move(reporters)};
}

TransformResult transform(const ReportSet& reports, const LabeledGraph& social, const LabeledGraph* criterion,
                          PairPolicy policy, std::span<const std::pair<std::string, std::string>> explicit_pairs) {
  PairIndex pairs = build_pair_index(reports, criterion, policy, explicit_pairs);
  Affiliation aff = build_affiliation(reports, pairs);
  std::vector<std::uint8_t> d =
      criterion != nullptr ? build_colouring(*criterion, pairs) : std::vector<std::uint8_t>(pairs.size(), 0);
  BinaryMatrix q = build_line_graph(pairs);
  const LabeledGraph y = social.reordered(reports.reporters());
  TransformResult out{assemble(std::move(aff.w), y.adjacency(), std::move(q), std::move(d), std::move(pairs),
                               reports.reporters()),
                      aff.dropped_edges, aff.dropped_pairs.size()};
  return out;
}

}  // namespace nonml
