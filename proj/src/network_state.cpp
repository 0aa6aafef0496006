#include "nonml/network_state.hpp"

#include <algorithm>

#include "nonml/error.hpp"

namespace nonml {

std::shared_ptr<const TopStructure> TopStructure::build(const MultilevelNetwork& net) {
  auto top = std::make_shared<TopStructure>();
  const std::size_t e = net.pair_count();
  top->e = e;
  top->q = net.q;
  top->d = net.d;
  top->q_adj.resize(e);
  top->q_degree.assign(e, 0);
  for (std::size_t r = 0; r < e; ++r) {
    for (std::size_t t = 0; t < e; ++t)
      if (net.q(r, t)) top->q_adj[r].push_back(static_cast<std::uint32_t>(t));
    top->q_degree[r] = static_cast<std::int64_t>(top->q_adj[r].size());
  }

  top->q_triangles.assign(e, 0);
  for (std::size_t r = 0; r < e; ++r) {
    const auto& adj = top->q_adj[r];
    std::int64_t count = 0;
    for (std::size_t a = 0; a < adj.size(); ++a)
      for (std::size_t b = a + 1; b < adj.size(); ++b) count += net.q(adj[a], adj[b]);
    top->q_triangles[r] = count;
  }

  // Criterion closure structures need the pair pre-images.
  const PairIndex& pi = net.pair_index;
  top->criterion_two_paths.assign(e, 0);
  top->chord_partners.assign(e, {});
  if (pi.size() != e) return top;
  auto other_end = [](const NodePair& p, std::size_t shared) { return p.first == shared ? p.second : p.first; };
  auto shared_node = [](const NodePair& a, const NodePair& b) -> std::size_t {
    if (a.first == b.first || a.first == b.second) return a.first;
    return a.second;
  };
  for (std::size_t r = 0; r < e; ++r) {
    const NodePair& pr = pi.pair(r);
    for (std::uint32_t t : top->q_adj[r]) {
      const NodePair& pt = pi.pair(t);
      const std::size_t s = shared_node(pr, pt);
      const std::size_t a = other_end(pr, s);
      const std::size_t b = other_end(pt, s);
      auto closing = pi.find(a, b);
      if (closing && net.d[*closing]) top->chord_partners[r].push_back(t);
    }
    // Two-paths u-s-v in the criterion with {u,v} = pair r.
    std::int64_t count = 0;
    for (std::uint32_t t : top->q_adj[r]) {
      const NodePair& pt = pi.pair(t);
      if (!net.d[t]) continue;
      // t = {u, s} with u = pr.first.
      if (pt.first != pr.first && pt.second != pr.first) continue;
      const std::size_t s = other_end(pt, pr.first);
      if (s == pr.second) continue;
      auto t2 = pi.find(s, pr.second);
      if (t2 && net.d[*t2]) ++count;
    }
    top->criterion_two_paths[r] = count;
  }
  return top;
}

NetworkState::NetworkState(const MultilevelNetwork& net) : NetworkState(net, TopStructure::build(net)) {}

NetworkState::NetworkState(const MultilevelNetwork& net, std::shared_ptr<const TopStructure> top)
    : n_(net.reporter_count()), e_(net.pair_count()), top_(std::move(top)), w_(net.w), y_(net.y) {
  if (top_->e != e_ || w_.rows() != n_ || w_.cols() != e_) {
    throw Error(ErrorKind::Dimension, "network state does not match its top-level structure");
  }
  rebuild();
}

void NetworkState::rebuild() {
  const std::size_t n = n_;
  const std::size_t e = e_;
  y_degree_.assign(n, 0);
  x_degree_.assign(n, 0);
  b_degree_.assign(e, 0);
  y_triangles_.assign(n, 0);
  w_qdeg_.assign(n, 0);
  sp_.assign(n * n, 0);
  m_.assign(n * n, 0);
  c_.assign(e * e, 0);
  wq_.assign(n * e, 0);
  h_.assign(n * n, 0);
  w_rows_.assign(n, {});
  w_cols_.assign(e, {});
  y_adj_.assign(n, {});

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (y_(i, j)) y_adj_[i].push_back(static_cast<std::uint32_t>(j));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t r = 0; r < e; ++r)
      if (w_(i, r)) {
        w_rows_[i].push_back(static_cast<std::uint32_t>(r));
        w_cols_[r].push_back(static_cast<std::uint32_t>(i));
      }

  for (std::size_t i = 0; i < n; ++i) {
    y_degree_[i] = static_cast<std::int64_t>(y_adj_[i].size());
    x_degree_[i] = static_cast<std::int64_t>(w_rows_[i].size());
  }
  for (std::size_t r = 0; r < e; ++r) b_degree_[r] = static_cast<std::int64_t>(w_cols_[r].size());

  for (std::size_t i = 0; i < n; ++i)
    for (std::uint32_t k : y_adj_[i])
      for (std::uint32_t j : y_adj_[k])
        if (j != i) ++sp_[i * n + j];
  for (std::size_t i = 0; i < n; ++i) {
    std::int64_t t = 0;
    for (std::uint32_t j : y_adj_[i]) t += sp_[i * n + j];
    y_triangles_[i] = t / 2;
  }

  for (std::size_t r = 0; r < e; ++r) {
    const auto& col = w_cols_[r];
    for (std::size_t a = 0; a < col.size(); ++a)
      for (std::size_t b = a + 1; b < col.size(); ++b) {
        ++m_[col[a] * n + col[b]];
        ++m_[col[b] * n + col[a]];
      }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = w_rows_[i];
    for (std::size_t a = 0; a < row.size(); ++a)
      for (std::size_t b = a + 1; b < row.size(); ++b) {
        ++c_[row[a] * e + row[b]];
        ++c_[row[b] * e + row[a]];
      }
    for (std::uint32_t r : row) {
      w_qdeg_[i] += top_->q_degree[r];
      for (std::uint32_t t : top_->q_adj[r]) ++wq_[i * e + t];
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      std::int64_t s = 0;
      for (std::uint32_t r : w_rows_[i]) s += wq_[j * e + r];
      h_[i * n + j] = static_cast<std::int32_t>(s);
    }
}

void NetworkState::list_toggle(std::vector<std::uint32_t>& list, std::uint32_t v, bool add) {
  if (add) {
    list.insert(std::lower_bound(list.begin(), list.end(), v), v);
  } else {
    list.erase(std::lower_bound(list.begin(), list.end(), v));
  }
}

void NetworkState::toggle_w(std::size_t i, std::size_t r) {
  const bool add = w_(i, r) == 0;
  const std::int32_t s = add ? 1 : -1;
  const std::size_t n = n_;
  const std::size_t e = e_;
  w_(i, r) = add ? 1 : 0;

  // Caches below are updated from the other rows/columns, which the toggle
  // does not touch; the order of these blocks matters only for w_rows_/w_cols_.
  for (std::uint32_t j : w_cols_[r]) {
    if (j == i) continue;
    m_[i * n + j] += s;
    m_[j * n + i] += s;
  }
  for (std::uint32_t t : w_rows_[i]) {
    if (t == r) continue;
    c_[r * e + t] += s;
    c_[t * e + r] += s;
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) continue;
    const std::int32_t delta = s * wq_[j * e + r];
    h_[i * n + j] += delta;
    h_[j * n + i] += delta;
  }
  for (std::uint32_t t : top_->q_adj[r]) wq_[i * e + t] += s;

  x_degree_[i] += s;
  b_degree_[r] += s;
  w_qdeg_[i] += s * top_->q_degree[r];
  list_toggle(w_rows_[i], static_cast<std::uint32_t>(r), add);
  list_toggle(w_cols_[r], static_cast<std::uint32_t>(i), add);
}

void NetworkState::toggle_y(std::size_t i, std::size_t j) {
  if (i == j) throw Error(ErrorKind::SelfLoop, "cannot toggle a Y self-loop");
  const bool add = y_(i, j) == 0;
  const std::int32_t s = add ? 1 : -1;
  const std::size_t n = n_;
  y_.set_symmetric(i, j, add ? 1 : 0);

  // Shared partners: j becomes/stops being a partner of (i,k) for k ~ j, and
  // i of (j,k) for k ~ i. The adjacency lists still exclude the toggled edge.
  const std::int64_t common = sp_[i * n + j];
  for (std::uint32_t k : y_adj_[j]) {
    sp_[i * n + k] += s;
    sp_[k * n + i] += s;
  }
  for (std::uint32_t k : y_adj_[i]) {
    sp_[j * n + k] += s;
    sp_[k * n + j] += s;
  }
  y_triangles_[i] += s * common;
  y_triangles_[j] += s * common;
  for (std::uint32_t k : y_adj_[i])
    if (y_(j, k)) y_triangles_[k] += s;

  y_degree_[i] += s;
  y_degree_[j] += s;
  list_toggle(y_adj_[i], static_cast<std::uint32_t>(j), add);
  list_toggle(y_adj_[j], static_cast<std::uint32_t>(i), add);
}

MultilevelNetwork NetworkState::snapshot(const MultilevelNetwork& base) const {
  MultilevelNetwork out = base;
  out.w = w_;
  out.y = y_;
  return out;
}

}  // namespace nonml
