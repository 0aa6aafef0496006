#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "nonml/matrix.hpp"
#include "nonml/transform.hpp"

namespace nonml {

/// Quantities that depend only on the fixed top level (Q, D and the pair
/// list). Computed once and shared between states.
struct TopStructure {
  std::size_t e = 0;
  BinaryMatrix q;
  std::vector<std::vector<std::uint32_t>> q_adj;
  std::vector<std::int64_t> q_degree;
  std::vector<std::int64_t> q_triangles;  // Q-triangles containing r
  std::vector<std::uint8_t> d;
  // Number of criterion two-paths t-s-t' (D_t = D_t' = 1) closed by pair r.
  std::vector<std::int64_t> criterion_two_paths;
  // chord_partners[t] lists t' sharing a node with t whose closing pair is a
  // criterion tie (D = 1).
  std::vector<std::vector<std::uint32_t>> chord_partners;

  static std::shared_ptr<const TopStructure> build(const MultilevelNetwork& net);
};

/// Mutable W and Y together with the incremental counts every statistic and
/// change statistic is computed from. Toggling a cell updates all caches in
/// O(n + e).
class NetworkState {
 public:
  explicit NetworkState(const MultilevelNetwork& net);
  NetworkState(const MultilevelNetwork& net, std::shared_ptr<const TopStructure> top);

  std::size_t n() const noexcept { return n_; }
  std::size_t e() const noexcept { return e_; }
  const TopStructure& top() const noexcept { return *top_; }
  const std::shared_ptr<const TopStructure>& top_ptr() const noexcept { return top_; }

  std::uint8_t w(std::size_t i, std::size_t r) const { return w_(i, r); }
  std::uint8_t y(std::size_t i, std::size_t j) const { return y_(i, j); }
  const BinaryMatrix& w_matrix() const noexcept { return w_; }
  const BinaryMatrix& y_matrix() const noexcept { return y_; }

  void toggle_w(std::size_t i, std::size_t r);
  void toggle_y(std::size_t i, std::size_t j);

  // Degrees.
  std::int64_t y_degree(std::size_t i) const { return y_degree_[i]; }
  std::int64_t x_degree(std::size_t i) const { return x_degree_[i]; }   // row sum of W
  std::int64_t b_degree(std::size_t r) const { return b_degree_[r]; }   // column sum of W
  std::int64_t q_degree(std::size_t r) const { return top_->q_degree[r]; }

  // Pair counts.
  std::int64_t shared_partners(std::size_t i, std::size_t j) const { return sp_[i * n_ + j]; }
  std::int64_t y_triangles(std::size_t i) const { return y_triangles_[i]; }
  std::int64_t co_affiliations(std::size_t i, std::size_t j) const { return m_[i * n_ + j]; }
  std::int64_t co_reporters(std::size_t r, std::size_t t) const { return c_[r * e_ + t]; }
  /// Σ_t W_it Q_rt.
  std::int64_t w_q(std::size_t i, std::size_t r) const { return wq_[i * e_ + r]; }
  /// Σ_{r,t} W_ir W_jt Q_rt.
  std::int64_t h(std::size_t i, std::size_t j) const { return h_[i * n_ + j]; }
  /// Σ_r W_ir q_r.
  std::int64_t w_q_degree(std::size_t i) const { return w_qdeg_[i]; }

  const std::vector<std::uint32_t>& w_row(std::size_t i) const { return w_rows_[i]; }
  const std::vector<std::uint32_t>& w_col(std::size_t r) const { return w_cols_[r]; }
  const std::vector<std::uint32_t>& y_neighbours(std::size_t i) const { return y_adj_[i]; }

  /// Copy of `base` with this state's W and Y.
  MultilevelNetwork snapshot(const MultilevelNetwork& base) const;

 private:
  void rebuild();
  static void list_toggle(std::vector<std::uint32_t>& list, std::uint32_t v, bool add);

  std::size_t n_ = 0;
  std::size_t e_ = 0;
  std::shared_ptr<const TopStructure> top_;
  BinaryMatrix w_;
  BinaryMatrix y_;

  std::vector<std::int64_t> y_degree_, x_degree_, b_degree_, y_triangles_, w_qdeg_;
  std::vector<std::int32_t> sp_, m_, c_, wq_, h_;
  std::vector<std::vector<std::uint32_t>> w_rows_, w_cols_, y_adj_;
};

}  // namespace nonml
