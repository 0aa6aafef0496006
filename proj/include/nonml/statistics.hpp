#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nonml/matrix.hpp"
#include "nonml/network_state.hpp"
#include "nonml/transform.hpp"

namespace nonml {

/// A registry statistic with its damping parameter. lambda must exceed 1; it
/// only affects alternating statistics.
struct StatisticId {
  std::string name;
  double lambda = 2.0;
  friend bool operator==(const StatisticId&, const StatisticId&) = default;
};

struct StatEntry {
  StatisticId id;
  double value = 0.0;
};

/// Values in the order they were requested.
using StatVector = std::vector<StatEntry>;

enum class Layer { W, Y, Q, D };

std::string to_string(Layer layer);
Layer parse_layer(const std::string& text);

/// A single tie variable: W_(i, j) with j a pair index, or Y_(i, j).
struct Toggle {
  Layer layer = Layer::W;
  std::size_t i = 0;
  std::size_t j = 0;
};

struct StatisticInfo {
  std::string_view name;
  bool alternating = false;
  bool experimental = false;
};

/// Every registry statistic in canonical order.
std::span<const StatisticInfo> statistic_registry();

/// Maps aliases and space-separated names to the canonical registry name.
/// Throws UnknownStatistic if the name is not registered.
std::string canonical_statistic_name(std::string_view name);

/// Canonicalises the name and validates lambda.
StatisticId make_statistic(std::string_view name, double lambda = 2.0);

/// Every registry statistic with the default lambda.
std::vector<StatisticId> all_statistics();

/// Compiled list of statistics evaluated against a NetworkState.
class StatisticSet {
 public:
  StatisticSet() = default;
  explicit StatisticSet(std::span<const StatisticId> ids);

  std::size_t size() const noexcept { return defs_.size(); }
  const std::vector<StatisticId>& ids() const noexcept { return ids_; }

  std::vector<double> values(const NetworkState& state) const;

  /// z(cell = 1) - z(cell = 0) for a cell that is currently 0 in `state`.
  void add_delta_w(const NetworkState& state, std::size_t i, std::size_t r, std::span<double> out) const;
  void add_delta_y(const NetworkState& state, std::size_t i, std::size_t j, std::span<double> out) const;

 private:
  std::vector<StatisticId> ids_;
  std::vector<std::size_t> defs_;  // positions in the registry
  std::vector<double> lambdas_;
};

StatVector compute_statistics(const MultilevelNetwork& net, std::span<const StatisticId> ids);

/// z(C with the cell set to 1) - z(C with the cell set to 0). Q and D are
/// fixed and cannot be toggled.
StatVector change_statistic(const MultilevelNetwork& net, const Toggle& toggle, std::span<const StatisticId> ids);

/// h_ij = sum_{r,t} W_ir W_jt Q_rt with a zero diagonal.
RealMatrix dyadic_covariate(const BinaryMatrix& w, const BinaryMatrix& q);

/// Degree-distribution and clustering summaries. Undefined values are NaN.
struct SummaryStats {
  double sd_degree_a = 0, skew_degree_a = 0;
  double sd_degree_xa = 0, skew_degree_xa = 0;
  double sd_degree_xb = 0, skew_degree_xb = 0;
  double sd_degree_b = 0, skew_degree_b = 0;
  double clustering_a = 0, clustering_x = 0, clustering_b = 0;

  /// (row name, value) in output order.
  std::vector<std::pair<std::string, double>> rows() const;
};

SummaryStats summary_stats(const MultilevelNetwork& net);
SummaryStats summary_stats(const NetworkState& state);

/// 3 * triangles / two-stars; NaN when there are no two-stars.
double clustering_one_mode(double triangles, double two_stars);
/// 4 * four-cycles / three-paths of the two-mode layer; NaN when there are no three-paths.
double clustering_two_mode(double four_cycles, double three_paths);

/// Names of the summary rows in output order.
std::span<const std::string_view> summary_row_names();

/// Sample standard deviation (n-1 denominator); NaN when n < 2.
double sample_sd(std::span<const double> values);
/// Adjusted Fisher-Pearson skewness; NaN when n < 3 or the variance is 0.
double sample_skewness(std::span<const double> values);

}  // namespace nonml
