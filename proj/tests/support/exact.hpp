#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "nonml/network_state.hpp"
#include "nonml/sampler.hpp"
#include "nonml/statistics.hpp"
#include "nonml/transform.hpp"

namespace nonml::testing {

inline double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  double tv = 0;
  for (std::size_t k = 0; k < p.size(); ++k) tv += std::abs(p[k] - q[k]);
  return tv / 2;
}

inline std::vector<double> normalised(const std::vector<double>& counts) {
  double total = 0;
  for (double c : counts) total += c;
  std::vector<double> out(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) out[k] = counts[k] / total;
  return out;
}

/// Exact ALAAM law over all 2^n response vectors; bit i of the index is
/// reporter i. Weight exp(theta0 sum x_i + theta1 sum_{i<j} Y_ij x_i x_j).
inline std::vector<double> alaam_exact(const BinaryMatrix& y, double theta0, double theta1) {
  const std::size_t n = y.rows();
  std::vector<double> weight(std::size_t{1} << n);
  for (std::size_t s = 0; s < weight.size(); ++s) {
    double score = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!((s >> i) & 1)) continue;
      score += theta0;
      for (std::size_t j = i + 1; j < n; ++j)
        if ((s >> j) & 1) score += theta1 * y(i, j);
    }
    weight[s] = std::exp(score);
  }
  return normalised(weight);
}

inline std::size_t encode_column(const std::vector<std::uint8_t>& column) {
  std::size_t s = 0;
  for (std::size_t i = 0; i < column.size(); ++i) s |= std::size_t(column[i] != 0) << i;
  return s;
}

/// Enumerates the free cells of an unmasked model: W row-major, then Y (i<j).
/// Bit k of a state index is free cell k.
struct CellEnumeration {
  std::size_t n = 0, e = 0;
  bool w_free = false, y_free = false;

  CellEnumeration(const MultilevelNetwork& net, const ModelSpec& spec)
      : n(net.reporter_count()), e(net.pair_count()), w_free(spec.is_free(Layer::W)), y_free(spec.is_free(Layer::Y)) {}

  std::size_t cells() const { return (w_free ? n * e : 0) + (y_free ? n * (n - 1) / 2 : 0); }

  std::size_t encode(const NetworkState& s) const {
    std::size_t code = 0, bit = 0;
    if (w_free)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t r = 0; r < e; ++r) code |= std::size_t(s.w(i, r) != 0) << bit++;
    if (y_free)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) code |= std::size_t(s.y(i, j) != 0) << bit++;
    return code;
  }

  MultilevelNetwork decode(const MultilevelNetwork& base, std::size_t code) const {
    MultilevelNetwork out = base;
    std::size_t bit = 0;
    if (w_free)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t r = 0; r < e; ++r) out.w(i, r) = (code >> bit++) & 1;
    if (y_free)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) out.y.set_symmetric(i, j, (code >> bit++) & 1);
    return out;
  }
};

/// Exact Boltzmann law exp(theta' z) over every configuration of the free cells.
inline std::vector<double> boltzmann_exact(const MultilevelNetwork& base, const ModelSpec& spec) {
  const CellEnumeration cells(base, spec);
  const auto ids = spec.ids();
  const auto theta = spec.theta();
  std::vector<double> score(std::size_t{1} << cells.cells());
  double top = -INFINITY;
  for (std::size_t s = 0; s < score.size(); ++s) {
    const auto z = compute_statistics(cells.decode(base, s), ids);
    double v = 0;
    for (std::size_t k = 0; k < z.size(); ++k) v += theta[k] * z[k].value;
    score[s] = v;
    top = std::max(top, v);
  }
  for (auto& v : score) v = std::exp(v - top);
  return normalised(score);
}

/// Empirical state frequencies after each of `steps` MH steps from `start`.
inline std::vector<double> sampler_frequencies(const MultilevelNetwork& start, const ModelSpec& spec,
                                               std::uint64_t steps, std::uint64_t seed) {
  const CellEnumeration cells(start, spec);
  Sampler sampler(start, spec);
  Rng rng = make_rng(seed);
  std::vector<double> counts(std::size_t{1} << cells.cells(), 0.0);
  for (std::uint64_t s = 0; s < steps; ++s) {
    sampler.step(rng);
    counts[cells.encode(sampler.state())] += 1;
  }
  return normalised(counts);
}

/// Two reporters and two pairs sharing a node: four W cells and one Y cell.
inline MultilevelNetwork tiny_network() {
  PairIndex pairs({"a", "b", "c"}, {{0, 1}, {1, 2}}, PairPolicy::Explicit);
  BinaryMatrix w(2, 2), y(2, 2);
  w(0, 0) = 1;
  BinaryMatrix q = build_line_graph(pairs);
  return assemble(std::move(w), std::move(y), std::move(q), {1, 0}, std::move(pairs), {"r0", "r1"});
}

}  // namespace nonml::testing
