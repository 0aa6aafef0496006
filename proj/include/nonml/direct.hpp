#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "nonml/graph.hpp"
#include "nonml/matrix.hpp"
#include "nonml/rng.hpp"

namespace nonml {

enum class MultiplexKind { Entrainment, Exchange };

struct MultiplexStatSpec {
  MultiplexKind kind = MultiplexKind::Entrainment;
  std::size_t i = 0;  // reporter indices
  std::size_t j = 0;
  bool y_gated = false;
};

/// Entrainment: sum_{k<h} X_ikh X_jkh. Exchange: two-paths k-h-l of reporter
/// i (each counted once, k < l) closed by reporter j's tie k-l. Gating
/// multiplies by Y_ij.
double multiplex_statistic(const ReportSet& reports, const BinaryMatrix& y, const MultiplexStatSpec& spec);

double logistic(double x);

/// logistic(theta0 + theta1 * sum_{j != i} Y_ij X_j,uv).
double alaam_conditional_probability(const ReportSet& reports, const BinaryMatrix& y, std::size_t u,
                                     std::size_t v, std::size_t reporter, double theta0, double theta1);

/// X_{., uv}: one entry per reporter.
std::vector<std::uint8_t> report_column(const ReportSet& reports, std::size_t u, std::size_t v);

/// One full-conditional pass over the reporters in order, updating `column`
/// in place.
void alaam_gibbs_sweep(std::vector<std::uint8_t>& column, const BinaryMatrix& y, double theta0, double theta1,
                       Rng& rng);

/// One sweep started from the observed column of pair {u, v}.
std::vector<std::uint8_t> alaam_gibbs_sweep(const ReportSet& reports, const BinaryMatrix& y, std::size_t u,
                                            std::size_t v, double theta0, double theta1, std::uint64_t seed);

}  // namespace nonml
