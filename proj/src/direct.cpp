#include "nonml/direct.hpp"

#include <cmath>

#include "nonml/error.hpp"

namespace nonml {
namespace {

void check_reporter(const ReportSet& reports, const BinaryMatrix& y, std::size_t i) {
  if (y.rows() != reports.reporter_count() || y.cols() != reports.reporter_count()) {
    throw Error(ErrorKind::Dimension, "Y must be n x n for the report set");
  }
  if (i >= reports.reporter_count()) throw Error(ErrorKind::Dimension, "reporter index out of range");
}

}  // namespace

double multiplex_statistic(const ReportSet& reports, const BinaryMatrix& y, const MultiplexStatSpec& spec) {
  check_reporter(reports, y, spec.i);
  check_reporter(reports, y, spec.j);
  if (spec.i == spec.j) throw Error(ErrorKind::InvalidParameter, "multiplex statistic needs two distinct reporters");
  const BinaryMatrix& xi = reports.slice(spec.i);
  const BinaryMatrix& xj = reports.slice(spec.j);
  const std::size_t nn = reports.universe_size();
  double total = 0;
  if (spec.kind == MultiplexKind::Entrainment) {
    for (std::size_t k = 0; k < nn; ++k)
      for (std::size_t h = k + 1; h < nn; ++h) total += xi(k, h) * xj(k, h);
  } else {
    for (std::size_t h = 0; h < nn; ++h)
      for (std::size_t k = 0; k < nn; ++k) {
        if (k == h || !xi(k, h)) continue;
        for (std::size_t l = k + 1; l < nn; ++l)
          if (l != h) total += xi(h, l) * xj(k, l);
      }
  }
  return spec.y_gated ? total * y(spec.i, spec.j) : total;
}

double logistic(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double alaam_conditional_probability(const ReportSet& reports, const BinaryMatrix& y, std::size_t u,
                                     std::size_t v, std::size_t reporter, double theta0, double theta1) {
  check_reporter(reports, y, reporter);
  if (u >= reports.universe_size() || v >= reports.universe_size() || u == v) {
    throw Error(ErrorKind::InvalidParameter, "ALAAM pair must be two distinct universe nodes");
  }
  double exposure = 0;
  for (std::size_t j = 0; j < reports.reporter_count(); ++j)
    if (j != reporter) exposure += y(reporter, j) * reports(j, u, v);
  return logistic(theta0 + theta1 * exposure);
}

std::vector<std::uint8_t> report_column(const ReportSet& reports, std::size_t u, std::size_t v) {
  std::vector<std::uint8_t> column(reports.reporter_count());
  for (std::size_t i = 0; i < column.size(); ++i) column[i] = reports(i, u, v);
  return column;
}

void alaam_gibbs_sweep(std::vector<std::uint8_t>& column, const BinaryMatrix& y, double theta0, double theta1,
                       Rng& rng) {
  const std::size_t n = column.size();
  if (y.rows() != n || y.cols() != n) throw Error(ErrorKind::Dimension, "Y must be n x n for the response vector");
  for (std::size_t i = 0; i < n; ++i) {
    double exposure = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) exposure += y(i, j) * column[j];
    column[i] = uniform01(rng) < logistic(theta0 + theta1 * exposure) ? 1 : 0;
  }
}

std::vector<std::uint8_t> alaam_gibbs_sweep(const ReportSet& reports, const BinaryMatrix& y, std::size_t u,
                                            std::size_t v, double theta0, double theta1, std::uint64_t seed) {
  auto column = report_column(reports, u, v);
  Rng rng = make_rng(seed);
  alaam_gibbs_sweep(column, y, theta0, theta1, rng);
  return column;
}

}  // namespace nonml
