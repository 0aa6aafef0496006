#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nonml/sampler.hpp"

namespace nonml {

struct GofRow {
  std::string statistic;
  double observed = 0;
  double mean = 0;
  double sd = 0;
  double t_ratio = 0;
  bool flagged = false;  // sd = 0 while observed differs from the mean
};

struct GofTable {
  std::vector<GofRow> rows;
  std::vector<std::string> warnings;
};

struct GofOptions {
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> burnin;
  std::optional<std::uint64_t> thin;
  std::size_t chains = 1;
  std::size_t threads = 1;
  bool include_summary = true;
};

/// (observed - mean) / sd. With sd = 0 the ratio is +1 when observed equals
/// the mean and +-Inf (flagged) otherwise; NaN inputs give NaN.
double gof_t_ratio(double observed, double mean, double sd, bool* flagged = nullptr);

/// Every registry statistic, plus any model effect whose lambda differs from
/// the default.
std::vector<StatisticId> default_gof_statistics(const ModelSpec& spec);

/// Row label of a statistic; non-default lambdas are appended.
std::string gof_label(const StatisticId& id);

/// Simulates at the model's parameters and tabulates observed, mean, sd and
/// t-ratio for every auxiliary statistic and, optionally, the summary rows.
/// `aux` must contain every model effect.
GofTable gof(const MultilevelNetwork& observed, const ModelSpec& fitted, std::span<const StatisticId> aux,
             const GofOptions& options);

/// CSV with header statistic,observed,mean,sd,t-ratio.
std::string format_gof_csv(const GofTable& table);

}  // namespace nonml
