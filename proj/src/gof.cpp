#include "nonml/gof.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nonml/csv.hpp"
#include "nonml/error.hpp"
#include "nonml/estimator.hpp"

namespace nonml {

double gof_t_ratio(double observed, double mean, double sd, bool* flagged) {
  if (flagged) *flagged = false;
  if (std::isnan(observed) || std::isnan(mean) || std::isnan(sd)) return std::numeric_limits<double>::quiet_NaN();
  if (sd > 0) return (observed - mean) / sd;
  if (observed == mean) return 1.0;
  if (flagged) *flagged = true;
  return observed > mean ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
}

std::vector<StatisticId> default_gof_statistics(const ModelSpec& spec) {
  std::vector<StatisticId> out = all_statistics();
  for (const auto& e : spec.effects) {
    const StatisticId id = make_statistic(e.id.name, e.id.lambda);
    if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
  }
  return out;
}

std::string gof_label(const StatisticId& id) {
  if (id.lambda == 2.0) return id.name;
  return id.name + "(lambda=" + csv::format_number(id.lambda) + ")";
}

GofTable gof(const MultilevelNetwork& observed, const ModelSpec& fitted, std::span<const StatisticId> aux,
             const GofOptions& options) {
  fitted.validate(observed);
  std::vector<StatisticId> ids;
  for (const auto& raw : aux) ids.push_back(make_statistic(raw.name, raw.lambda));
  for (const auto& e : fitted.effects) {
    const StatisticId id = make_statistic(e.id.name, e.id.lambda);
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
      throw Error(ErrorKind::Precondition, "auxiliary statistics must include model effect " + gof_label(id));
    }
  }
  if (options.samples < 2) throw Error(ErrorKind::InvalidParameter, "goodness of fit needs at least 2 samples");

  const StatisticSet set(ids);
  const std::size_t p = ids.size();
  const std::size_t s_rows = options.include_summary ? summary_row_names().size() : 0;
  RealMatrix values(options.samples, p + s_rows);

  SimulationOptions sim;
  sim.samples = options.samples;
  sim.seed = options.seed;
  sim.burnin = options.burnin;
  sim.thin = options.thin;
  sim.chains = options.chains;
  sim.threads = options.threads;
  const SampleBatch batch = simulate(observed, fitted, sim, [&](std::size_t k, const NetworkState& state) {
    const auto z = set.values(state);
    for (std::size_t c = 0; c < p; ++c) values(k, c) = z[c];
    if (s_rows) {
      const auto rows = summary_stats(state).rows();
      for (std::size_t c = 0; c < s_rows; ++c) values(k, p + c) = rows[c].second;
    }
  });

  const NetworkState obs_state(observed);
  std::vector<double> obs = set.values(obs_state);
  std::vector<std::string> labels;
  for (const auto& id : ids) labels.push_back(gof_label(id));
  if (s_rows) {
    for (const auto& [name, v] : summary_stats(obs_state).rows()) {
      labels.push_back(name);
      obs.push_back(v);
    }
  }

  std::vector<double> mean, sd;
  column_moments(values, mean, sd);
  GofTable table;
  table.warnings = batch.warnings;
  for (std::size_t c = 0; c < labels.size(); ++c) {
    GofRow row{labels[c], obs[c], mean[c], sd[c], 0.0, false};
    row.t_ratio = gof_t_ratio(row.observed, row.mean, row.sd, &row.flagged);
    if (row.flagged) {
      table.warnings.push_back("statistic " + row.statistic + " has zero simulated sd but observed " +
                               csv::format_number(row.observed) + " differs from mean " + csv::format_number(row.mean));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string format_gof_csv(const GofTable& table) {
  std::ostringstream out;
  out << "statistic,observed,mean,sd,t-ratio\n";
  for (const auto& r : table.rows) {
    out << csv::escape(r.statistic) << ',' << csv::format_number(r.observed) << ',' << csv::format_number(r.mean)
        << ',' << csv::format_number(r.sd) << ',' << csv::format_number(r.t_ratio) << '\n';
  }
  return out.str();
}

}  // namespace nonml
