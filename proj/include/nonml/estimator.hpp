#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nonml/matrix.hpp"
#include "nonml/sampler.hpp"

namespace nonml {

struct EstimationOptions {
  std::uint64_t seed = 0;
  std::size_t phase1_samples = 0;  // 0: 100 * p
  std::size_t subphases = 4;
  double initial_gain = 0.1;
  /// Scales the minimum and maximum iteration counts of every subphase.
  double phase2_multiplier = 1.0;
  /// Extra iterations allowed beyond the minimum before a subphase stops.
  std::size_t phase2_extra = 200;
  /// MH steps between phase-2 iterations; default is the number of free cells.
  std::optional<std::uint64_t> phase2_steps;
  /// Largest absolute change of any parameter in one phase-2 iteration.
  double max_step = 2.0;
  std::size_t phase3_samples = 1000;
  double convergence_threshold = 0.1;
  /// Further phase 1-3 cycles started from the last estimate when phase 3
  /// does not meet the convergence threshold.
  std::size_t max_restarts = 3;
  bool throw_on_nonconvergence = true;
  std::optional<std::uint64_t> burnin;
  std::optional<std::uint64_t> thin;
  std::size_t chains = 1;
  std::size_t threads = 1;
};

struct FitResult {
  std::vector<StatisticId> ids;
  std::vector<double> theta_hat;
  std::vector<double> std_errors;
  std::vector<double> conv_t_ratios;
  std::vector<double> observed;
  std::vector<double> sim_mean;
  std::vector<double> sim_sd;
  RealMatrix info_matrix;
  bool converged = false;
  std::size_t restarts = 0;
  std::vector<std::string> phase_log;
};

/// Three-phase stochastic approximation solving E_theta[z] = z_obs.
FitResult fit_mom(const MultilevelNetwork& observed, const ModelSpec& spec, const EstimationOptions& options = {});

struct StandardErrorResult {
  std::vector<double> std_errors;
  RealMatrix info_matrix;
};

/// Information matrix = sample covariance of the statistics; SE is the
/// square root of the diagonal of its inverse. Throws Singular naming the
/// collinear statistics.
StandardErrorResult standard_errors(const SampleBatch& batch, const ModelSpec& spec);

/// Per-column (mean, sample sd) of a statistic matrix.
void column_moments(const RealMatrix& m, std::vector<double>& mean, std::vector<double>& sd);

/// (mean - observed) / sd with 0 when sd = 0 and mean equals observed.
double convergence_t_ratio(double observed, double mean, double sd);

}  // namespace nonml
