#include "nonml/estimator.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nonml/error.hpp"

namespace nonml {
namespace {

std::string format_vector(const std::vector<double>& v) {
  std::ostringstream out;
  out.precision(6);
  out << '[';
  for (std::size_t k = 0; k < v.size(); ++k) out << (k ? ", " : "") << v[k];
  out << ']';
  return out.str();
}

Eigen::MatrixXd covariance(const RealMatrix& m) {
  const Eigen::Index rows = static_cast<Eigen::Index>(m.rows);
  const Eigen::Index cols = static_cast<Eigen::Index>(m.cols);
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> z(m.data.data(), rows,
                                                                                              cols);
  const Eigen::RowVectorXd mean = z.colwise().mean();
  const Eigen::MatrixXd centered = z.rowwise() - mean;
  return (centered.transpose() * centered) / static_cast<double>(rows - 1);
}

bool extreme_layer(const MultilevelNetwork& net, const ModelSpec& spec) {
  // Mirrors Sampler::is_extreme for the observed network.
  auto check = [](std::size_t on, std::size_t total) { return total > 1 && (on == 0 || on == total); };
  if (spec.is_free(Layer::W)) {
    std::size_t on = 0, total = 0;
    for (std::size_t i = 0; i < net.w.rows(); ++i)
      for (std::size_t r = 0; r < net.w.cols(); ++r) {
        if (spec.fixed_w && (*spec.fixed_w)(i, r)) continue;
        ++total;
        on += net.w(i, r);
      }
    if (check(on, total)) return true;
  }
  if (spec.is_free(Layer::Y)) {
    std::size_t on = 0, total = 0;
    for (std::size_t i = 0; i < net.y.rows(); ++i)
      for (std::size_t j = i + 1; j < net.y.rows(); ++j) {
        if (spec.fixed_y && ((*spec.fixed_y)(i, j) || (*spec.fixed_y)(j, i))) continue;
        ++total;
        on += net.y(i, j);
      }
    if (check(on, total)) return true;
  }
  return false;
}

}  // namespace

void column_moments(const RealMatrix& m, std::vector<double>& mean, std::vector<double>& sd) {
  mean.assign(m.cols, 0.0);
  sd.assign(m.cols, std::numeric_limits<double>::quiet_NaN());
  if (m.rows == 0) return;
  for (std::size_t r = 0; r < m.rows; ++r)
    for (std::size_t c = 0; c < m.cols; ++c) mean[c] += m(r, c);
  for (auto& v : mean) v /= static_cast<double>(m.rows);
  if (m.rows < 2) return;
  for (std::size_t c = 0; c < m.cols; ++c) {
    double ss = 0;
    for (std::size_t r = 0; r < m.rows; ++r) ss += (m(r, c) - mean[c]) * (m(r, c) - mean[c]);
    sd[c] = std::sqrt(ss / static_cast<double>(m.rows - 1));
  }
}

double convergence_t_ratio(double observed, double mean, double sd) {
  const double diff = mean - observed;
  if (sd > 0) return diff / sd;
  if (diff == 0) return 0.0;
  return diff > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
}

StandardErrorResult standard_errors(const SampleBatch& batch, const ModelSpec& spec) {
  const std::size_t p = spec.effects.size();
  if (batch.stat_matrix.cols != p) throw Error(ErrorKind::Dimension, "sample batch does not match the model");
  if (batch.stat_matrix.rows < p + 1) {
    throw Error(ErrorKind::Precondition, "standard errors need at least p + 1 = " + std::to_string(p + 1) +
                                             " samples, got " + std::to_string(batch.stat_matrix.rows));
  }
  const Eigen::MatrixXd cov = covariance(batch.stat_matrix);

  // Incremental Cholesky in model order: a statistic whose residual variance
  // given the earlier independent ones vanishes is collinear with them.
  std::vector<Eigen::Index> kept;
  std::vector<std::string> problems;
  for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(p); ++k) {
    const double var = cov(k, k);
    const std::string& name = spec.effects[static_cast<std::size_t>(k)].id.name;
    if (!(var > 1e-12)) {
      problems.push_back(name + " (zero variance)");
      continue;
    }
    double resid = var;
    Eigen::VectorXd beta;
    if (!kept.empty()) {
      const Eigen::Index m = static_cast<Eigen::Index>(kept.size());
      Eigen::MatrixXd a(m, m);
      Eigen::VectorXd b(m);
      for (Eigen::Index x = 0; x < m; ++x) {
        b(x) = cov(kept[x], k);
        for (Eigen::Index y = 0; y < m; ++y) a(x, y) = cov(kept[x], kept[y]);
      }
      beta = a.llt().solve(b);
      resid = var - b.dot(beta);
    }
    if (resid <= 1e-9 * var) {
      std::string with;
      for (Eigen::Index x = 0; x < beta.size(); ++x) {
        if (std::abs(beta(x)) > 1e-8) {
          with += (with.empty() ? "" : ", ") + spec.effects[static_cast<std::size_t>(kept[x])].id.name;
        }
      }
      problems.push_back(name + " (collinear with " + with + ")");
      continue;
    }
    kept.push_back(k);
  }
  if (!problems.empty()) {
    std::string msg = "singular information matrix; collinear statistics: ";
    for (std::size_t k = 0; k < problems.size(); ++k) msg += (k ? "; " : "") + problems[k];
    throw Error(ErrorKind::Singular, msg);
  }

  const Eigen::MatrixXd inv = cov.llt().solve(Eigen::MatrixXd::Identity(cov.rows(), cov.cols()));
  StandardErrorResult out;
  out.info_matrix = RealMatrix(p, p);
  out.std_errors.resize(p);
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = 0; b < p; ++b) out.info_matrix(a, b) = cov(Eigen::Index(a), Eigen::Index(b));
    out.std_errors[a] = std::sqrt(std::max(0.0, inv(Eigen::Index(a), Eigen::Index(a))));
  }
  return out;
}

FitResult fit_mom(const MultilevelNetwork& observed, const ModelSpec& spec, const EstimationOptions& options) {
  spec.validate(observed);
  const std::size_t p = spec.effects.size();
  FitResult fit;
  fit.ids = spec.ids();
  {
    const auto obs = compute_statistics(observed, fit.ids);
    for (const auto& e : obs) {
      if (!std::isfinite(e.value)) {
        throw Error(ErrorKind::Precondition, "statistic " + e.id.name + " is not finite on the observed network");
      }
      fit.observed.push_back(e.value);
    }
  }
  const auto top = TopStructure::build(observed);
  const bool observed_extreme = extreme_layer(observed, spec);
  std::vector<double> theta = spec.theta();
  auto log = [&](std::string line) { fit.phase_log.push_back(std::move(line)); };

  for (std::size_t attempt = 0;; ++attempt) {
    const std::uint64_t stream = attempt * 8;
    ModelSpec current = spec;
    for (std::size_t k = 0; k < p; ++k) current.effects[k].theta = theta[k];

    // Phase 1: scaling from a short simulation at the current parameters.
    SimulationOptions sim1;
    sim1.samples = options.phase1_samples ? options.phase1_samples : 100 * p;
    sim1.seed = derive_seed(options.seed, stream + 1);
    sim1.burnin = options.burnin;
    sim1.thin = options.thin;
    sim1.chains = options.chains;
    sim1.threads = options.threads;
    const SampleBatch b1 = simulate(observed, current, sim1);
    for (const auto& w : b1.warnings) log("phase 1: " + w);
    std::vector<double> mean1, sd1;
    column_moments(b1.stat_matrix, mean1, sd1);
    std::vector<double> scale(p);
    for (std::size_t k = 0; k < p; ++k) {
      const double var = sd1[k] * sd1[k];
      if (var > 0 && std::isfinite(var)) {
        scale[k] = var;
      } else {
        scale[k] = 1.0;
        log("phase 1: " + fit.ids[k].name + " has zero variance; using unit scaling");
      }
    }
    log("phase 1: theta " + format_vector(theta) + ", variances " + format_vector(scale));

    // Phase 2: Robbins-Monro iterations with halving gain.
    Sampler chain(observed, current, top);
    Rng rng = make_rng(options.seed, stream + 2);
    const std::uint64_t burnin = options.burnin.value_or(default_burnin(chain.free_cell_count()));
    for (std::uint64_t s = 0; s < burnin; ++s) chain.step(rng);
    const std::uint64_t steps = options.phase2_steps.value_or(chain.free_cell_count());
    double gain = options.initial_gain;
    for (std::size_t sub = 1; sub <= options.subphases; ++sub) {
      const double base = std::pow(2.0, 4.0 * double(sub - 1) / 3.0) * double(7 + p);
      const auto n_min = static_cast<std::size_t>(std::ceil(base * options.phase2_multiplier));
      const auto n_max = n_min + static_cast<std::size_t>(std::ceil(double(options.phase2_extra) *
                                                                     options.phase2_multiplier));
      std::vector<double> sum(p, 0.0);
      std::vector<int> first_sign(p, 0);
      std::vector<bool> crossed(p, false);
      std::size_t iter = 0;
      chain.set_theta(theta);
      for (; iter < n_max; ++iter) {
        for (std::uint64_t s = 0; s < steps; ++s) chain.step(rng);
        const auto& z = chain.stats();
        for (std::size_t k = 0; k < p; ++k) {
          const double dev = z[k] - fit.observed[k];
          const double step = std::clamp(gain * dev / scale[k], -options.max_step, options.max_step);
          theta[k] -= step;
          const int sign = dev > 0 ? 1 : (dev < 0 ? -1 : 0);
          if (first_sign[k] == 0) {
            first_sign[k] = sign;
          } else if (sign != 0 && sign != first_sign[k]) {
            crossed[k] = true;
          }
          sum[k] += theta[k];
        }
        chain.set_theta(theta);
        if (iter + 1 >= n_min && std::all_of(crossed.begin(), crossed.end(), [](bool c) { return c; })) {
          ++iter;
          break;
        }
      }
      for (std::size_t k = 0; k < p; ++k) theta[k] = sum[k] / double(iter);
      chain.set_theta(theta);
      log("phase 2 subphase " + std::to_string(sub) + ": " + std::to_string(iter) + " iterations, gain " +
          std::to_string(gain) + ", theta " + format_vector(theta));
      gain /= 2.0;
    }

    // Phase 3: long simulation at the estimate.
    for (std::size_t k = 0; k < p; ++k) current.effects[k].theta = theta[k];
    SimulationOptions sim3 = sim1;
    sim3.samples = options.phase3_samples;
    sim3.seed = derive_seed(options.seed, stream + 3);
    const SampleBatch b3 = simulate(observed, current, sim3);
    for (const auto& w : b3.warnings) log("phase 3: " + w);
    if (b3.degenerate && !observed_extreme) {
      throw Error(ErrorKind::Degeneracy, "model is degenerate at theta " + format_vector(theta));
    }
    column_moments(b3.stat_matrix, fit.sim_mean, fit.sim_sd);
    fit.conv_t_ratios.resize(p);
    double max_t = 0;
    for (std::size_t k = 0; k < p; ++k) {
      fit.conv_t_ratios[k] = convergence_t_ratio(fit.observed[k], fit.sim_mean[k], fit.sim_sd[k]);
      max_t = std::max(max_t, std::abs(fit.conv_t_ratios[k]));
    }
    log("phase 3: t-ratios " + format_vector(fit.conv_t_ratios));
    fit.theta_hat = theta;
    fit.restarts = attempt;
    fit.converged = max_t < options.convergence_threshold;
    if (fit.converged || attempt >= options.max_restarts) {
      const auto se = standard_errors(b3, current);
      fit.std_errors = se.std_errors;
      fit.info_matrix = se.info_matrix;
      break;
    }
    log("not converged (max |t| = " + std::to_string(max_t) + "); restarting from the current estimate");
  }
  if (!fit.converged && options.throw_on_nonconvergence) {
    throw Error(ErrorKind::NonConvergence, "estimation did not converge after " + std::to_string(fit.restarts + 1) +
                                               " attempts; last theta " + format_vector(fit.theta_hat));
  }
  return fit;
}

}  // namespace nonml
