#include "nonml/sampler.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "nonml/error.hpp"

namespace nonml {

std::vector<StatisticId> ModelSpec::ids() const {
  std::vector<StatisticId> out;
  for (const auto& e : effects) out.push_back(e.id);
  return out;
}

std::vector<double> ModelSpec::theta() const {
  std::vector<double> out;
  for (const auto& e : effects) out.push_back(e.theta);
  return out;
}

bool ModelSpec::is_free(Layer layer) const {
  for (Layer l : free_layers)
    if (l == layer) return true;
  return false;
}

void ModelSpec::validate(const MultilevelNetwork& net) const {
  if (effects.empty()) throw Error(ErrorKind::InvalidParameter, "model specification has no effects");
  if (free_layers.empty()) throw Error(ErrorKind::InvalidParameter, "model specification has no free layers");
  for (Layer l : free_layers) {
    if (l == Layer::Q || l == Layer::D) {
      throw Error(ErrorKind::FixedLayer, "layer " + to_string(l) + " is fixed and cannot be free");
    }
  }
  for (const auto& e : effects) make_statistic(e.id.name, e.id.lambda);
  if (fixed_w && (fixed_w->rows() != net.w.rows() || fixed_w->cols() != net.w.cols())) {
    throw Error(ErrorKind::Dimension, "W mask must match W");
  }
  if (fixed_y && (fixed_y->rows() != net.y.rows() || fixed_y->cols() != net.y.cols())) {
    throw Error(ErrorKind::Dimension, "Y mask must match Y");
  }
}

Sampler::Sampler(const MultilevelNetwork& start, const ModelSpec& spec)
    : Sampler(start, spec, TopStructure::build(start)) {}

Sampler::Sampler(const MultilevelNetwork& start, const ModelSpec& spec, std::shared_ptr<const TopStructure> top)
    : state_(start, std::move(top)) {
  spec.validate(start);
  const auto ids = spec.ids();
  set_ = StatisticSet(ids);
  theta_ = spec.theta();
  z_ = set_.values(state_);
  delta_.assign(set_.size(), 0.0);

  if (spec.is_free(Layer::W)) {
    for (std::size_t i = 0; i < state_.n(); ++i)
      for (std::size_t r = 0; r < state_.e(); ++r) {
        if (spec.fixed_w && (*spec.fixed_w)(i, r)) continue;
        cells_.push_back({Layer::W, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(r)});
        ++free_w_;
        on_w_ += state_.w(i, r);
      }
  }
  if (spec.is_free(Layer::Y)) {
    for (std::size_t i = 0; i < state_.n(); ++i)
      for (std::size_t j = i + 1; j < state_.n(); ++j) {
        if (spec.fixed_y && ((*spec.fixed_y)(i, j) || (*spec.fixed_y)(j, i))) continue;
        cells_.push_back({Layer::Y, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
        ++free_y_;
        on_y_ += state_.y(i, j);
      }
  }
  if (cells_.empty()) throw Error(ErrorKind::InvalidParameter, "model specification leaves no free cells");
}

void Sampler::set_theta(std::vector<double> theta) {
  if (theta.size() != theta_.size()) throw Error(ErrorKind::Dimension, "theta has the wrong length");
  theta_ = std::move(theta);
}

double Sampler::log_ratio(const std::vector<double>& delta, double sign) const {
  double out = 0;
  for (std::size_t k = 0; k < delta.size(); ++k)
    if (delta[k] != 0.0) out += sign * theta_[k] * delta[k];
  return out;
}

bool Sampler::step(Rng& rng) {
  const Cell cell = cells_[std::uniform_int_distribution<std::size_t>(0, cells_.size() - 1)(rng)];
  const bool is_w = cell.layer == Layer::W;
  const bool on = is_w ? state_.w(cell.a, cell.b) : state_.y(cell.a, cell.b);
  auto flip = [&] { is_w ? state_.toggle_w(cell.a, cell.b) : state_.toggle_y(cell.a, cell.b); };

  // Change statistics are always evaluated with the cell at 0.
  if (on) flip();
  if (is_w) {
    set_.add_delta_w(state_, cell.a, cell.b, delta_);
  } else {
    set_.add_delta_y(state_, cell.a, cell.b, delta_);
  }
  const double lr = log_ratio(delta_, on ? -1.0 : 1.0);
  const double u = uniform01(rng);
  const bool accept = u < std::exp(lr);
  std::size_t& count = is_w ? on_w_ : on_y_;
  if (on) {
    if (accept) {
      for (std::size_t k = 0; k < z_.size(); ++k) z_[k] -= delta_[k];
      --count;
    } else {
      flip();
    }
  } else if (accept) {
    flip();
    for (std::size_t k = 0; k < z_.size(); ++k) z_[k] += delta_[k];
    ++count;
  }
  return accept;
}

bool Sampler::is_extreme() const {
  // A single-cell layer is trivially empty or complete; it says nothing about
  // degeneracy.
  if (free_w_ > 1 && (on_w_ == 0 || on_w_ == free_w_)) return true;
  if (free_y_ > 1 && (on_y_ == 0 || on_y_ == free_y_)) return true;
  return false;
}

std::uint64_t default_burnin(std::size_t free_cells) {
  return static_cast<std::uint64_t>(std::llround(1e4 * std::sqrt(static_cast<double>(free_cells))));
}

void mh_step(MultilevelNetwork& state, const ModelSpec& spec, Rng& rng) {
  Sampler sampler(state, spec);
  sampler.step(rng);
  state.w = sampler.state().w_matrix();
  state.y = sampler.state().y_matrix();
}

SampleBatch simulate(const MultilevelNetwork& start, const ModelSpec& spec, const SimulationOptions& options,
                     const RecordObserver& observer) {
  if (options.samples < 1) throw Error(ErrorKind::InvalidParameter, "at least one sample is required");
  spec.validate(start);
  const auto top = TopStructure::build(start);
  const std::size_t chains = std::max<std::size_t>(1, std::min(options.chains, options.samples));
  const std::size_t threads = std::max<std::size_t>(1, std::min(options.threads, chains));

  SampleBatch batch;
  batch.seed = options.seed;
  batch.stat_matrix = RealMatrix(options.samples, spec.effects.size());
  if (options.keep_final_states) batch.final_states.resize(chains);

  std::vector<std::size_t> offset(chains + 1, 0);
  for (std::size_t c = 0; c < chains; ++c) {
    offset[c + 1] = offset[c] + options.samples / chains + (c < options.samples % chains ? 1 : 0);
  }
  std::vector<std::uint64_t> accepted(chains, 0), proposed(chains, 0), extreme(chains, 0);
  std::uint64_t burnin = 0, thin = 0;

  auto run_chain = [&](std::size_t c) {
    Sampler sampler(start, spec, top);
    const std::size_t cells = sampler.free_cell_count();
    const std::uint64_t b = options.burnin.value_or(default_burnin(cells));
    const std::uint64_t t = options.thin.value_or(cells);
    if (c == 0) {
      burnin = b;
      thin = t;
    }
    Rng rng = make_rng(options.seed, c);
    auto advance = [&](std::uint64_t steps) {
      for (std::uint64_t s = 0; s < steps; ++s) accepted[c] += sampler.step(rng);
      proposed[c] += steps;
    };
    advance(b);
    for (std::size_t k = offset[c]; k < offset[c + 1]; ++k) {
      if (k > offset[c]) advance(t);
      const auto& z = sampler.stats();
      for (std::size_t p = 0; p < z.size(); ++p) batch.stat_matrix(k, p) = z[p];
      extreme[c] += sampler.is_extreme();
      if (observer) observer(k, sampler.state());
    }
    if (options.keep_final_states) batch.final_states[c] = sampler.state().snapshot(start);
  };

  if (threads == 1) {
    for (std::size_t c = 0; c < chains; ++c) run_chain(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t c = next++; c < chains; c = next++) {
          try {
            run_chain(c);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  batch.burnin = burnin;
  batch.thin = thin;
  std::uint64_t acc = 0, prop = 0, ext = 0;
  for (std::size_t c = 0; c < chains; ++c) {
    acc += accepted[c];
    prop += proposed[c];
    ext += extreme[c];
  }
  batch.acceptance_rate = prop == 0 ? 0.0 : static_cast<double>(acc) / static_cast<double>(prop);
  if (static_cast<double>(ext) > 0.99 * static_cast<double>(options.samples)) {
    batch.degenerate = true;
    batch.warnings.push_back("degeneracy: " + std::to_string(ext) + " of " + std::to_string(options.samples) +
                             " recorded states have an empty or complete free layer");
  }
  return batch;
}

}  // namespace nonml
