#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nonml/matrix.hpp"
#include "nonml/network_state.hpp"
#include "nonml/rng.hpp"
#include "nonml/statistics.hpp"

namespace nonml {

struct Effect {
  StatisticId id;
  double theta = 0.0;
};

/// Model p(C) proportional to exp(theta' z(C)) over the free tie variables.
struct ModelSpec {
  std::vector<Effect> effects;
  std::vector<Layer> free_layers{Layer::W, Layer::Y};
  /// Cells marked 1 are never toggled (structural zeros or fixed ties).
  std::optional<BinaryMatrix> fixed_w;
  std::optional<BinaryMatrix> fixed_y;

  std::vector<StatisticId> ids() const;
  std::vector<double> theta() const;
  bool is_free(Layer layer) const;
  /// Throws on an empty effect list, empty or invalid free layers, unknown
  /// statistics and mask dimension mismatches.
  void validate(const MultilevelNetwork& net) const;
};

struct SimulationOptions {
  std::optional<std::uint64_t> burnin;  // default 10^4 * sqrt(free cells)
  std::optional<std::uint64_t> thin;    // default free cells
  std::size_t samples = 1;
  std::uint64_t seed = 0;
  std::size_t chains = 1;   // samples are split across chains
  std::size_t threads = 1;  // cap on concurrently running chains
  bool keep_final_states = false;
};

struct SampleBatch {
  RealMatrix stat_matrix;  // samples x effects, chain-major order
  std::vector<MultilevelNetwork> final_states;
  std::uint64_t seed = 0;
  std::uint64_t burnin = 0;
  std::uint64_t thin = 0;
  double acceptance_rate = 0.0;
  bool degenerate = false;
  std::vector<std::string> warnings;
};

/// Invoked at each recorded state with the global sample index. Calls from
/// different chains may run concurrently but never share an index.
using RecordObserver = std::function<void(std::size_t sample, const NetworkState& state)>;

/// Single-chain Metropolis-Hastings sampler over the free cells with a
/// uniform single-cell toggle proposal.
class Sampler {
 public:
  Sampler(const MultilevelNetwork& start, const ModelSpec& spec);
  Sampler(const MultilevelNetwork& start, const ModelSpec& spec, std::shared_ptr<const TopStructure> top);

  /// One proposal; returns whether it was accepted.
  bool step(Rng& rng);

  void set_theta(std::vector<double> theta);
  const std::vector<double>& theta() const noexcept { return theta_; }
  /// Current statistics, maintained incrementally.
  const std::vector<double>& stats() const noexcept { return z_; }
  const NetworkState& state() const noexcept { return state_; }
  std::size_t free_cell_count() const noexcept { return cells_.size(); }
  const StatisticSet& statistics() const noexcept { return set_; }

  /// True when any free layer is entirely empty or entirely complete.
  bool is_extreme() const;

 private:
  struct Cell {
    Layer layer;
    std::uint32_t a;
    std::uint32_t b;
  };

  double log_ratio(const std::vector<double>& delta, double sign) const;

  NetworkState state_;
  StatisticSet set_;
  std::vector<double> theta_;
  std::vector<double> z_;
  std::vector<double> delta_;
  std::vector<Cell> cells_;
  std::size_t free_w_ = 0, free_y_ = 0;
  std::size_t on_w_ = 0, on_y_ = 0;
};

std::uint64_t default_burnin(std::size_t free_cells);

/// Runs a single proposal on `state` in place.
void mh_step(MultilevelNetwork& state, const ModelSpec& spec, Rng& rng);

/// Runs burnin steps, records the statistics, then records again after every
/// `thin` further steps until `samples` rows exist. Deterministic given seed.
SampleBatch simulate(const MultilevelNetwork& start, const ModelSpec& spec, const SimulationOptions& options,
                     const RecordObserver& observer = {});

}  // namespace nonml
