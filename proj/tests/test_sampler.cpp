#include <doctest.h>

#include <cmath>
#include <limits>

#include "nonml/direct.hpp"
#include "nonml/error.hpp"
#include "nonml/sampler.hpp"
#include "support/exact.hpp"
#include "support/fixtures.hpp"

using namespace nonml;
using nonml::testing::Toy;

namespace {

ModelSpec model(std::vector<Effect> effects, std::vector<Layer> free = {Layer::W, Layer::Y}) {
  ModelSpec spec;
  spec.effects = std::move(effects);
  spec.free_layers = std::move(free);
  return spec;
}

Effect effect(const std::string& name, double theta, double lambda = 2.0) {
  return {make_statistic(name, lambda), theta};
}

double batch_means_se(const RealMatrix& m, std::size_t col, std::size_t batches) {
  const std::size_t len = m.rows / batches;
  std::vector<double> means(batches, 0.0);
  for (std::size_t b = 0; b < batches; ++b) {
    for (std::size_t r = b * len; r < (b + 1) * len; ++r) means[b] += m(r, col);
    means[b] /= double(len);
  }
  double mean = 0;
  for (double v : means) mean += v;
  mean /= double(batches);
  double ss = 0;
  for (double v : means) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / double(batches - 1) / double(batches));
}

}  // namespace

TEST_CASE("zero parameters accept every proposal") {
  const auto net = Toy().network();
  const auto spec = model({effect("XEdge", 0), effect("TriangleXAX", 0), effect("EdgeA", 0), effect("XACA", 0)});
  SimulationOptions opts;
  opts.samples = 100;
  opts.seed = 3;
  const auto batch = simulate(net, spec, opts);
  CHECK(batch.acceptance_rate == 1.0);
}

TEST_CASE("a minus infinity density parameter absorbs at the empty W") {
  const auto net = Toy().network();
  const auto spec = model({effect("XEdge", -std::numeric_limits<double>::infinity())}, {Layer::W});
  Sampler sampler(net, spec);
  Rng rng = make_rng(1);
  for (int s = 0; s < 2000; ++s) sampler.step(rng);
  CHECK(sampler.stats()[0] == 0);
  CHECK(sampler.state().w_matrix().count_ones() == 0);
  for (int s = 0; s < 2000; ++s) CHECK_FALSE(sampler.step(rng));
  CHECK(sampler.is_extreme());
}

TEST_CASE("density-only tie probability per cell is logistic(theta)") {
  const auto net = Toy().network();
  const double theta = 0.6;
  const auto spec = model({effect("XEdge", theta)}, {Layer::W});
  Sampler sampler(net, spec);
  Rng rng = make_rng(17);
  std::vector<double> on(9, 0.0);
  const int steps = 1000000;
  for (int s = 0; s < steps; ++s) {
    sampler.step(rng);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t r = 0; r < 3; ++r) on[i * 3 + r] += sampler.state().w(i, r);
  }
  for (double c : on) CHECK(std::abs(c / steps - logistic(theta)) < 0.01);
}

TEST_CASE("toy mean XEdge at theta 0 is 4.5") {
  const auto net = Toy().network();
  const auto spec = model({effect("XEdge", 0)}, {Layer::W});
  SimulationOptions opts;
  opts.samples = 100000;
  opts.seed = 8;
  const auto batch = simulate(net, spec, opts);
  double total = 0;
  for (std::size_t r = 0; r < batch.stat_matrix.rows; ++r) total += batch.stat_matrix(r, 0);
  const double se = batch_means_se(batch.stat_matrix, 0, 100);
  CHECK(std::abs(total / 100000.0 - 4.5) < 3 * se);
  CHECK(se < 0.02);
  CHECK(batch.thin == 9);
  CHECK(batch.burnin == 30000);
}

TEST_CASE("one sample with no thinning records the post-burnin state") {
  const auto net = Toy().network();
  const auto spec = model({effect("XEdge", 0.3), effect("TriangleXAX", -0.2), effect("EdgeA", 0.1)});
  SimulationOptions opts;
  opts.samples = 1;
  opts.thin = 0;
  opts.burnin = 57;
  opts.seed = 4;
  opts.keep_final_states = true;
  const auto batch = simulate(net, spec, opts);
  REQUIRE(batch.stat_matrix.rows == 1);
  const auto z = compute_statistics(batch.final_states.at(0), spec.ids());
  for (std::size_t k = 0; k < z.size(); ++k) CHECK(batch.stat_matrix(0, k) == z[k].value);
}

TEST_CASE("tracked statistics match a recount along a chain") {
  std::mt19937_64 gen(2);
  const auto net = testing::random_network(gen, 6, 10);
  std::vector<Effect> effects;
  double theta = -0.3;
  for (const auto& id : all_statistics()) {
    effects.push_back({id, theta});
    theta = -theta * 0.9;
  }
  const auto spec = model(effects);
  Sampler sampler(net, spec);
  Rng rng = make_rng(12);
  for (int block = 0; block < 20; ++block) {
    for (int s = 0; s < 50; ++s) sampler.step(rng);
    const auto z = compute_statistics(sampler.state().snapshot(net), spec.ids());
    for (std::size_t k = 0; k < z.size(); ++k) {
      INFO(z[k].id.name);
      CHECK(sampler.stats()[k] == doctest::Approx(z[k].value).epsilon(1e-9));
    }
  }
}

TEST_CASE("fixed layers and conditional simulation") {
  std::mt19937_64 gen(5);
  const auto net = testing::random_network(gen, 5, 7);
  SimulationOptions opts;
  opts.samples = 10;
  opts.seed = 6;
  opts.chains = 2;
  opts.keep_final_states = true;

  const auto both = simulate(net, model({effect("XEdge", 0), effect("EdgeA", 0)}), opts);
  for (const auto& s : both.final_states) {
    CHECK(s.q == net.q);
    CHECK(s.d == net.d);
  }
  const auto w_only = simulate(net, model({effect("XEdge", 0), effect("EdgeA", 0)}, {Layer::W}), opts);
  for (const auto& s : w_only.final_states) {
    CHECK(s.y == net.y);
    CHECK_FALSE(s.w == net.w);
  }
  const auto y_only = simulate(net, model({effect("XEdge", 0), effect("EdgeA", 0)}, {Layer::Y}), opts);
  for (const auto& s : y_only.final_states) {
    CHECK(s.w == net.w);
    CHECK_FALSE(s.y == net.y);
  }
}

TEST_CASE("masked cells are never toggled") {
  std::mt19937_64 gen(9);
  const auto net = testing::random_network(gen, 4, 6);
  auto spec = model({effect("XEdge", 0), effect("EdgeA", 0)});
  BinaryMatrix wmask(4, 6), ymask(4, 4);
  for (std::size_t r = 0; r < 6; ++r) wmask(1, r) = 1;
  ymask.set_symmetric(0, 3, true);
  spec.fixed_w = wmask;
  spec.fixed_y = ymask;
  Sampler sampler(net, spec);
  CHECK(sampler.free_cell_count() == 18 + 5);
  Rng rng = make_rng(2);
  for (int s = 0; s < 5000; ++s) {
    sampler.step(rng);
    for (std::size_t r = 0; r < 6; ++r) REQUIRE(sampler.state().w(1, r) == net.w(1, r));
    REQUIRE(sampler.state().y(0, 3) == net.y(0, 3));
  }
}

TEST_CASE("simulation is reproducible and independent of thread count") {
  std::mt19937_64 gen(13);
  const auto net = testing::random_network(gen, 5, 8);
  const auto spec = model({effect("XEdge", -0.2), effect("TriangleXAX", 0.1), effect("EdgeA", -0.4)});
  SimulationOptions opts;
  opts.samples = 40;
  opts.seed = 99;
  opts.chains = 4;
  opts.threads = 1;
  const auto a = simulate(net, spec, opts);
  const auto b = simulate(net, spec, opts);
  opts.threads = 4;
  const auto c = simulate(net, spec, opts);
  CHECK(a.stat_matrix.data == b.stat_matrix.data);
  CHECK(a.stat_matrix.data == c.stat_matrix.data);
  CHECK(a.acceptance_rate == c.acceptance_rate);
  opts.seed = 100;
  CHECK_FALSE(simulate(net, spec, opts).stat_matrix.data == a.stat_matrix.data);
}

TEST_CASE("degenerate models raise a warning") {
  const auto net = Toy().network();
  SimulationOptions opts;
  opts.samples = 200;
  opts.seed = 1;
  const auto batch = simulate(net, model({effect("XEdge", -12)}, {Layer::W}), opts);
  CHECK(batch.degenerate);
  REQUIRE(batch.warnings.size() == 1);
  CHECK(batch.warnings[0].find("degeneracy") != std::string::npos);
  const auto fine = simulate(net, model({effect("XEdge", 0)}, {Layer::W}), opts);
  CHECK_FALSE(fine.degenerate);
}

TEST_CASE("invalid model specifications") {
  const auto net = Toy().network();
  SimulationOptions opts;
  CHECK_THROWS_AS(simulate(net, model({}), opts), Error);
  CHECK_THROWS_AS(simulate(net, model({effect("XEdge", 0)}, {}), opts), Error);
  try {
    simulate(net, model({effect("XEdge", 0)}, {Layer::Q}), opts);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::FixedLayer);
  }
  opts.samples = 0;
  CHECK_THROWS_AS(simulate(net, model({effect("XEdge", 0)}), opts), Error);
}

TEST_CASE("mh_step changes at most one free cell") {
  auto net = Toy().network();
  const auto spec = model({effect("XEdge", 0)});
  Rng rng = make_rng(4);
  for (int s = 0; s < 50; ++s) {
    const auto before = net;
    mh_step(net, spec, rng);
    std::size_t diff = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t r = 0; r < 3; ++r) diff += before.w(i, r) != net.w(i, r);
      for (std::size_t j = i + 1; j < 3; ++j) diff += before.y(i, j) != net.y(i, j);
    }
    CHECK(diff == 1);
    CHECK(net.y == net.y.transposed());
    CHECK(before.q == net.q);
  }
}

TEST_CASE("32-state chain matches the exact Boltzmann law") {
  const auto net = testing::tiny_network();
  const std::vector<std::vector<Effect>> settings{
      {effect("XEdge", 0), effect("EdgeA", 0), effect("TriangleXAX", 0)},
      {effect("XEdge", -0.5), effect("EdgeA", 1.0), effect("TriangleXAX", 1.5), effect("TriangleXBX", -2.0),
       effect("C4AXB", 0.7), effect("Expert_XEdgeB", 1.2)},
      {effect("XEdge", 0.8), effect("EdgeA", -1.1)},
  };
  std::uint64_t seed = 40;
  for (const auto& effects : settings) {
    const auto spec = model(effects);
    const auto exact = testing::boltzmann_exact(net, spec);
    REQUIRE(exact.size() == 32);
    const auto freq = testing::sampler_frequencies(net, spec, 1000000, seed++);
    CHECK(testing::total_variation(freq, exact) < 0.01);
  }
}
