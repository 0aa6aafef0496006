#include <doctest.h>

#include <cmath>
#include <limits>
#include <map>

#include "nonml/error.hpp"
#include "nonml/estimator.hpp"
#include "nonml/gof.hpp"
#include "support/fixtures.hpp"

using namespace nonml;
using nonml::testing::Toy;

namespace {

struct PublishedRow {
  const char* name;
  double observed, mean, sd, t;
};

// Observed, mean, sd and t-ratio rows of the published goodness-of-fit table.
const PublishedRow kRows[] = {
    {"EdgeA", 14, 15.119, 4.352, -0.257},
    {"Star3A", 17, 23.294, 30.204, -0.208},
    {"Star4A", 6, 13.501, 33.548, -0.224},
    {"TriangleA", 5, 5.551, 3.947, -0.14},
    {"Cycle4A", 5, 5.299, 7.802, -0.038},
    {"XEdge", 934, 937.467, 17.057, -0.203},
    {"XStar2B", 1361, 1188.361, 50.438, 3.423},
    {"X4Cycle", 11894, 8735.213, 1028.4, 3.072},
    {"TriangleXBX", 3740, 3875.745, 318.218, -0.427},
    {"C4AXB", 4900, 5455.271, 1852.387, -0.3},
};

double round_to(double v, int decimals) {
  const double f = std::pow(10.0, decimals);
  return std::round(v * f) / f;
}

ModelSpec density_model(double theta) {
  ModelSpec spec;
  spec.effects = {{make_statistic("XEdge"), theta}};
  spec.free_layers = {Layer::W};
  return spec;
}

std::map<std::string, GofRow> by_name(const GofTable& t) {
  std::map<std::string, GofRow> out;
  for (const auto& r : t.rows) out[r.statistic] = r;
  return out;
}

}  // namespace

TEST_CASE("t-ratio arithmetic reproduces published rows") {
  for (const auto& row : kRows) {
    CAPTURE(row.name);
    CHECK(round_to(gof_t_ratio(row.observed, row.mean, row.sd), 3) == doctest::Approx(row.t).epsilon(1e-12));
  }
}

TEST_CASE("clustering summaries reproduce published values") {
  CHECK(round_to(clustering_one_mode(5, 27), 4) == doctest::Approx(0.5556).epsilon(1e-12));
  CHECK(round_to(clustering_two_mode(11894, 194167), 3) == doctest::Approx(0.245).epsilon(1e-12));
  CHECK(std::isnan(clustering_one_mode(0, 0)));
}

TEST_CASE("t-ratio conventions") {
  CHECK(gof_t_ratio(3, 3, 1.5) == 0.0);
  bool flagged = true;
  CHECK(gof_t_ratio(2, 2, 0, &flagged) == 1.0);
  CHECK_FALSE(flagged);
  CHECK(gof_t_ratio(3, 2, 0, &flagged) == std::numeric_limits<double>::infinity());
  CHECK(flagged);
  CHECK(gof_t_ratio(1, 2, 0, &flagged) == -std::numeric_limits<double>::infinity());
  CHECK(flagged);
  CHECK(std::isnan(gof_t_ratio(NAN, 2, 1)));
  CHECK(std::isnan(gof_t_ratio(1, NAN, NAN)));
}

TEST_CASE("labels and default auxiliary statistics") {
  CHECK(gof_label(make_statistic("XASB")) == "XASB");
  CHECK(gof_label(make_statistic("XASB", 3.5)) == "XASB(lambda=3.5)");
  ModelSpec spec;
  spec.effects = {{make_statistic("XEdge"), 0}, {make_statistic("XASB", 3.5), 0}};
  const auto aux = default_gof_statistics(spec);
  CHECK(aux.size() == all_statistics().size() + 1);
  CHECK(aux.back() == make_statistic("XASB", 3.5));
}

TEST_CASE("fixed-layer summaries have zero sd") {
  const auto net = Toy().network();
  ModelSpec spec;
  spec.effects = {{make_statistic("XEdge"), 0.2}, {make_statistic("EdgeA"), -0.3}};
  GofOptions opts;
  opts.samples = 300;
  opts.seed = 4;
  const auto table = gof(net, spec, default_gof_statistics(spec), opts);
  CHECK(table.rows.size() == all_statistics().size() + summary_row_names().size());
  const auto rows = by_name(table);
  const auto& sd_b = rows.at("stddev degreeB");
  CHECK(sd_b.sd == 0);
  CHECK(sd_b.t_ratio == 1.0);
  CHECK_FALSE(sd_b.flagged);
  const auto& cl_b = rows.at("clusteringB");
  CHECK(cl_b.observed == 1.0);
  CHECK(cl_b.sd == 0);
  CHECK(cl_b.t_ratio == 1.0);
  CHECK(rows.at("XEdge").sd > 0);
  CHECK(rows.at("XEdge").observed == 5);
}

TEST_CASE("fitted effects have small t-ratios on the data they were fitted to") {
  const auto net = Toy().network();
  EstimationOptions est;
  est.seed = 8;
  est.phase2_multiplier = 50;
  est.phase3_samples = 4000;
  const auto fit = fit_mom(net, density_model(0.0), est);
  REQUIRE(fit.converged);

  GofOptions opts;
  opts.samples = 4000;
  opts.seed = 99;
  const std::vector<StatisticId> aux{make_statistic("XEdge"), make_statistic("XStar2A"), make_statistic("X4Cycle")};
  const auto table = gof(net, density_model(fit.theta_hat[0]), aux, opts);
  const auto& row = table.rows.at(0);
  CHECK(row.statistic == "XEdge");
  CHECK(std::abs(row.t_ratio) < 0.3);
  // Estimation reports (mean - observed) / sd, the goodness-of-fit table the reverse.
  CHECK(std::abs(row.t_ratio + fit.conv_t_ratios[0]) < 0.3);
}

TEST_CASE("auxiliary statistics must cover the model") {
  const auto net = Toy().network();
  GofOptions opts;
  opts.samples = 10;
  const std::vector<StatisticId> aux{make_statistic("EdgeA")};
  try {
    gof(net, density_model(0), aux, opts);
    FAIL("expected a precondition error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precondition);
  }
}

TEST_CASE("csv layout") {
  GofTable table;
  table.rows.push_back({"EdgeA", 14, 15.119, 4.352, gof_t_ratio(14, 15.119, 4.352), false});
  table.rows.push_back({"IsolatesXA", NAN, NAN, NAN, NAN, false});
  const auto csv = format_gof_csv(table);
  CHECK(csv.rfind("statistic,observed,mean,sd,t-ratio\nEdgeA,14,15.119,4.352,-0.257", 0) == 0);
  CHECK(csv.find("IsolatesXA,NaN,NaN,NaN,NaN\n") != std::string::npos);
}

TEST_CASE("goodness of fit is reproducible") {
  const auto net = Toy().network();
  GofOptions opts;
  opts.samples = 50;
  opts.seed = 3;
  opts.chains = 2;
  opts.threads = 2;
  const auto aux = default_gof_statistics(density_model(0.1));
  const auto a = format_gof_csv(gof(net, density_model(0.1), aux, opts));
  opts.threads = 1;
  CHECK(a == format_gof_csv(gof(net, density_model(0.1), aux, opts)));
}
