#include <doctest.h>

#include <random>

#include "nonml/error.hpp"
#include "nonml/io.hpp"
#include "support/fixtures.hpp"
#include "support/tempdir.hpp"

using namespace nonml;
using nonml::testing::TempDir;
using nonml::testing::Toy;

namespace {

std::filesystem::path write_toy_manifest(const TempDir& dir, const std::string& extra = "") {
  dir.write("r/i.csv", "from,to\nu,s\nu,v\n");
  dir.write("r/j.csv", "from,to\nu,s\ns,v\n");
  dir.write("r/k.csv", "from,to\ns,v\n");
  dir.write("social.csv", "from,to\ni,j\nj,k\n");
  dir.write("criterion.csv", "from,to\nu,s\n");
  return dir.write("manifest.json", R"({"universe": ["u", "s", "v"],
    "reporters": [{"id": "i", "file": "r/i.csv"}, {"id": "j", "file": "r/j.csv"}, {"id": "k", "file": "r/k.csv"}],
    "social": "social.csv", "criterion": {"file": "criterion.csv", "format": "edgelist"})" +
                                       extra + "}");
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Io;
}

bool same_network(const MultilevelNetwork& a, const MultilevelNetwork& b) {
  return a.w == b.w && a.y == b.y && a.q == b.q && a.d == b.d && a.pair_index == b.pair_index &&
         a.reporters == b.reporters;
}

}  // namespace

TEST_CASE("manifest transform matches the in-memory toy") {
  TempDir dir;
  const auto manifest = load_manifest(write_toy_manifest(dir, R"(, "policy": "full")"));
  CHECK(manifest.reports.size() == 3);
  CHECK(manifest.criterion.has_value());
  const auto result = run_manifest(manifest);
  CHECK(same_network(result.network, Toy().network()));
}

TEST_CASE("transform outputs are labelled CSV files") {
  const auto net = Toy().network();
  CHECK(format_affiliation_csv(net) == ",s|u,s|v,u|v\ni,1,0,1\nj,1,1,0\nk,0,1,0\n");
  CHECK(format_social_csv(net) == ",i,j,k\ni,0,1,0\nj,1,0,1\nk,0,1,0\n");
  CHECK(format_line_graph_csv(net) == ",s|u,s|v,u|v\ns|u,0,1,1\ns|v,1,0,1\nu|v,1,1,0\n");
  CHECK(format_colouring_csv(net) == "pair,D\ns|u,1\ns|v,0\nu|v,0\n");
}

TEST_CASE("network directories round-trip") {
  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 20; ++rep) {
    const auto net = rep == 0 ? Toy().network() : testing::random_network(rng, 2 + rep % 5, 1 + rep % 9);
    TempDir dir;
    write_network(net, dir.path() / "net");
    CHECK(same_network(read_network(dir.path() / "net"), net));
    CHECK(same_network(load_network(dir.path() / "net"), net));
  }
}

TEST_CASE("a tampered line graph is rejected") {
  const auto net = Toy().network();
  TempDir dir;
  write_network(net, dir.path());
  dir.write("Q.csv", ",s|u,s|v,u|v\ns|u,0,0,1\ns|v,0,0,1\nu|v,1,1,0\n");
  CHECK(kind_of([&] { read_network(dir.path()); }) == ErrorKind::Invariant);
}

TEST_CASE("malformed inputs") {
  TempDir dir;
  CHECK(kind_of([&] { load_manifest(dir.path() / "missing.json"); }) == ErrorKind::Io);
  const auto bad = dir.write("bad.json", "{ not json");
  CHECK(kind_of([&] { load_manifest(bad); }) == ErrorKind::Parse);
  const auto no_social = dir.write("ns.json", R"({"universe": ["a"], "reporters": []})");
  CHECK(kind_of([&] { load_manifest(no_social); }) == ErrorKind::Parse);
  const auto policy = write_toy_manifest(dir, R"(, "policy": "sideways")");
  CHECK(kind_of([&] { load_manifest(policy); }) == ErrorKind::InvalidParameter);

  const auto net = Toy().network();
  write_network(net, dir.path() / "net");
  dir.write("net/W.csv", ",s|u,s|v,u|v\ni,1,0,2\nj,1,1,0\nk,0,1,0\n");
  CHECK(kind_of([&] { read_network(dir.path() / "net"); }) == ErrorKind::Parse);
  dir.write("net/W.csv", ",s|v,s|u,u|v\ni,1,0,1\nj,1,1,0\nk,0,1,0\n");
  CHECK(kind_of([&] { read_network(dir.path() / "net"); }) == ErrorKind::UnknownLabel);
}

TEST_CASE("explicit pairs from the manifest") {
  TempDir dir;
  const auto path = write_toy_manifest(dir, R"(, "policy": "explicit", "pairs": [["s", "v"], ["u", "s"]])");
  const auto result = run_manifest(load_manifest(path));
  CHECK(result.network.pair_count() == 2);
  CHECK(result.dropped_edges == 1);
}
