#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "scanlab/clusters.hpp"
#include "scanlab/growth.hpp"
#include "scanlab/io.hpp"

using namespace scanlab;

TEST_CASE("node sets round-trip through CSV") {
  for (const auto& net : {make_lattice(2, 5), make_uniform_cloud(3, 40, 2)}) {
    const std::string path = "io_nodes_test.csv";
    {
      std::ofstream os(path);
      os << '#' << nodeset_sidecar(net) << '\n';
      write_nodeset_csv(os, net);
    }
    const auto back = read_nodeset(path);
    CHECK(back.mode() == net.mode());
    CHECK(back.size() == net.size());
    CHECK(std::equal(back.coordinates().begin(), back.coordinates().end(), net.coordinates().begin()));
    std::remove(path.c_str());
  }
  CHECK(nodeset_sidecar(make_lattice(2, 3)) == R"({"d":2,"m":9,"mode":"lattice-l1"})");
}

TEST_CASE("cluster lists round-trip with metadata") {
  const auto net = make_lattice(2, 6);
  AnimalStream s(net, 3);
  const auto list = collect(s);
  std::stringstream ss;
  write_cluster_list(ss, s.describe(), list);
  const auto back = read_cluster_list(ss);
  CHECK(back.meta == s.describe());
  REQUIRE(back.clusters.size() == list.size());
  for (std::size_t i = 0; i < list.size(); ++i) CHECK(back.clusters.cluster(i) == list.cluster(i));
}

TEST_CASE("fields round-trip bit for bit") {
  const auto f = sample_null(30, NoiseModel{}, 2, 5);
  std::stringstream ss;
  write_field_csv(ss, f);
  CHECK(read_field_csv(ss) == f);
}

TEST_CASE("sequences round-trip including empty slices") {
  const auto net = make_lattice(2, 8);
  const auto seq = make_cone(net, std::vector<double>{3, 3}, 1.0, 2, 5);
  std::stringstream ss;
  write_sequence(ss, seq);
  const auto back = read_sequence(ss);
  CHECK(back.slices == seq.slices);
}

TEST_CASE("format_double keeps full precision") {
  const double x = 0.1 + 0.2;
  CHECK(std::stod(format_double(x)) == x);
}
