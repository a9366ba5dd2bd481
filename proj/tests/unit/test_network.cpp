#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "scanlab/errors.hpp"
#include "scanlab/network.hpp"
#include "support.hpp"

using namespace scanlab;

TEST_CASE("lattice sizes and row-major ids") {
  const auto line = make_lattice(1, 5);
  CHECK(line.size() == 5);
  CHECK(line.coord(4)[0] == 4.0);
  const auto sq = make_lattice(2, 3);
  CHECK(sq.size() == 9);
  CHECK(sq.coord(4)[0] == 1.0);
  CHECK(sq.coord(4)[1] == 1.0);
  CHECK(make_lattice(3, 4).size() == 64);
  const long c[] = {2, 1};
  CHECK(sq.lattice_id(c) == NodeId{7});
  const long out[] = {3, 0};
  CHECK_FALSE(sq.lattice_id(out).has_value());
}

TEST_CASE("lattice neighbors are the l1 unit sphere") {
  const auto net = make_lattice(3, 4);
  for (NodeId v = 0; v < net.size(); ++v) {
    oracle::Ids got;
    net.for_each_neighbor(v, [&](NodeId w) { got.push_back(w); });
    std::sort(got.begin(), got.end());
    oracle::Ids want;
    const auto cv = oracle::lattice_coords(v, 3, 4);
    for (NodeId w = 0; w < net.size(); ++w)
      if (oracle::l1(oracle::lattice_coords(w, 3, 4), cv) == 1) want.push_back(w);
    CHECK(got == want);
  }
}

TEST_CASE("uniform cloud: validation and determinism") {
  CHECK_THROWS_AS(make_uniform_cloud(2, 0, 1), DomainError);
  const auto a = make_uniform_cloud(2, 500, 9), b = make_uniform_cloud(2, 500, 9);
  CHECK(std::equal(a.coordinates().begin(), a.coordinates().end(), b.coordinates().begin()));
}

TEST_CASE("uniform cloud ball count is binomial around m pi / 16") {
  const auto net = make_uniform_cloud(2, 10000, 1);
  const double c[] = {0.5, 0.5};
  const double n = static_cast<double>(ball_nodes(net, c, 0.25).size());
  const double p = std::numbers::pi / 16.0;
  CHECK(std::abs(n - 10000 * p) < 4.0 * std::sqrt(10000 * p * (1 - p)));
}

TEST_CASE("from_coordinates rejects invalid node sets") {
  CHECK_THROWS_AS(NodeSet::from_coordinates(2, Mode::EuclideanL2, {0.1, 0.2, 0.1, 0.2}), DomainError);
  CHECK_THROWS_AS(NodeSet::from_coordinates(2, Mode::EuclideanL2, {0.1, 1.2}), DomainError);
  CHECK_THROWS_AS(NodeSet::from_coordinates(1, Mode::LatticeL1, {0, 2, 1}), DomainError);
  CHECK_THROWS_AS(NodeSet::from_coordinates(2, Mode::LatticeL1, {0, 0, 0, 1, 1, 0}), DomainError);
  CHECK_THROWS_AS(make_lattice(2, 1), DomainError);
}

TEST_CASE("lattice balls: small radii") {
  const auto net = make_lattice(2, 3);
  const double c[] = {1, 1};
  CHECK(oracle::ids_of(ball_nodes(net, c, 1.0)) == oracle::Ids{4});
  CHECK(oracle::ids_of(ball_nodes(net, c, 1.5)) == oracle::Ids{1, 3, 4, 5, 7});
  CHECK(oracle::ids_of(closed_ball_nodes(net, c, 1.0)) == oracle::Ids{1, 3, 4, 5, 7});
  CHECK_THROWS_AS(ball_nodes(net, c, 0.0), DomainError);
}

TEST_CASE("euclidean ball of radius 2 holds every node") {
  const auto net = make_uniform_cloud(3, 300, 4);
  const double c[] = {0.0, 1.0, 0.5};
  CHECK(ball_nodes(net, c, 2.0).size() == 300);
}

TEST_CASE("property: lattice balls match a brute-force scan") {
  std::mt19937_64 g(17);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 1 + static_cast<int>(g() % 3);
    const int side = d == 3 ? 5 : 9;
    const auto net = make_lattice(d, side);
    std::vector<long> center(d);
    std::vector<double> cd(d);
    for (int a = 0; a < d; ++a) {
      center[a] = static_cast<long>(g() % side);
      cd[a] = static_cast<double>(center[a]);
    }
    const double r = 0.25 + static_cast<double>(g() % 24) * 0.25;
    CHECK(oracle::ids_of(ball_nodes(net, cd, r)) == oracle::lattice_ball(d, side, center, r, false));
    CHECK(oracle::ids_of(closed_ball_nodes(net, cd, r)) == oracle::lattice_ball(d, side, center, r, true));
  }
}

TEST_CASE("property: euclidean balls match a full scan and are monotone in r") {
  std::mt19937_64 g(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto net = make_uniform_cloud(2, 2000, 3);
  for (int trial = 0; trial < 100; ++trial) {
    const double c[] = {u(g), u(g)};
    const double r = 0.01 + 0.3 * u(g);
    oracle::Ids want;
    for (NodeId v = 0; v < net.size(); ++v) {
      const double dx = net.coord(v)[0] - c[0], dy = net.coord(v)[1] - c[1];
      if (std::sqrt(dx * dx + dy * dy) < r) want.push_back(v);
    }
    const auto small = ball_nodes(net, c, r);
    CHECK(oracle::ids_of(small) == want);
    CHECK(small.is_subset_of(ball_nodes(net, c, r * 1.3)));
  }
}

TEST_CASE("interior lattice balls are translation invariant") {
  const auto net = make_lattice(2, 20);
  for (double r : {1.5, 2.5, 3.5}) {
    std::size_t first = 0;
    for (long x = 5; x < 15; ++x)
      for (long y = 5; y < 15; ++y) {
        const double c[] = {double(x), double(y)};
        const auto n = ball_nodes(net, c, r).size();
        if (first == 0) first = n;
        CHECK(n == first);
      }
  }
}

TEST_CASE("grid cloud holds the rescaled lattice") {
  const auto net = make_grid_cloud(2, 4);
  CHECK(net.mode() == Mode::EuclideanL2);
  CHECK(net.size() == 16);
  CHECK(net.coord(5)[0] == doctest::Approx(0.375));
  CHECK(net.coord(5)[1] == doctest::Approx(0.375));
}

TEST_CASE("spread certificate") {
  SUBCASE("rescaled lattice passes") {
    const auto net = make_grid_cloud(2, 16);
    const auto cert = check_spread(net, 8.0, 2.0 * std::sqrt(2.0) / 16, 500, 3);
    CHECK(cert.pass);
    CHECK(cert.probes.size() == 500);
  }
  SUBCASE("single node fails") {
    const auto net = NodeSet::from_coordinates(2, Mode::EuclideanL2, {0.5, 0.5});
    CHECK_FALSE(check_spread(net, 1.0, 0.5, 50, 1).pass);
  }
  SUBCASE("uniform cloud passes for almost every seed") {
    int passes = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto net = make_uniform_cloud(2, 10000, seed);
      const double r_star = 4.0 * std::sqrt(std::log(1e4) / 1e4);
      passes += check_spread(net, 16.0, r_star, 200, seed).pass;
    }
    CHECK(passes >= 19);
  }
  SUBCASE("invalid constants") {
    const auto net = make_grid_cloud(2, 4);
    CHECK_THROWS_AS(check_spread(net, 0.5, 0.1, 5, 1), DomainError);
    CHECK_THROWS_AS(check_spread(net, 2.0, 0.0, 5, 1), DomainError);
  }
}

TEST_CASE("parse_mode") {
  CHECK(parse_mode("lattice") == Mode::LatticeL1);
  CHECK(parse_mode("euclidean-l2") == Mode::EuclideanL2);
  CHECK_THROWS_AS(parse_mode("torus"), ConfigError);
}
