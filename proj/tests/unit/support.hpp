#pragma once

// Independent oracles and hand-rolled generators shared by the unit tests. Nothing here
// calls into the library's geometry or statistics code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <random>
#include <set>
#include <vector>

#include "scanlab/cluster.hpp"

namespace oracle {

using Ids = std::vector<scanlab::NodeId>;

inline Ids ids_of(const scanlab::Cluster& c) { return Ids(c.begin(), c.end()); }

/// Row-major coordinates of node `id` on a side^d lattice.
inline std::vector<long> lattice_coords(std::uint32_t id, int d, int side) {
  std::vector<long> c(d);
  for (int a = d - 1; a >= 0; --a) {
    c[a] = id % side;
    id /= side;
  }
  return c;
}

inline long l1(const std::vector<long>& a, const std::vector<long>& b) {
  long s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::labs(a[i] - b[i]);
  return s;
}

/// Lattice nodes at l1 distance < r (open) or <= r (closed) from `center`, by full scan.
inline Ids lattice_ball(int d, int side, const std::vector<long>& center, double r, bool closed) {
  Ids out;
  std::uint32_t m = 1;
  for (int i = 0; i < d; ++i) m *= side;
  for (std::uint32_t v = 0; v < m; ++v) {
    const double dist = static_cast<double>(l1(lattice_coords(v, d, side), center));
    if (closed ? dist <= r : dist < r) out.push_back(v);
  }
  return out;
}

/// Connectivity of a node subset of a 2D lattice by breadth-first search.
inline bool connected_2d(const Ids& ids, int side) {
  if (ids.empty()) return false;
  std::set<std::uint32_t> in(ids.begin(), ids.end()), seen{ids[0]};
  std::queue<std::uint32_t> q;
  q.push(ids[0]);
  while (!q.empty()) {
    const auto v = q.front();
    q.pop();
    const long x = v / side, y = v % side;
    const long nb[4][2] = {{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}};
    for (auto& p : nb) {
      if (p[0] < 0 || p[1] < 0 || p[0] >= side || p[1] >= side) continue;
      const auto w = static_cast<std::uint32_t>(p[0] * side + p[1]);
      if (in.count(w) && seen.insert(w).second) q.push(w);
    }
  }
  return seen.size() == in.size();
}

/// Number of connected k-subsets of a side x side lattice, by filtering every k-subset.
inline std::size_t count_connected_subsets(int side, int k) {
  const int m = side * side;
  std::vector<int> pick(k);
  for (int i = 0; i < k; ++i) pick[i] = i;
  std::size_t count = 0;
  while (true) {
    Ids ids(pick.begin(), pick.end());
    if (connected_2d(ids, side)) ++count;
    int i = k - 1;
    while (i >= 0 && pick[i] == m - k + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  return count;
}

/// Upper normal tail P(N(0,1) > x).
inline double normal_tail(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

/// Delta straight from the set definition, via std::set.
inline double delta(const Ids& k, const Ids& l) {
  std::set<std::uint32_t> a(k.begin(), k.end());
  std::size_t common = 0;
  for (auto v : l) common += a.count(v);
  const double r = static_cast<double>(common) / std::sqrt(static_cast<double>(k.size() * l.size()));
  return std::sqrt(2.0) * std::sqrt(std::max(0.0, 1.0 - r));
}

/// Random sorted id subset of [0, universe) with each id kept with probability p.
inline Ids random_subset(std::mt19937_64& g, std::uint32_t universe, double p) {
  std::bernoulli_distribution keep(p);
  Ids out;
  for (std::uint32_t v = 0; v < universe; ++v)
    if (keep(g)) out.push_back(v);
  if (out.empty()) out.push_back(static_cast<std::uint32_t>(g() % universe));
  return out;
}

}  // namespace oracle
