#include "scanlab/metric.hpp"

#include <algorithm>
#include <cmath>

#include "scanlab/errors.hpp"

namespace scanlab {

double delta_from_counts(std::size_t k, std::size_t l, std::size_t common) noexcept {
  const double ratio = static_cast<double>(common) / std::sqrt(static_cast<double>(k) * static_cast<double>(l));
  return kSqrt2 * std::sqrt(std::clamp(1.0 - ratio, 0.0, 1.0));
}

double delta(std::span<const NodeId> k, std::span<const NodeId> l) {
  if (k.empty() || l.empty()) throw DomainError("delta is undefined for an empty cluster");
  return delta_from_counts(k.size(), l.size(), intersection_size(k, l));
}

void MemberIndex::add(std::span<const NodeId> ids, std::size_t size) {
  const auto j = static_cast<std::uint32_t>(sizes_.size());
  for (NodeId v : ids) {
    if (v >= by_node_.size()) by_node_.resize(std::size_t{v} + 1);
    by_node_[v].push_back(j);
  }
  sizes_.push_back(size);
}

std::pair<double, std::size_t> MemberIndex::nearest(std::span<const NodeId> k,
                                                    std::vector<std::uint32_t>& scratch,
                                                    std::vector<std::size_t>& touched) const {
  touched.clear();
  for (NodeId v : k) {
    if (v >= by_node_.size()) continue;
    for (std::uint32_t j : by_node_[v])
      if (scratch[j]++ == 0) touched.push_back(j);
  }
  // Members sharing no node sit at sqrt(2), above every touched member.
  double best = kSqrt2;
  std::size_t arg = 0;
  std::sort(touched.begin(), touched.end());
  for (std::size_t j : touched) {
    const double d = delta_from_counts(k.size(), sizes_[j], scratch[j]);
    if (d < best) {
      best = d;
      arg = j;
    }
    scratch[j] = 0;
  }
  return {best, arg};
}

namespace {

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= kSqrt2))
    throw DomainError("net precision epsilon must lie in (0, sqrt(2)]");
}

struct Builder {
  explicit Builder(double eps) : epsilon(eps) { net.epsilon = eps; }

  void offer(std::span<const NodeId> ids) {
    if (ids.empty()) return;
    if (index.size() > 0) {
      scratch.resize(index.size(), 0);
      if (index.nearest(ids, scratch, touched).first <= epsilon) return;
    }
    net.members.push_back(ids);
    index.add(ids, ids.size());
  }

  double epsilon;
  EpsNet net;
  MemberIndex index;
  std::vector<std::uint32_t> scratch;
  std::vector<std::size_t> touched;
};

}  // namespace

EpsNet build_net(ClusterStream& stream, double epsilon) {
  check_epsilon(epsilon);
  Builder b(epsilon);
  while (auto c = stream.next()) b.offer(c->ids());
  b.net.family = stream.describe();
  return std::move(b.net);
}

EpsNet build_net(const ClusterList& clusters, double epsilon, Metadata family) {
  check_epsilon(epsilon);
  Builder b(epsilon);
  for (std::size_t i = 0; i < clusters.size(); ++i) b.offer(clusters[i]);
  b.net.family = std::move(family);
  return std::move(b.net);
}

CoverReport verify_cover(const EpsNet& net, const ClusterList& clusters, std::size_t node_count,
                         ExecPolicy policy) {
  CoverReport report;
  report.epsilon = net.epsilon;
  report.checked = clusters.size();
  if (clusters.empty()) return report;
  MemberIndex index(node_count);
  for (std::size_t j = 0; j < net.members.size(); ++j) index.add(net.members[j], net.members[j].size());

  struct Scratch {
    std::vector<std::uint32_t> counts;
    std::vector<std::size_t> touched;
  };
  const auto worst = argmax(
      clusters.size(), policy, [&] { return Scratch{std::vector<std::uint32_t>(index.size(), 0), {}}; },
      [&](Scratch& s, std::size_t i) {
        if (index.size() == 0) return kSqrt2;
        return index.nearest(clusters[i], s.counts, s.touched).first;
      });
  report.max_min_dist = worst.value;
  report.worst_index = worst.index;
  report.worst = clusters.cluster(worst.index);
  report.pass = worst.value <= net.epsilon;
  return report;
}

}  // namespace scanlab
