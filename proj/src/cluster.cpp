#include "scanlab/cluster.hpp"

#include <algorithm>
#include <cassert>

#include "scanlab/rng.hpp"

namespace scanlab {

Cluster Cluster::from_ids(std::vector<NodeId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return Cluster(std::move(ids));
}

Cluster Cluster::from_sorted(std::vector<NodeId> ids) {
  assert(std::adjacent_find(ids.begin(), ids.end(),
                            [](NodeId a, NodeId b) { return a >= b; }) == ids.end());
  return Cluster(std::move(ids));
}

bool Cluster::contains(NodeId id) const noexcept {
  return std::binary_search(ids_.begin(), ids_.end(), id);
}

bool Cluster::is_subset_of(const Cluster& other) const noexcept {
  return std::includes(other.ids_.begin(), other.ids_.end(), ids_.begin(), ids_.end());
}

std::size_t intersection_size(std::span<const NodeId> a, std::span<const NodeId> b) noexcept {
  std::size_t i = 0, j = 0, n = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

std::uint64_t cluster_hash(std::span<const NodeId> ids) noexcept {
  std::uint64_t h = mix64(ids.size());
  for (NodeId id : ids) h = mix64(h ^ id);
  return h;
}

void ClusterList::push_back(std::span<const NodeId> sorted_ids) {
  ids_.insert(ids_.end(), sorted_ids.begin(), sorted_ids.end());
  offsets_.push_back(ids_.size());
}

void ClusterList::reserve(std::size_t clusters, std::size_t total_ids) {
  offsets_.reserve(clusters + 1);
  ids_.reserve(total_ids);
}

Cluster ClusterList::cluster(std::size_t i) const {
  auto s = (*this)[i];
  return Cluster::from_sorted(std::vector<NodeId>(s.begin(), s.end()));
}

std::size_t ClusterList::max_cluster_size() const noexcept {
  std::size_t best = 0;
  for (std::size_t i = 0; i + 1 < offsets_.size(); ++i)
    best = std::max(best, offsets_[i + 1] - offsets_[i]);
  return best;
}

}  // namespace scanlab
