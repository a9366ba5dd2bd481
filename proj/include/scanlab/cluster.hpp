#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace scanlab {

using NodeId = std::uint32_t;

/// A set of node ids, stored strictly increasing.
class Cluster {
 public:
  Cluster() = default;

  /// Sorts and removes duplicates.
  static Cluster from_ids(std::vector<NodeId> ids);
  /// Takes ids that are already strictly increasing (checked in debug builds).
  static Cluster from_sorted(std::vector<NodeId> ids);

  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }
  std::span<const NodeId> ids() const noexcept { return ids_; }
  NodeId operator[](std::size_t i) const noexcept { return ids_[i]; }
  auto begin() const noexcept { return ids_.begin(); }
  auto end() const noexcept { return ids_.end(); }

  bool contains(NodeId id) const noexcept;
  bool is_subset_of(const Cluster& other) const noexcept;

  friend bool operator==(const Cluster&, const Cluster&) = default;
  friend auto operator<=>(const Cluster&, const Cluster&) = default;

 private:
  explicit Cluster(std::vector<NodeId> ids) : ids_(std::move(ids)) {}
  std::vector<NodeId> ids_;
};

/// |K ∩ L| by sorted merge.
std::size_t intersection_size(std::span<const NodeId> a, std::span<const NodeId> b) noexcept;

/// Hash of an id set, for deduplicating cluster streams.
std::uint64_t cluster_hash(std::span<const NodeId> ids) noexcept;

/// Compressed (CSR) list of clusters: one flat id array plus offsets.
/// This is the layout the scan kernels iterate over.
class ClusterList {
 public:
  ClusterList() = default;

  void push_back(std::span<const NodeId> sorted_ids);
  void push_back(const Cluster& c) { push_back(c.ids()); }
  void reserve(std::size_t clusters, std::size_t total_ids);

  std::size_t size() const noexcept { return offsets_.size() - 1; }
  bool empty() const noexcept { return size() == 0; }
  std::span<const NodeId> operator[](std::size_t i) const noexcept {
    return {ids_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  Cluster cluster(std::size_t i) const;
  std::size_t total_ids() const noexcept { return ids_.size(); }
  std::size_t max_cluster_size() const noexcept;

  std::span<const std::size_t> offsets() const noexcept { return offsets_; }
  std::span<const NodeId> flat_ids() const noexcept { return ids_; }

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> ids_;
};

}  // namespace scanlab
