#pragma once

#include <iosfwd>
#include <string>

#include "scanlab/cluster.hpp"
#include "scanlab/clusters.hpp"
#include "scanlab/growth.hpp"
#include "scanlab/models.hpp"
#include "scanlab/network.hpp"

namespace scanlab {

/// `id,x0,...,x{d-1}`; lattice coordinates as integers, Euclidean ones with 17 digits.
void write_nodeset_csv(std::ostream& os, const NodeSet& net);
/// One-line sidecar `{"d":..,"m":..,"mode":".."}`.
std::string nodeset_sidecar(const NodeSet& net);
/// Reads a node-set CSV. The sidecar is taken from a leading `#` line if present,
/// otherwise from `<path>.json`.
NodeSet read_nodeset(const std::string& path);

struct ClusterFile {
  Metadata meta;
  ClusterList clusters;
};

/// `# key=value` header lines, then one cluster per line as space-separated ids.
void write_cluster_list(std::ostream& os, const Metadata& meta, const ClusterList& clusters);
ClusterFile read_cluster_list(std::istream& is);
ClusterFile read_cluster_list(const std::string& path);

/// `node,t,value` for every (node, time).
void write_field_csv(std::ostream& os, const Field& field);
/// Node count and horizon are the largest indices seen plus one; missing pairs are an error.
Field read_field_csv(std::istream& is);
Field read_field_csv(const std::string& path);

/// `# key=value` header, then `t: id id ...` for every t (empty slices included).
void write_sequence(std::ostream& os, const ClusterSequence& seq);
ClusterSequence read_sequence(std::istream& is);

/// Full-precision text form of a double.
std::string format_double(double x);

}  // namespace scanlab
