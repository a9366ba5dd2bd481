#include "scanlab/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "scanlab/errors.hpp"

namespace scanlab {
namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("input", "cannot open '" + path + "'");
  return in;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  const auto* b = s.data();
  const auto* e = s.data() + s.size();
  while (b < e && *b == ' ') ++b;
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e) throw DomainError("malformed number '" + s + "' in " + what);
  return v;
}

std::uint64_t parse_uint(const std::string& s, const std::string& what) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw DomainError("malformed integer '" + s + "' in " + what);
  return v;
}

void parse_header_line(const std::string& line, Metadata& meta) {
  std::string body = line.substr(1);
  if (!body.empty() && body.front() == ' ') body.erase(0, 1);
  const auto eq = body.find('=');
  if (eq == std::string::npos) return;
  meta.emplace_back(body.substr(0, eq), body.substr(eq + 1));
}

std::vector<NodeId> parse_ids(const std::string& text, const std::string& what) {
  std::vector<NodeId> ids;
  std::istringstream is(text);
  std::string tok;
  while (is >> tok) ids.push_back(static_cast<NodeId>(parse_uint(tok, what)));
  return ids;
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_nodeset_csv(std::ostream& os, const NodeSet& net) {
  os << "id";
  for (int a = 0; a < net.dim(); ++a) os << ",x" << a;
  os << '\n';
  const bool lattice = net.mode() == Mode::LatticeL1;
  for (std::size_t id = 0; id < net.size(); ++id) {
    os << id;
    for (double x : net.coord(static_cast<NodeId>(id))) {
      os << ',';
      if (lattice)
        os << static_cast<long>(x);
      else
        os << format_double(x);
    }
    os << '\n';
  }
}

std::string nodeset_sidecar(const NodeSet& net) {
  nlohmann::json j{{"mode", std::string(to_string(net.mode()))}, {"d", net.dim()}, {"m", net.size()}};
  return j.dump();
}

NodeSet read_nodeset(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  nlohmann::json side;
  if (!std::getline(in, line)) throw DomainError("empty node-set file '" + path + "'");
  try {
    if (!line.empty() && line.front() == '#') {
      side = nlohmann::json::parse(line.substr(1));
      if (!std::getline(in, line)) throw DomainError("node-set file lacks a header");
    } else {
      auto sc = open_in(path + ".json");
      side = nlohmann::json::parse(sc);
    }
  } catch (const nlohmann::json::exception& e) {
    throw DomainError("malformed node-set sidecar for '" + path + "': " + e.what());
  }
  const int d = side.at("d").get<int>();
  const Mode mode = parse_mode(side.at("mode").get<std::string>());
  const auto m = side.at("m").get<std::size_t>();
  if (split(line, ',').size() != static_cast<std::size_t>(d) + 1) throw DomainError("node-set header does not match d");
  std::vector<double> coords;
  coords.reserve(m * static_cast<std::size_t>(d));
  std::size_t expect = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != static_cast<std::size_t>(d) + 1) throw DomainError("node-set row with wrong field count");
    if (parse_uint(f[0], "node id") != expect++) throw DomainError("node ids must be 0..m-1 in order");
    for (int a = 0; a < d; ++a) coords.push_back(parse_double(f[a + 1], "node coordinates"));
  }
  if (expect != m) throw DomainError("node-set row count differs from the sidecar m");
  return NodeSet::from_coordinates(d, mode, std::move(coords));
}

void write_cluster_list(std::ostream& os, const Metadata& meta, const ClusterList& clusters) {
  for (const auto& [k, v] : meta) os << "# " << k << '=' << v << '\n';
  std::string line;
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    line.clear();
    for (NodeId v : clusters[i]) {
      if (!line.empty()) line += ' ';
      line += std::to_string(v);
    }
    line += '\n';
    os << line;
  }
}

ClusterFile read_cluster_list(std::istream& is) {
  ClusterFile f;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      parse_header_line(line, f.meta);
      continue;
    }
    const Cluster c = Cluster::from_ids(parse_ids(line, "cluster list"));
    f.clusters.push_back(c);
  }
  return f;
}

ClusterFile read_cluster_list(const std::string& path) {
  auto in = open_in(path);
  return read_cluster_list(in);
}

void write_field_csv(std::ostream& os, const Field& field) {
  os << "node,t,value\n";
  for (int t = 0; t <= field.horizon(); ++t) {
    const auto x = field.slice(t);
    for (std::size_t v = 0; v < x.size(); ++v) os << v << ',' << t << ',' << format_double(x[v]) << '\n';
  }
}

Field read_field_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("node,t,value", 0) != 0) throw DomainError("field CSV lacks its header");
  struct Entry {
    std::size_t v;
    std::size_t t;
    double x;
  };
  std::vector<Entry> rows;
  std::size_t m = 0, slices = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 3) throw DomainError("field row with wrong field count");
    Entry e{parse_uint(f[0], "field node"), parse_uint(f[1], "field time"), parse_double(f[2], "field value")};
    m = std::max(m, e.v + 1);
    slices = std::max(slices, e.t + 1);
    rows.push_back(e);
  }
  if (rows.empty()) throw DomainError("empty field CSV");
  if (rows.size() != m * slices) throw DomainError("field CSV is incomplete");
  Field field(m, static_cast<int>(slices) - 1);
  std::vector<char> seen(m * slices, 0);
  for (const auto& e : rows) {
    const std::size_t k = e.t * m + e.v;
    if (seen[k]++) throw DomainError("duplicate (node, t) pair in field CSV");
    field.at(static_cast<NodeId>(e.v), static_cast<int>(e.t)) = e.x;
  }
  return field;
}

Field read_field_csv(const std::string& path) {
  auto in = open_in(path);
  return read_field_csv(in);
}

void write_sequence(std::ostream& os, const ClusterSequence& seq) {
  for (const auto& [k, v] : seq.meta) os << "# " << k << '=' << v << '\n';
  for (std::size_t t = 0; t < seq.slices.size(); ++t) {
    os << t << ':';
    for (NodeId v : seq.slices[t]) os << ' ' << v;
    os << '\n';
  }
}

ClusterSequence read_sequence(std::istream& is) {
  ClusterSequence seq;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      parse_header_line(line, seq.meta);
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw DomainError("sequence line lacks 't:'");
    const auto t = parse_uint(line.substr(0, colon), "sequence time");
    if (t != seq.slices.size()) throw DomainError("sequence times must be 0..t_m in order");
    seq.slices.push_back(Cluster::from_ids(parse_ids(line.substr(colon + 1), "sequence")));
  }
  return seq;
}

}  // namespace scanlab
