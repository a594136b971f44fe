#pragma once

#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tmig/errors.hpp"

namespace tmig {

using NodeId = int;

/// Hop count reported for nodes that cannot be reached from the origin.
constexpr int kUnreachable = std::numeric_limits<int>::max();

/// Undirected edge with normalized endpoint order (a <= b).
struct EdgeKey {
  NodeId a;
  NodeId b;

  EdgeKey(NodeId x, NodeId y) : a(x < y ? x : y), b(x < y ? y : x) {}

  auto operator<=>(const EdgeKey&) const = default;
};

struct CodecRate {
  std::string label;
  double bitrate_mbps = 0.0;  // > 0
};

struct Demand {
  NodeId source = 0;       // in S
  NodeId destination = 0;  // in T
  CodecRate rate;
  std::string content;  // demands with equal (source, content) may share a trunk
};

using DemandSet = std::vector<Demand>;

enum class Role { source, client, candidate };

/// Undirected capacitated graph with role-tagged nodes. Neighbor lists are
/// kept sorted so traversals are deterministic.
class NetworkGraph {
 public:
  void add_node(NodeId id, const std::vector<Role>& roles = {});
  void add_role(NodeId id, Role role);

  /// capacity is in Mb/s and must be positive; parallel edges and self-loops
  /// are rejected.
  void add_edge(NodeId a, NodeId b, double capacity);

  bool has_node(NodeId id) const { return adjacency_.count(id) != 0; }
  std::size_t node_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  std::vector<NodeId> node_ids() const;
  const std::set<NodeId>& sources() const { return sources_; }
  const std::set<NodeId>& clients() const { return clients_; }
  const std::set<NodeId>& candidates() const { return candidates_; }

  const std::vector<NodeId>& neighbors(NodeId id) const;
  int degree(NodeId id) const;
  double capacity(NodeId a, NodeId b) const;
  const std::map<EdgeKey, double>& edges() const { return edges_; }

  bool connected() const;

 private:
  std::map<NodeId, std::vector<NodeId>> adjacency_;
  std::map<EdgeKey, double> edges_;
  std::set<NodeId> sources_;
  std::set<NodeId> clients_;
  std::set<NodeId> candidates_;
};

/// Unit-weight shortest-path hop counts from origin to every node.
/// Unreachable nodes map to kUnreachable.
std::map<NodeId, int> hop_distances(const NetworkGraph& graph, NodeId origin);

/// Shortest path from `from` to `to`, choosing the lexicographically smallest
/// node sequence among equal-length paths. Empty optional when unreachable.
std::optional<std::vector<NodeId>> shortest_path(const NetworkGraph& graph,
                                                 NodeId from, NodeId to);

}  // namespace tmig
