#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "tmig/graph.hpp"

namespace tmig {

/// A trunk carries one stream per (source, transcoder, content) at the
/// highest rate requested by the demands assigned to it.
struct TrunkKey {
  NodeId source;
  NodeId transcoder;
  std::string content;

  auto operator<=>(const TrunkKey&) const = default;
};

/// Simple path as a node sequence; edge count = nodes.size() - 1 (0 for a
/// co-located endpoint pair).
struct Route {
  std::vector<NodeId> nodes;
  double rate_mbps = 0.0;

  std::size_t edge_count() const {
    return nodes.empty() ? 0 : nodes.size() - 1;
  }

  bool operator==(const Route&) const = default;
};

struct LeafRoute {
  std::size_t demand_index = 0;
  NodeId transcoder = 0;
  Route route;  // transcoder -> client at the demand's own rate

  bool operator==(const LeafRoute&) const = default;
};

struct RoutePlan {
  std::vector<LeafRoute> leaves;
  std::map<TrunkKey, Route> trunks;
  std::vector<std::size_t> blocked;  // demand indices left unrouted
  bool direct = false;

  bool operator==(const RoutePlan&) const = default;
};

struct LoadReport {
  double total_load = 0.0;  // Mb/s * hops
  std::map<EdgeKey, double> per_edge;
  std::size_t admitted = 0;
  std::vector<std::size_t> blocked;
};

/// Nearest active transcoder for a destination: minimal hop count, ties to the
/// lowest NodeId. `dist_by_transcoder` maps transcoder -> hop_distances map.
NodeId closest_transcoder(
    const std::map<NodeId, std::map<NodeId, int>>& dist_by_transcoder,
    NodeId destination);

/// Assign each demand to its closest transcoder and lay out deduplicated
/// trunks plus per-demand leaf routes. Throws NoTranscoderError on an empty
/// placement; callers fall back to direct routing.
RoutePlan build_routes(const NetworkGraph& graph, const DemandSet& demands,
                       const std::vector<NodeId>& placement);

/// One independent shortest path per demand at its own rate; no sharing.
RoutePlan build_direct_routes(const NetworkGraph& graph,
                              const DemandSet& demands);

/// Total and per-edge load of a plan, counting each trunk once.
LoadReport network_load(const RoutePlan& plan);

/// Sequential (input-order) admission under edge capacities. A demand is
/// admitted iff its leaf route plus any trunk increment fits every edge.
/// An empty placement admits over direct routes.
LoadReport admit_demands(const NetworkGraph& graph, const DemandSet& demands,
                         const std::vector<NodeId>& placement);

}  // namespace tmig
