#include "tmig/routing.hpp"

#include <algorithm>

#include "tmig/errors.hpp"

namespace tmig {

namespace {

void accumulate(std::map<EdgeKey, double>& per_edge, const Route& route,
                double rate) {
  for (std::size_t i = 0; i + 1 < route.nodes.size(); ++i) {
    per_edge[EdgeKey(route.nodes[i], route.nodes[i + 1])] += rate;
  }
}

}  // namespace

NodeId closest_transcoder(
    const std::map<NodeId, std::map<NodeId, int>>& dist_by_transcoder,
    NodeId destination) {
  NodeId best = 0;
  int best_dist = kUnreachable;
  bool found = false;
  for (const auto& [transcoder, dist] : dist_by_transcoder) {
    int d = dist.at(destination);
    if (d == kUnreachable) {
      continue;
    }
    if (!found || d < best_dist) {  // map order already breaks ties low-first
      found = true;
      best = transcoder;
      best_dist = d;
    }
  }
  if (!found) {
    throw InvalidNodeError("closest_transcoder: destination unreachable");
  }
  return best;
}

RoutePlan build_routes(const NetworkGraph& graph, const DemandSet& demands,
                       const std::vector<NodeId>& placement) {
  if (placement.empty()) {
    throw NoTranscoderError("build_routes: empty placement");
  }
  std::map<NodeId, std::map<NodeId, int>> dist_by_transcoder;
  for (NodeId t : placement) {
    dist_by_transcoder.emplace(t, hop_distances(graph, t));
  }

  RoutePlan plan;
  for (std::size_t i = 0; i < demands.size(); ++i) {
    const Demand& d = demands[i];
    bool reachable = std::any_of(
        dist_by_transcoder.begin(), dist_by_transcoder.end(),
        [&](const auto& kv) {
          return kv.second.at(d.destination) != kUnreachable &&
                 kv.second.at(d.source) != kUnreachable;
        });
    if (!reachable) {
      plan.blocked.push_back(i);
      continue;
    }
    NodeId assigned = closest_transcoder(dist_by_transcoder, d.destination);

    LeafRoute leaf;
    leaf.demand_index = i;
    leaf.transcoder = assigned;
    leaf.route.nodes = *shortest_path(graph, assigned, d.destination);
    leaf.route.rate_mbps = d.rate.bitrate_mbps;
    plan.leaves.push_back(std::move(leaf));

    TrunkKey key{d.source, assigned, d.content};
    auto it = plan.trunks.find(key);
    if (it == plan.trunks.end()) {
      Route trunk;
      trunk.nodes = *shortest_path(graph, d.source, assigned);
      trunk.rate_mbps = d.rate.bitrate_mbps;
      plan.trunks.emplace(key, std::move(trunk));
    } else {
      it->second.rate_mbps =
          std::max(it->second.rate_mbps, d.rate.bitrate_mbps);
    }
  }
  return plan;
}

RoutePlan build_direct_routes(const NetworkGraph& graph,
                              const DemandSet& demands) {
  RoutePlan plan;
  plan.direct = true;
  for (std::size_t i = 0; i < demands.size(); ++i) {
    const Demand& d = demands[i];
    auto path = shortest_path(graph, d.source, d.destination);
    if (!path) {
      plan.blocked.push_back(i);
      continue;
    }
    LeafRoute leaf;
    leaf.demand_index = i;
    leaf.transcoder = d.source;
    leaf.route.nodes = std::move(*path);
    leaf.route.rate_mbps = d.rate.bitrate_mbps;
    plan.leaves.push_back(std::move(leaf));
  }
  return plan;
}

LoadReport network_load(const RoutePlan& plan) {
  LoadReport report;
  report.blocked = plan.blocked;
  report.admitted = plan.leaves.size();
  for (const LeafRoute& leaf : plan.leaves) {
    report.total_load +=
        leaf.route.rate_mbps * static_cast<double>(leaf.route.edge_count());
    accumulate(report.per_edge, leaf.route, leaf.route.rate_mbps);
  }
  for (const auto& [key, trunk] : plan.trunks) {
    report.total_load +=
        trunk.rate_mbps * static_cast<double>(trunk.edge_count());
    accumulate(report.per_edge, trunk, trunk.rate_mbps);
  }
  return report;
}

LoadReport admit_demands(const NetworkGraph& graph, const DemandSet& demands,
                         const std::vector<NodeId>& placement) {
  std::map<NodeId, std::map<NodeId, int>> dist_by_transcoder;
  for (NodeId t : placement) {
    dist_by_transcoder.emplace(t, hop_distances(graph, t));
  }

  RoutePlan committed;
  committed.direct = placement.empty();
  std::map<EdgeKey, double> load;
  // Admitted trunk rate so far, keyed like the plan's trunks.
  std::map<TrunkKey, double> trunk_rate;

  for (std::size_t i = 0; i < demands.size(); ++i) {
    const Demand& d = demands[i];

    Route leaf_route;
    Route trunk_route;
    TrunkKey key{d.source, d.source, d.content};
    double trunk_increment = 0.0;

    if (placement.empty()) {
      auto path = shortest_path(graph, d.source, d.destination);
      if (!path) {
        committed.blocked.push_back(i);
        continue;
      }
      leaf_route.nodes = std::move(*path);
    } else {
      bool reachable = std::any_of(
          dist_by_transcoder.begin(), dist_by_transcoder.end(),
          [&](const auto& kv) {
            return kv.second.at(d.destination) != kUnreachable &&
                   kv.second.at(d.source) != kUnreachable;
          });
      if (!reachable) {
        committed.blocked.push_back(i);
        continue;
      }
      NodeId assigned = closest_transcoder(dist_by_transcoder, d.destination);
      key = TrunkKey{d.source, assigned, d.content};
      leaf_route.nodes = *shortest_path(graph, assigned, d.destination);
      trunk_route.nodes = *shortest_path(graph, d.source, assigned);
      auto it = trunk_rate.find(key);
      double current = it == trunk_rate.end() ? 0.0 : it->second;
      trunk_increment = std::max(0.0, d.rate.bitrate_mbps - current);
    }
    leaf_route.rate_mbps = d.rate.bitrate_mbps;

    // Total increment per edge, so a leaf and trunk sharing an edge are
    // checked against the combined addition.
    std::map<EdgeKey, double> increment;
    accumulate(increment, leaf_route, d.rate.bitrate_mbps);
    if (trunk_increment > 0.0) {
      accumulate(increment, trunk_route, trunk_increment);
    }
    bool fits = std::all_of(
        increment.begin(), increment.end(), [&](const auto& kv) {
          auto it = load.find(kv.first);
          double current = it == load.end() ? 0.0 : it->second;
          return current + kv.second <=
                 graph.capacity(kv.first.a, kv.first.b) + 1e-9;
        });
    if (!fits) {
      committed.blocked.push_back(i);
      continue;
    }
    for (const auto& [edge, inc] : increment) {
      load[edge] += inc;
    }
    LeafRoute leaf;
    leaf.demand_index = i;
    leaf.transcoder = key.transcoder;
    leaf.route = leaf_route;
    committed.leaves.push_back(std::move(leaf));
    if (!placement.empty()) {
      double& rate = trunk_rate[key];
      rate = std::max(rate, d.rate.bitrate_mbps);
      auto it = committed.trunks.find(key);
      if (it == committed.trunks.end()) {
        trunk_route.rate_mbps = rate;
        committed.trunks.emplace(key, std::move(trunk_route));
      } else {
        it->second.rate_mbps = rate;
      }
    }
  }

  LoadReport report = network_load(committed);
  report.per_edge = std::move(load);
  return report;
}

}  // namespace tmig
