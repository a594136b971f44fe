#include "tmig/graph.hpp"

#include <algorithm>
#include <deque>

namespace tmig {

namespace {

void require_node(const NetworkGraph& g, NodeId id, const char* what) {
  if (!g.has_node(id)) {
    throw InvalidNodeError(std::string(what) + ": unknown node " +
                           std::to_string(id));
  }
}

}  // namespace

void NetworkGraph::add_node(NodeId id, const std::vector<Role>& roles) {
  adjacency_.try_emplace(id);
  for (Role r : roles) {
    add_role(id, r);
  }
}

void NetworkGraph::add_role(NodeId id, Role role) {
  require_node(*this, id, "add_role");
  switch (role) {
    case Role::source:
      sources_.insert(id);
      break;
    case Role::client:
      clients_.insert(id);
      break;
    case Role::candidate:
      candidates_.insert(id);
      break;
  }
}

void NetworkGraph::add_edge(NodeId a, NodeId b, double capacity) {
  require_node(*this, a, "add_edge");
  require_node(*this, b, "add_edge");
  if (a == b) {
    throw ParseError("self-loop on node " + std::to_string(a));
  }
  if (capacity <= 0.0) {
    throw ParseError("edge capacity must be positive");
  }
  EdgeKey key(a, b);
  if (edges_.count(key)) {
    throw ParseError("duplicate edge " + std::to_string(a) + "-" +
                     std::to_string(b));
  }
  edges_.emplace(key, capacity);
  auto insert_sorted = [](std::vector<NodeId>& v, NodeId n) {
    v.insert(std::lower_bound(v.begin(), v.end(), n), n);
  };
  insert_sorted(adjacency_[a], b);
  insert_sorted(adjacency_[b], a);
}

std::vector<NodeId> NetworkGraph::node_ids() const {
  std::vector<NodeId> out;
  out.reserve(adjacency_.size());
  for (const auto& [id, _] : adjacency_) {
    out.push_back(id);
  }
  return out;
}

const std::vector<NodeId>& NetworkGraph::neighbors(NodeId id) const {
  auto it = adjacency_.find(id);
  if (it == adjacency_.end()) {
    throw InvalidNodeError("neighbors: unknown node " + std::to_string(id));
  }
  return it->second;
}

int NetworkGraph::degree(NodeId id) const {
  return static_cast<int>(neighbors(id).size());
}

double NetworkGraph::capacity(NodeId a, NodeId b) const {
  auto it = edges_.find(EdgeKey(a, b));
  if (it == edges_.end()) {
    throw InvalidNodeError("capacity: no edge " + std::to_string(a) + "-" +
                           std::to_string(b));
  }
  return it->second;
}

bool NetworkGraph::connected() const {
  if (adjacency_.empty()) {
    return true;
  }
  const auto dist = hop_distances(*this, adjacency_.begin()->first);
  return std::all_of(dist.begin(), dist.end(),
                     [](const auto& kv) { return kv.second != kUnreachable; });
}

std::map<NodeId, int> hop_distances(const NetworkGraph& graph, NodeId origin) {
  require_node(graph, origin, "hop_distances");
  std::map<NodeId, int> dist;
  for (NodeId id : graph.node_ids()) {
    dist[id] = kUnreachable;
  }
  dist[origin] = 0;
  std::deque<NodeId> queue{origin};
  while (!queue.empty()) {
    NodeId cur = queue.front();
    queue.pop_front();
    for (NodeId next : graph.neighbors(cur)) {
      if (dist[next] == kUnreachable) {
        dist[next] = dist[cur] + 1;
        queue.push_back(next);
      }
    }
  }
  return dist;
}

std::optional<std::vector<NodeId>> shortest_path(const NetworkGraph& graph,
                                                 NodeId from, NodeId to) {
  require_node(graph, from, "shortest_path");
  require_node(graph, to, "shortest_path");
  const auto dist_to_target = hop_distances(graph, to);
  if (dist_to_target.at(from) == kUnreachable) {
    return std::nullopt;
  }
  // Walk toward the target, always taking the lowest-id neighbor that keeps
  // the path shortest; neighbor lists are sorted, so the first hit wins.
  std::vector<NodeId> path{from};
  NodeId cur = from;
  while (cur != to) {
    int remaining = dist_to_target.at(cur);
    for (NodeId next : graph.neighbors(cur)) {
      if (dist_to_target.at(next) == remaining - 1) {
        cur = next;
        break;
      }
    }
    path.push_back(cur);
  }
  return path;
}

}  // namespace tmig
