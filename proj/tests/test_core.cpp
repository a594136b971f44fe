#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "test_util.hpp"
#include "tmig/errors.hpp"
#include "tmig/routing.hpp"

using namespace tmig;

namespace {

NetworkGraph path_graph(int n, double cap = 1000.0) {
  NetworkGraph g;
  for (int i = 0; i < n; ++i) {
    g.add_node(i);
  }
  for (int i = 0; i + 1 < n; ++i) {
    g.add_edge(i, i + 1, cap);
  }
  return g;
}

Demand make_demand(NodeId s, NodeId t, double rate,
                   const std::string& content = "c0") {
  return Demand{s, t, CodecRate{"codec", rate}, content};
}

}  // namespace

TEST_CASE("graph construction rejects bad edges") {
  NetworkGraph g;
  g.add_node(1);
  g.add_node(2);
  CHECK_THROWS_AS(g.add_edge(1, 1, 10.0), ParseError);   // self loop
  CHECK_THROWS_AS(g.add_edge(1, 2, 0.0), ParseError);    // non-positive cap
  CHECK_THROWS_AS(g.add_edge(1, 3, 10.0), InvalidNodeError);
  g.add_edge(1, 2, 10.0);
  CHECK_THROWS_AS(g.add_edge(2, 1, 5.0), ParseError);    // parallel edge
}

TEST_CASE("hop_distances identity and path cases") {
  NetworkGraph single;
  single.add_node(7);
  auto d = hop_distances(single, 7);
  CHECK(d.size() == 1);
  CHECK(d.at(7) == 0);

  NetworkGraph abc = path_graph(3);
  auto da = hop_distances(abc, 0);
  CHECK(da.at(0) == 0);
  CHECK(da.at(1) == 1);
  CHECK(da.at(2) == 2);

  CHECK_THROWS_AS(hop_distances(abc, 9), InvalidNodeError);
}

TEST_CASE("hop_distances matches the Floyd-Warshall oracle") {
  Rng rng(42);
  NetworkGraph g = test::random_connected_graph(12, 0.2, rng);
  auto oracle = test::floyd_warshall(g);
  for (NodeId origin : g.node_ids()) {
    auto d = hop_distances(g, origin);
    for (NodeId target : g.node_ids()) {
      CHECK(d.at(target) == oracle.at(origin).at(target));
    }
  }
}

TEST_CASE("hop_distances triangle inequality and zero self-distance") {
  Rng rng(7);
  NetworkGraph g = test::random_connected_graph(10, 0.25, rng);
  std::map<NodeId, std::map<NodeId, int>> all;
  for (NodeId v : g.node_ids()) {
    all[v] = hop_distances(g, v);
    CHECK(all[v].at(v) == 0);
  }
  for (NodeId a : g.node_ids()) {
    for (NodeId b : g.node_ids()) {
      for (NodeId c : g.node_ids()) {
        CHECK(all[a].at(c) <= all[a].at(b) + all[b].at(c));
      }
    }
  }
}

TEST_CASE("degree counts incident edges") {
  NetworkGraph tri;
  for (int i = 0; i < 3; ++i) tri.add_node(i);
  tri.add_edge(0, 1, 1);
  tri.add_edge(1, 2, 1);
  tri.add_edge(0, 2, 1);
  CHECK(tri.degree(0) == 2);
  CHECK(tri.degree(1) == 2);

  NetworkGraph star;
  star.add_node(0);
  for (int i = 1; i <= 7; ++i) {
    star.add_node(i);
    star.add_edge(0, i, 1);
  }
  CHECK(star.degree(0) == 7);
  CHECK(star.degree(3) == 1);
  CHECK_THROWS_AS(star.degree(99), InvalidNodeError);

  NetworkGraph abc = path_graph(3);
  CHECK(abc.degree(1) == 2);
}

TEST_CASE("shortest_path prefers the lexicographically smallest route") {
  // Two equal-length routes 0->3: 0-1-3 and 0-2-3. Expect 0-1-3.
  NetworkGraph g;
  for (int i = 0; i < 4; ++i) g.add_node(i);
  g.add_edge(0, 1, 1);
  g.add_edge(0, 2, 1);
  g.add_edge(1, 3, 1);
  g.add_edge(2, 3, 1);
  auto p = shortest_path(g, 0, 3);
  REQUIRE(p.has_value());
  CHECK(*p == std::vector<NodeId>{0, 1, 3});
}

TEST_CASE("build_routes on a transcoder along the shortest path") {
  NetworkGraph g = path_graph(5);
  g.add_role(0, Role::source);
  g.add_role(2, Role::candidate);
  g.add_role(4, Role::client);
  DemandSet demands{make_demand(0, 4, 100)};

  RoutePlan plan = build_routes(g, demands, {2});
  REQUIRE(plan.leaves.size() == 1);
  REQUIRE(plan.trunks.size() == 1);
  const Route& trunk = plan.trunks.begin()->second;
  std::vector<NodeId> joined = trunk.nodes;
  joined.insert(joined.end(), plan.leaves[0].route.nodes.begin() + 1,
                plan.leaves[0].route.nodes.end());
  auto direct = shortest_path(g, 0, 4);
  CHECK(joined == *direct);
}

TEST_CASE("trunk dedup keeps the max rate over assigned demands") {
  NetworkGraph g = path_graph(6);
  g.add_role(0, Role::source);
  g.add_role(3, Role::candidate);
  g.add_role(4, Role::client);
  g.add_role(5, Role::client);
  DemandSet demands{make_demand(0, 4, 100), make_demand(0, 5, 60)};

  RoutePlan plan = build_routes(g, demands, {3});
  REQUIRE(plan.trunks.size() == 1);
  CHECK(plan.trunks.begin()->second.rate_mbps == 100);
  REQUIRE(plan.leaves.size() == 2);
  CHECK(plan.leaves[0].route.rate_mbps == 100);
  CHECK(plan.leaves[1].route.rate_mbps == 60);
}

TEST_CASE("build_routes throws on an empty placement") {
  NetworkGraph g = path_graph(3);
  CHECK_THROWS_AS(build_routes(g, {make_demand(0, 2, 10)}, {}),
                  NoTranscoderError);
}

TEST_CASE("demand assignment matches exhaustive nearest-transcoder scan") {
  Rng rng(99);
  NetworkGraph g = test::random_connected_graph(15, 0.15, rng);
  test::assign_role(g, Role::source, 2, rng);
  test::assign_role(g, Role::client, 8, rng);
  std::vector<CodecRate> codecs{{"uhd", 100}, {"hd", 25}};
  DemandSet demands = test::random_demands(g, codecs, 10, 3, rng);
  std::vector<NodeId> placement{1, 6, 11};

  RoutePlan plan = build_routes(g, demands, placement);
  std::map<NodeId, std::map<NodeId, int>> dist;
  for (NodeId t : placement) {
    dist[t] = hop_distances(g, t);
  }
  REQUIRE(plan.leaves.size() == demands.size());
  for (const LeafRoute& leaf : plan.leaves) {
    NodeId dest = demands[leaf.demand_index].destination;
    // Oracle: scan every transcoder, lowest distance then lowest id.
    NodeId expect = placement[0];
    int best = kUnreachable;
    for (NodeId t : {placement[0], placement[1], placement[2]}) {
      int d = dist[t].at(dest);
      if (d < best || (d == best && t < expect)) {
        best = d;
        expect = t;
      }
    }
    CHECK(leaf.transcoder == expect);
    CHECK(static_cast<int>(leaf.route.edge_count()) == best);
  }
}

TEST_CASE("build_routes is deterministic") {
  Rng rng(5);
  NetworkGraph g = test::random_connected_graph(12, 0.2, rng);
  test::assign_role(g, Role::source, 1, rng);
  test::assign_role(g, Role::client, 5, rng);
  std::vector<CodecRate> codecs{{"uhd", 100}};
  DemandSet demands = test::random_demands(g, codecs, 8, 2, rng);
  RoutePlan a = build_routes(g, demands, {2, 7});
  RoutePlan b = build_routes(g, demands, {2, 7});
  CHECK(a == b);
}

TEST_CASE("direct routes are independent per demand") {
  NetworkGraph g = path_graph(4);
  DemandSet demands{make_demand(0, 3, 100)};
  RoutePlan plan = build_direct_routes(g, demands);
  REQUIRE(plan.leaves.size() == 1);
  CHECK(plan.leaves[0].route.edge_count() == 3);
  CHECK(network_load(plan).total_load == 300);

  NetworkGraph fork = path_graph(3);
  fork.add_node(3);
  fork.add_edge(1, 3, 1000);
  DemandSet two{make_demand(0, 2, 50), make_demand(0, 3, 50)};
  RoutePlan p2 = build_direct_routes(fork, two);
  CHECK(p2.leaves.size() == 2);
  CHECK(network_load(p2).total_load == 200);  // no sharing
}

TEST_CASE("network_load equals an independent rate-times-edges audit") {
  NetworkGraph g = path_graph(6);
  g.add_role(0, Role::source);
  g.add_role(2, Role::candidate);
  g.add_role(3, Role::client);
  g.add_role(4, Role::client);
  DemandSet demands{make_demand(0, 3, 100), make_demand(0, 4, 60)};
  RoutePlan plan = build_routes(g, demands, {2});

  LoadReport report = network_load(plan);
  // Independent audit: sum rate * edges over every routed stream.
  double audit = 0.0;
  for (const LeafRoute& leaf : plan.leaves) {
    audit += leaf.route.rate_mbps * leaf.route.edge_count();
  }
  for (const auto& [key, trunk] : plan.trunks) {
    audit += trunk.rate_mbps * trunk.edge_count();
  }
  CHECK(report.total_load == doctest::Approx(audit));
  // trunk 100 x 2 edges + leaves 100x1 + 60x2 = 420
  CHECK(report.total_load == doctest::Approx(420));

  CHECK(network_load(RoutePlan{}).total_load == 0);
}

TEST_CASE("per-edge loads sum to the total") {
  Rng rng(11);
  NetworkGraph g = test::random_connected_graph(14, 0.2, rng);
  test::assign_role(g, Role::source, 2, rng);
  test::assign_role(g, Role::client, 6, rng);
  std::vector<CodecRate> codecs{{"uhd", 100}, {"sd", 8}};
  DemandSet demands = test::random_demands(g, codecs, 12, 2, rng);
  LoadReport report = network_load(build_routes(g, demands, {3, 9}));
  double sum = 0.0;
  for (const auto& [edge, load] : report.per_edge) {
    sum += load;
  }
  CHECK(sum == doctest::Approx(report.total_load));
}

TEST_CASE("trunk sharing beats a second direct route") {
  NetworkGraph g = path_graph(6);
  g.add_node(6);
  g.add_edge(4, 6, 1000);
  g.add_role(0, Role::source);
  g.add_role(4, Role::candidate);
  g.add_role(5, Role::client);
  g.add_role(6, Role::client);
  DemandSet one{make_demand(0, 5, 100)};
  DemandSet two{make_demand(0, 5, 100), make_demand(0, 6, 100)};

  double base = network_load(build_routes(g, one, {4})).total_load;
  double shared = network_load(build_routes(g, two, {4})).total_load;
  double direct_cost =
      100.0 * shortest_path(g, 0, 6)->size() - 100.0;  // rate * edges
  CHECK(shared - base < direct_cost);
}

TEST_CASE("admission trivial accept and bottleneck reject") {
  NetworkGraph g = path_graph(4, 500);
  g.add_role(0, Role::source);
  g.add_role(2, Role::candidate);
  g.add_role(3, Role::client);
  DemandSet demands{make_demand(0, 3, 100)};
  LoadReport ok = admit_demands(g, demands, {2});
  CHECK(ok.admitted == 1);
  CHECK(ok.blocked.empty());

  NetworkGraph tight;
  for (int i = 0; i < 4; ++i) tight.add_node(i);
  tight.add_edge(0, 1, 500);
  tight.add_edge(1, 2, 50);  // bottleneck below the demand rate
  tight.add_edge(2, 3, 500);
  tight.add_role(0, Role::source);
  tight.add_role(1, Role::candidate);
  tight.add_role(3, Role::client);
  LoadReport blocked = admit_demands(tight, demands, {1});
  CHECK(blocked.admitted == 0);
  REQUIRE(blocked.blocked.size() == 1);
  CHECK(blocked.blocked[0] == 0);
}

TEST_CASE("sequential admission honors capacities edge by edge") {
  Rng rng(23);
  NetworkGraph g = test::random_connected_graph(8, 0.3, rng, 60.0, 220.0);
  test::assign_role(g, Role::source, 2, rng);
  test::assign_role(g, Role::client, 4, rng);
  std::vector<CodecRate> codecs{{"uhd", 100}, {"hd", 25}};
  DemandSet demands = test::random_demands(g, codecs, 10, 2, rng);
  std::vector<NodeId> placement{0, 4};

  LoadReport report = admit_demands(g, demands, placement);
  CHECK(report.admitted + report.blocked.size() == demands.size());
  CHECK(report.admitted > 0);

  // Recheck: every edge within capacity after admission.
  for (const auto& [edge, load] : report.per_edge) {
    CHECK(load <= g.capacity(edge.a, edge.b) + 1e-9);
  }

  // Oracle: replay the sequential first-fit admission independently.
  std::map<NodeId, std::map<NodeId, int>> dist;
  for (NodeId t : placement) dist[t] = hop_distances(g, t);
  std::map<EdgeKey, double> load;
  std::map<TrunkKey, double> trunk_seen;
  std::size_t admitted = 0;
  for (const Demand& d : demands) {
    NodeId assigned = closest_transcoder(dist, d.destination);
    auto leaf = *shortest_path(g, assigned, d.destination);
    auto trunk = *shortest_path(g, d.source, assigned);
    TrunkKey key{d.source, assigned, d.content};
    double inc_trunk =
        std::max(0.0, d.rate.bitrate_mbps - trunk_seen[key]);
    std::map<EdgeKey, double> inc;
    for (std::size_t i = 0; i + 1 < leaf.size(); ++i) {
      inc[EdgeKey(leaf[i], leaf[i + 1])] += d.rate.bitrate_mbps;
    }
    for (std::size_t i = 0; inc_trunk > 0 && i + 1 < trunk.size(); ++i) {
      inc[EdgeKey(trunk[i], trunk[i + 1])] += inc_trunk;
    }
    bool fits = true;
    for (const auto& [e, v] : inc) {
      if (load[e] + v > g.capacity(e.a, e.b) + 1e-9) {
        fits = false;
      }
    }
    if (!fits) {
      continue;
    }
    for (const auto& [e, v] : inc) {
      load[e] += v;
    }
    trunk_seen[key] = std::max(trunk_seen[key], d.rate.bitrate_mbps);
    ++admitted;
  }
  CHECK(report.admitted == admitted);
}

TEST_CASE("admission with empty placement routes directly") {
  NetworkGraph g = path_graph(3, 150);
  g.add_role(0, Role::source);
  g.add_role(2, Role::client);
  DemandSet demands{make_demand(0, 2, 100), make_demand(0, 2, 100)};
  LoadReport report = admit_demands(g, demands, {});
  CHECK(report.admitted == 1);  // second stream exceeds the 150 capacity
  CHECK(report.blocked == std::vector<std::size_t>{1});
}
