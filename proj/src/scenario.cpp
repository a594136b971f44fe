#include "tmig/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "tmig/errors.hpp"
#include "tmig/rng.hpp"

namespace tmig {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError("scenario: " + where + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) {
    fail(where, std::string("missing field '") + key + "'");
  }
  return obj.at(key);
}

double require_number(const json& obj, const char* key,
                      const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number()) {
    fail(where, std::string("field '") + key + "' must be a number");
  }
  return v.get<double>();
}

std::string require_string(const json& obj, const char* key,
                           const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_string()) {
    fail(where, std::string("field '") + key + "' must be a string");
  }
  return v.get<std::string>();
}

Role parse_role(const std::string& role, const std::string& where) {
  if (role == "source") return Role::source;
  if (role == "client") return Role::client;
  if (role == "candidate") return Role::candidate;
  fail(where, "unknown role '" + role + "'");
}

void parse_solver_block(const json& j, SolverConfig& out) {
  const std::string where = "solver";
  if (j.contains("solver")) {
    std::string name = j.at("solver").get<std::string>();
    if (name == "heuristic") out.solver = Solver::heuristic;
    else if (name == "ga") out.solver = Solver::ga;
    else if (name == "random") out.solver = Solver::random;
    else if (name == "exhaustive") out.solver = Solver::exhaustive;
    else fail(where, "unknown solver '" + name + "'");
  }
  if (j.contains("n")) out.n = j.at("n").get<int>();
  if (j.contains("lambda")) out.lambda = j.at("lambda").get<double>();
  if (j.contains("separation_from_all")) {
    out.separation_from_all = j.at("separation_from_all").get<bool>();
  }
  if (j.contains("generations")) out.generations = j.at("generations").get<int>();
  if (j.contains("population")) out.population = j.at("population").get<int>();
  if (j.contains("operator_fraction")) {
    out.operator_fraction = j.at("operator_fraction").get<double>();
  }
  if (j.contains("seed")) out.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("budget")) out.budget = j.at("budget").get<std::uint64_t>();
}

void parse_sim_block(const json& j, sim::SimConfig& out) {
  if (j.contains("link_rtt_ms")) out.link_rtt_ms = j.at("link_rtt_ms").get<double>();
  if (j.contains("packet_rate")) out.packet_rate = j.at("packet_rate").get<double>();
  if (j.contains("arp_timeout_s")) out.arp_timeout_s = j.at("arp_timeout_s").get<double>();
  if (j.contains("arp_refresh_s")) out.arp_refresh_s = j.at("arp_refresh_s").get<double>();
  if (j.contains("arp_residual_seed")) {
    out.arp_residual_seed = j.at("arp_residual_seed").get<std::uint64_t>();
  }
  if (j.contains("wait1_s")) out.wait1_s = j.at("wait1_s").get<double>();
  if (j.contains("wait2_s")) out.wait2_s = j.at("wait2_s").get<double>();
  if (j.contains("transcoder_startup_s")) {
    out.transcoder_startup_s = j.at("transcoder_startup_s").get<double>();
  }
  if (j.contains("sim_duration_s")) {
    out.sim_duration_s = j.at("sim_duration_s").get<double>();
  }
  if (j.contains("migration_start_s")) {
    out.migration_start_s = j.at("migration_start_s").get<double>();
  }
}

GeneratorSpec parse_generator_block(const json& j) {
  GeneratorSpec spec;
  const std::string where = "generator";
  if (j.contains("model")) spec.model = j.at("model").get<std::string>();
  if (spec.model != "erdos-renyi" && spec.model != "watts-strogatz") {
    fail(where, "unknown model '" + spec.model + "'");
  }
  spec.nodes = static_cast<int>(require_number(j, "nodes", where));
  if (j.contains("edge_probability")) {
    spec.edge_probability = j.at("edge_probability").get<double>();
  }
  if (j.contains("degree")) spec.degree = j.at("degree").get<int>();
  if (j.contains("rewire_probability")) {
    spec.rewire_probability = j.at("rewire_probability").get<double>();
  }
  if (j.contains("capacity_min")) spec.capacity_min = j.at("capacity_min").get<double>();
  if (j.contains("capacity_max")) spec.capacity_max = j.at("capacity_max").get<double>();
  if (j.contains("candidate_fraction")) {
    spec.candidate_fraction = j.at("candidate_fraction").get<double>();
  }
  if (j.contains("client_fraction")) {
    spec.client_fraction = j.at("client_fraction").get<double>();
  }
  if (j.contains("source_count")) spec.source_count = j.at("source_count").get<int>();
  if (j.contains("demand_count")) spec.demand_count = j.at("demand_count").get<int>();
  if (j.contains("content_count")) spec.content_count = j.at("content_count").get<int>();
  if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("max_retries")) spec.max_retries = j.at("max_retries").get<int>();
  return spec;
}

void parse_explicit_graph(const json& j, Scenario& sc) {
  for (const json& node : require(j, "nodes", "nodes")) {
    const std::string where = "nodes[" + node.dump() + "]";
    NodeId id = static_cast<NodeId>(require_number(node, "id", where));
    sc.graph.add_node(id);
    if (node.contains("roles")) {
      for (const json& role : node.at("roles")) {
        sc.graph.add_role(id, parse_role(role.get<std::string>(), where));
      }
    }
  }
  for (const json& edge : require(j, "edges", "edges")) {
    const std::string where = "edges[" + edge.dump() + "]";
    NodeId a = static_cast<NodeId>(require_number(edge, "a", where));
    NodeId b = static_cast<NodeId>(require_number(edge, "b", where));
    double cap = require_number(edge, "capacity", where);
    if (!sc.graph.has_node(a) || !sc.graph.has_node(b)) {
      fail(where, "edge references an undeclared node");
    }
    try {
      sc.graph.add_edge(a, b, cap);
    } catch (const ParseError& e) {
      fail(where, e.what());
    }
  }

  std::set<std::string> codec_labels;
  if (j.contains("codecs")) {
    for (const json& codec : j.at("codecs")) {
      const std::string where = "codecs[" + codec.dump() + "]";
      CodecRate rate{require_string(codec, "label", where),
                     require_number(codec, "bitrate", where)};
      if (rate.bitrate_mbps <= 0.0) {
        fail(where, "bitrate must be positive");
      }
      if (!codec_labels.insert(rate.label).second) {
        fail(where, "duplicate codec label '" + rate.label + "'");
      }
      sc.codecs.push_back(rate);
    }
  }

  if (j.contains("demands")) {
    for (const json& demand : j.at("demands")) {
      const std::string where = "demands[" + demand.dump() + "]";
      Demand d;
      d.source = static_cast<NodeId>(require_number(demand, "source", where));
      d.destination = static_cast<NodeId>(require_number(demand, "dest", where));
      std::string codec = require_string(demand, "codec", where);
      d.content = demand.contains("content")
                      ? demand.at("content").get<std::string>()
                      : codec;
      auto it = std::find_if(sc.codecs.begin(), sc.codecs.end(),
                             [&](const CodecRate& c) { return c.label == codec; });
      if (it == sc.codecs.end()) {
        fail(where, "unknown codec '" + codec + "'");
      }
      d.rate = *it;
      if (!sc.graph.sources().count(d.source)) {
        fail(where, "source " + std::to_string(d.source) +
                        " lacks the 'source' role");
      }
      if (!sc.graph.clients().count(d.destination)) {
        fail(where, "dest " + std::to_string(d.destination) +
                        " lacks the 'client' role");
      }
      sc.demands.push_back(std::move(d));
    }
  }
}

NetworkGraph try_generate(const GeneratorSpec& spec, std::uint64_t sub_seed) {
  Rng rng(sub_seed);
  NetworkGraph g;
  for (int i = 0; i < spec.nodes; ++i) {
    g.add_node(i);
  }
  auto capacity = [&] {
    return rng.uniform(spec.capacity_min, spec.capacity_max);
  };
  if (spec.model == "erdos-renyi") {
    for (int a = 0; a < spec.nodes; ++a) {
      for (int b = a + 1; b < spec.nodes; ++b) {
        if (rng.unit() < spec.edge_probability) {
          g.add_edge(a, b, capacity());
        }
      }
    }
  } else {  // watts-strogatz
    int k = std::max(2, spec.degree - spec.degree % 2);
    struct Pair {
      int a, b;
    };
    std::vector<Pair> lattice;
    for (int a = 0; a < spec.nodes; ++a) {
      for (int step = 1; step <= k / 2; ++step) {
        lattice.push_back({a, (a + step) % spec.nodes});
      }
    }
    std::set<EdgeKey> used;
    for (const Pair& e : lattice) {
      int a = e.a;
      int b = e.b;
      if (rng.unit() < spec.rewire_probability) {
        // redirect the far endpoint to a uniformly random fresh target
        for (int attempt = 0; attempt < spec.nodes; ++attempt) {
          int c = static_cast<int>(rng.below(spec.nodes));
          if (c != a && !used.count(EdgeKey(a, c))) {
            b = c;
            break;
          }
        }
      }
      if (a != b && used.insert(EdgeKey(a, b)).second) {
        g.add_edge(a, b, capacity());
      }
    }
  }
  return g;
}

std::vector<NodeId> sample_nodes(int total, int want, Rng& rng) {
  std::vector<NodeId> deck(total);
  for (int i = 0; i < total; ++i) {
    deck[i] = i;
  }
  want = std::min(want, total);
  for (int i = 0; i < want; ++i) {
    std::size_t j = i + rng.below(deck.size() - i);
    std::swap(deck[i], deck[j]);
  }
  deck.resize(want);
  return deck;
}

}  // namespace

std::vector<CodecRate> default_codecs() {
  return {{"uhd", 100.0}, {"hd", 25.0}, {"sd", 8.0}};
}

NetworkGraph generate_graph(const GeneratorSpec& spec) {
  if (spec.nodes < 2) {
    throw ParamError("generator: nodes must be >= 2");
  }
  for (int attempt = 0; attempt < std::max(1, spec.max_retries); ++attempt) {
    NetworkGraph g = try_generate(spec, spec.seed + attempt);
    if (g.connected()) {
      return g;
    }
  }
  throw InfeasibleError("generator: no connected graph after " +
                        std::to_string(spec.max_retries) +
                        " attempts (seed " + std::to_string(spec.seed) + ")");
}

Scenario generate_scenario(const GeneratorSpec& spec, const std::string& name) {
  Scenario sc;
  sc.name = name;
  sc.graph = generate_graph(spec);
  sc.codecs = default_codecs();

  // Role and demand draws use a separate stream so topology retries do not
  // shift them.
  Rng rng(spec.seed ^ 0x5ca1ab1e5ca1ab1eULL);
  int n = spec.nodes;
  int n_candidates =
      std::max(1, static_cast<int>(std::ceil(spec.candidate_fraction * n)));
  int n_clients =
      std::max(1, static_cast<int>(std::ceil(spec.client_fraction * n)));
  for (NodeId id : sample_nodes(n, n_candidates, rng)) {
    sc.graph.add_role(id, Role::candidate);
  }
  for (NodeId id : sample_nodes(n, n_clients, rng)) {
    sc.graph.add_role(id, Role::client);
  }
  for (NodeId id : sample_nodes(n, std::max(1, spec.source_count), rng)) {
    sc.graph.add_role(id, Role::source);
  }

  std::vector<NodeId> sources(sc.graph.sources().begin(),
                              sc.graph.sources().end());
  std::vector<NodeId> clients(sc.graph.clients().begin(),
                              sc.graph.clients().end());
  int contents = std::max(1, spec.content_count);
  for (int i = 0; i < spec.demand_count; ++i) {
    Demand d;
    d.source = sources[rng.below(sources.size())];
    d.destination = clients[rng.below(clients.size())];
    d.rate = sc.codecs[rng.below(sc.codecs.size())];
    d.content = "c" + std::to_string(rng.below(contents));
    sc.demands.push_back(std::move(d));
  }
  return sc;
}

Scenario parse_scenario(const std::string& text, const std::string& name) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("scenario: " + name + ": " + e.what());
  }
  if (!j.is_object()) {
    fail(name, "top level must be an object");
  }

  Scenario sc;
  sc.name = j.contains("name") ? j.at("name").get<std::string>() : name;

  try {
    if (j.contains("generator")) {
      if (j.contains("nodes") || j.contains("edges")) {
        fail(name, "'generator' excludes explicit 'nodes'/'edges'");
      }
      Scenario generated =
          generate_scenario(parse_generator_block(j.at("generator")), sc.name);
      sc.graph = std::move(generated.graph);
      sc.codecs = std::move(generated.codecs);
      sc.demands = std::move(generated.demands);
    } else {
      parse_explicit_graph(j, sc);
    }
    if (j.contains("solver")) {
      parse_solver_block(j.at("solver"), sc.solver);
    }
    if (j.contains("sim")) {
      parse_sim_block(j.at("sim"), sc.sim);
    }
    if (j.contains("mode")) {
      std::string mode = j.at("mode").get<std::string>();
      if (mode == "blocking") sc.blocking = true;
      else if (mode == "non-blocking") sc.blocking = false;
      else fail("mode", "must be 'blocking' or 'non-blocking'");
    }
  } catch (const json::exception& e) {
    throw ParseError("scenario: " + name + ": " + e.what());
  }

  if (sc.graph.node_count() == 0) {
    fail(sc.name, "graph has no nodes");
  }
  if (!sc.graph.connected()) {
    throw InfeasibleError("scenario: " + sc.name + ": graph is disconnected");
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("scenario: cannot open '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

}  // namespace tmig
