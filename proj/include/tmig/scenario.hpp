#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tmig/graph.hpp"
#include "tmig/placement.hpp"
#include "tmig/simulation.hpp"

namespace tmig {

/// Solver selection and parameters as given in a scenario's `solver` block.
struct SolverConfig {
  Solver solver = Solver::heuristic;
  int n = 1;
  double lambda = 0.01;
  bool separation_from_all = false;
  int generations = 10;
  int population = 50;
  double operator_fraction = 0.5;
  std::uint64_t seed = 1;
  std::uint64_t budget = 100000;

  HeuristicParams heuristic_params() const {
    return HeuristicParams{n, lambda, separation_from_all};
  }
  GaParams ga_params(bool blocking) const {
    return GaParams{generations, population, operator_fraction, seed,
                    blocking};
  }
};

/// Seeded random scenario generator. Either Erdős–Rényi (edge_probability)
/// or Watts–Strogatz (degree + rewire_probability) topology.
struct GeneratorSpec {
  std::string model = "erdos-renyi";  // or "watts-strogatz"
  int nodes = 100;
  double edge_probability = 0.05;
  int degree = 4;                   // ring-lattice degree (even)
  double rewire_probability = 0.1;
  double capacity_min = 200.0;
  double capacity_max = 1000.0;
  double candidate_fraction = 0.10;
  double client_fraction = 0.20;
  int source_count = 1;
  int demand_count = 20;
  int content_count = 3;
  std::uint64_t seed = 1;
  int max_retries = 50;  // connectivity retries (sub-seed incremented)
};

struct Scenario {
  std::string name = "scenario";
  NetworkGraph graph;
  std::vector<CodecRate> codecs;
  DemandSet demands;
  SolverConfig solver;
  sim::SimConfig sim;
  bool blocking = false;
};

/// Parses a scenario JSON document. Throws ParseError with a field
/// diagnostic on malformed input and InfeasibleError on a disconnected
/// graph or an exhausted generator retry budget.
Scenario parse_scenario(const std::string& text, const std::string& name);

/// Reads and parses a scenario file.
Scenario load_scenario(const std::string& path);

/// Connected random graph per `spec`; retries with incremented sub-seeds,
/// throwing InfeasibleError when max_retries connected attempts all fail.
NetworkGraph generate_graph(const GeneratorSpec& spec);

/// Full scenario (graph + default codecs + random demands) per `spec`.
Scenario generate_scenario(const GeneratorSpec& spec, const std::string& name);

/// Codec set used by generated scenarios: uhd 100, hd 25, sd 8 Mb/s.
std::vector<CodecRate> default_codecs();

}  // namespace tmig
