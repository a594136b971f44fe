#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tmig/graph.hpp"
#include "tmig/routing.hpp"

namespace tmig {

enum class Solver { heuristic, ga, random, exhaustive };

std::string solver_name(Solver s);

struct Placement {
  std::vector<NodeId> transcoders;
  Solver solver = Solver::heuristic;
  double score = 0.0;
  double runtime_s = 0.0;
  /// Set when fewer sites than requested were available.
  bool truncated = false;
};

struct HeuristicParams {
  int transcoder_count = 1;  // N
  double separation = 0.01;  // lambda, valid range (0, 0.1]
  /// false: a candidate qualifies when it is farther than sepDist from SOME
  /// chosen transcoder (the literal pseudocode reading). true: from ALL.
  bool separation_from_all = false;
};

struct GaParams {
  int generations = 10;
  int population = 50;
  double operator_fraction = 0.5;  // share crossed / mutated per generation
  std::uint64_t seed = 1;
  /// false: fitness = non-blocking network load. true: maximize admitted
  /// demands under capacities.
  bool blocking = false;
};

/// Candidate fitness (sum over demands of hops(a, dest) * rate) / degree(a).
/// Isolated candidates score infinity.
double score_location(const NetworkGraph& graph, NodeId a,
                      const DemandSet& demands);

/// Sum over demands of hops(closest location, dest) * rate; no degree
/// division.
double group_score(const NetworkGraph& graph,
                   const std::vector<NodeId>& locations,
                   const DemandSet& demands);

/// Greedy separation-distance heuristic. Deterministic; returns up to N
/// sites with `truncated` set when N exceeds the candidate pool.
Placement place_heuristic(const NetworkGraph& graph, const DemandSet& demands,
                          const HeuristicParams& params);

/// Genetic baseline over length-n chromosomes of candidate sites. Stops
/// early once best fitness reaches stop_score, if given. Per-generation
/// best fitness is appended to *history when non-null.
Placement place_ga(const NetworkGraph& graph, const DemandSet& demands, int n,
                   const GaParams& params,
                   std::optional<double> stop_score = std::nullopt,
                   std::vector<double>* history = nullptr);

Placement place_random(const NetworkGraph& graph, int n, std::uint64_t seed);

/// Enumerates every n-subset of the candidates and returns the one with the
/// lowest network load. Refuses when C(|A|, n) exceeds the budget.
Placement place_exhaustive(const NetworkGraph& graph, const DemandSet& demands,
                           int n, std::uint64_t budget = 100000);

/// Non-blocking network load of a placement (build_routes + network_load).
double placement_load(const NetworkGraph& graph, const DemandSet& demands,
                      const std::vector<NodeId>& placement);

}  // namespace tmig
