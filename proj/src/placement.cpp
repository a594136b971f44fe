#include "tmig/placement.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "tmig/errors.hpp"
#include "tmig/rng.hpp"

namespace tmig {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<NodeId> sorted_candidates(const NetworkGraph& graph) {
  return {graph.candidates().begin(), graph.candidates().end()};
}

/// Lazily computed hop-distance maps, one per queried node.
class DistanceCache {
 public:
  explicit DistanceCache(const NetworkGraph& graph) : graph_(graph) {}

  const std::map<NodeId, int>& from(NodeId node) {
    auto it = cache_.find(node);
    if (it == cache_.end()) {
      it = cache_.emplace(node, hop_distances(graph_, node)).first;
    }
    return it->second;
  }

 private:
  const NetworkGraph& graph_;
  std::map<NodeId, std::map<NodeId, int>> cache_;
};

double score_location_cached(const NetworkGraph& graph, NodeId a,
                             const DemandSet& demands, DistanceCache& cache) {
  int deg = graph.degree(a);
  if (deg == 0) {
    return std::numeric_limits<double>::infinity();
  }
  const auto& dist = cache.from(a);
  double score = 0.0;
  for (const Demand& d : demands) {
    int hops = dist.at(d.destination);
    if (hops == kUnreachable) {
      return std::numeric_limits<double>::infinity();
    }
    score += static_cast<double>(hops) * d.rate.bitrate_mbps;
  }
  return score / static_cast<double>(deg);
}

double group_score_cached(const std::vector<NodeId>& locations,
                          const DemandSet& demands, DistanceCache& cache) {
  double score = 0.0;
  for (const Demand& d : demands) {
    int best = kUnreachable;
    for (NodeId loc : locations) {
      best = std::min(best, cache.from(loc).at(d.destination));
    }
    if (best == kUnreachable) {
      return std::numeric_limits<double>::infinity();
    }
    score += static_cast<double>(best) * d.rate.bitrate_mbps;
  }
  return score;
}

bool has_duplicates(std::vector<NodeId> genes) {
  std::sort(genes.begin(), genes.end());
  return std::adjacent_find(genes.begin(), genes.end()) != genes.end();
}

std::vector<NodeId> random_subset(const std::vector<NodeId>& pool, int n,
                                  Rng& rng) {
  std::vector<NodeId> deck = pool;
  for (int i = 0; i < n; ++i) {
    std::size_t j = i + rng.below(deck.size() - i);
    std::swap(deck[i], deck[j]);
  }
  deck.resize(n);
  return deck;
}

}  // namespace

std::string solver_name(Solver s) {
  switch (s) {
    case Solver::heuristic:
      return "heuristic";
    case Solver::ga:
      return "ga";
    case Solver::random:
      return "random";
    case Solver::exhaustive:
      return "exhaustive";
  }
  return "unknown";
}

double score_location(const NetworkGraph& graph, NodeId a,
                      const DemandSet& demands) {
  if (!graph.candidates().count(a)) {
    throw InvalidNodeError("score_location: node " + std::to_string(a) +
                           " is not a candidate site");
  }
  DistanceCache cache(graph);
  return score_location_cached(graph, a, demands, cache);
}

double group_score(const NetworkGraph& graph,
                   const std::vector<NodeId>& locations,
                   const DemandSet& demands) {
  if (locations.empty()) {
    throw ParamError("group_score: empty location set");
  }
  DistanceCache cache(graph);
  return group_score_cached(locations, demands, cache);
}

Placement place_heuristic(const NetworkGraph& graph, const DemandSet& demands,
                          const HeuristicParams& params) {
  if (params.separation <= 0.0 || params.separation > 0.1) {
    throw ParamError("separation must lie in (0, 0.1]");
  }
  if (params.transcoder_count < 1) {
    throw ParamError("transcoder_count must be positive");
  }
  const std::vector<NodeId> candidates = sorted_candidates(graph);
  if (candidates.empty()) {
    throw ParamError("no candidate sites in graph");
  }
  const auto start = Clock::now();
  const int n =
      std::min<int>(params.transcoder_count, candidates.size());

  DistanceCache cache(graph);
  Placement placement;
  placement.solver = Solver::heuristic;
  placement.truncated =
      params.transcoder_count > static_cast<int>(candidates.size());

  NodeId first = candidates.front();
  double min_score = std::numeric_limits<double>::infinity();
  for (NodeId a : candidates) {  // ascending, so ties keep the lowest id
    double s = score_location_cached(graph, a, demands, cache);
    if (s < min_score) {
      min_score = s;
      first = a;
    }
  }
  placement.transcoders.push_back(first);

  // The separation distance persists (and decays) across placements rather
  // than resetting per transcoder.
  long sep_dist = static_cast<long>(
      std::floor(params.separation * static_cast<double>(graph.node_count())));
  for (int step = 1; step < n; ++step) {
    std::vector<NodeId> pool;
    for (;;) {
      for (NodeId a : candidates) {
        if (std::find(placement.transcoders.begin(),
                      placement.transcoders.end(),
                      a) != placement.transcoders.end()) {
          continue;
        }
        const auto& dist = cache.from(a);
        bool qualifies;
        if (params.separation_from_all) {
          qualifies = std::all_of(
              placement.transcoders.begin(), placement.transcoders.end(),
              [&](NodeId k) { return dist.at(k) > sep_dist; });
        } else {
          qualifies = std::any_of(
              placement.transcoders.begin(), placement.transcoders.end(),
              [&](NodeId k) { return dist.at(k) > sep_dist; });
        }
        if (qualifies) {
          pool.push_back(a);
        }
      }
      --sep_dist;
      if (!pool.empty()) {
        break;
      }
    }
    NodeId best = pool.front();
    double best_score = std::numeric_limits<double>::infinity();
    std::vector<NodeId> group = placement.transcoders;
    group.push_back(0);
    for (NodeId a : pool) {
      group.back() = a;
      double s = group_score_cached(group, demands, cache);
      if (s < best_score) {
        best_score = s;
        best = a;
      }
    }
    placement.transcoders.push_back(best);
  }

  placement.score = group_score_cached(placement.transcoders, demands, cache);
  placement.runtime_s = seconds_since(start);
  return placement;
}

Placement place_ga(const NetworkGraph& graph, const DemandSet& demands, int n,
                   const GaParams& params, std::optional<double> stop_score,
                   std::vector<double>* history) {
  const std::vector<NodeId> candidates = sorted_candidates(graph);
  if (n < 1 || n > static_cast<int>(candidates.size())) {
    throw ParamError("ga: n must lie in [1, |A|]");
  }
  if (params.population < 2) {
    throw ParamError("ga: population must be >= 2");
  }
  const auto start = Clock::now();
  Rng rng(params.seed);

  auto fitness = [&](const std::vector<NodeId>& genes) {
    if (params.blocking) {
      return -static_cast<double>(
          admit_demands(graph, demands, genes).admitted);
    }
    return network_load(build_routes(graph, demands, genes)).total_load;
  };

  struct Individual {
    std::vector<NodeId> genes;
    double fit = 0.0;
  };
  auto by_fitness = [](const Individual& a, const Individual& b) {
    return a.fit != b.fit ? a.fit < b.fit : a.genes < b.genes;
  };

  std::vector<Individual> pop(params.population);
  for (auto& ind : pop) {
    ind.genes = random_subset(candidates, n, rng);
    ind.fit = fitness(ind.genes);
  }
  std::sort(pop.begin(), pop.end(), by_fitness);

  auto finish = [&](const Individual& best) {
    Placement placement;
    placement.solver = Solver::ga;
    placement.transcoders = best.genes;
    placement.score = best.fit;
    placement.runtime_s = seconds_since(start);
    return placement;
  };

  if (history) {
    history->push_back(pop.front().fit);
  }
  if (stop_score && pop.front().fit <= *stop_score) {
    return finish(pop.front());
  }

  for (int gen = 0; gen < params.generations; ++gen) {
    const std::size_t survivors = pop.size() / 2;
    std::vector<Individual> next;
    next.reserve(pop.size());
    next.push_back(pop.front());  // elitism
    while (next.size() < pop.size()) {
      const auto& p1 = pop[rng.below(survivors)];
      const auto& p2 = pop[rng.below(survivors)];
      Individual child;
      child.genes = p1.genes;
      if (n >= 2 && rng.unit() < params.operator_fraction) {
        std::size_t cut = 1 + rng.below(static_cast<std::uint64_t>(n - 1));
        for (std::size_t i = cut; i < child.genes.size(); ++i) {
          child.genes[i] = p2.genes[i];
        }
      }
      // No repair step: crossover products with repeated sites are thrown
      // away and reseeded.
      if (has_duplicates(child.genes)) {
        child.genes = random_subset(candidates, n, rng);
      }
      if (rng.unit() < params.operator_fraction &&
          static_cast<int>(candidates.size()) > n) {
        std::vector<NodeId> unused;
        for (NodeId a : candidates) {
          if (std::find(child.genes.begin(), child.genes.end(), a) ==
              child.genes.end()) {
            unused.push_back(a);
          }
        }
        child.genes[rng.below(child.genes.size())] =
            unused[rng.below(unused.size())];
      }
      child.fit = fitness(child.genes);
      next.push_back(std::move(child));
    }
    pop = std::move(next);
    std::sort(pop.begin(), pop.end(), by_fitness);
    if (history) {
      history->push_back(pop.front().fit);
    }
    if (stop_score && pop.front().fit <= *stop_score) {
      break;
    }
  }
  return finish(pop.front());
}

Placement place_random(const NetworkGraph& graph, int n, std::uint64_t seed) {
  const std::vector<NodeId> candidates = sorted_candidates(graph);
  if (n < 1 || n > static_cast<int>(candidates.size())) {
    throw ParamError("random: n must lie in [1, |A|]");
  }
  const auto start = Clock::now();
  Rng rng(seed);
  Placement placement;
  placement.solver = Solver::random;
  placement.transcoders = random_subset(candidates, n, rng);
  std::sort(placement.transcoders.begin(), placement.transcoders.end());
  placement.runtime_s = seconds_since(start);
  return placement;
}

Placement place_exhaustive(const NetworkGraph& graph, const DemandSet& demands,
                           int n, std::uint64_t budget) {
  const std::vector<NodeId> candidates = sorted_candidates(graph);
  if (n < 1 || n > static_cast<int>(candidates.size())) {
    throw ParamError("exhaustive: n must lie in [1, |A|]");
  }
  // C(|A|, n), capped against the budget to avoid overflow.
  std::uint64_t combos = 1;
  for (int i = 0; i < n; ++i) {
    combos = combos * (candidates.size() - i) / (i + 1);
    if (combos > budget * 64) {
      combos = budget + 1;
      break;
    }
  }
  if (combos > budget) {
    throw BudgetExceededError("exhaustive: " + std::to_string(combos) +
                              " subsets exceed budget " +
                              std::to_string(budget));
  }
  const auto start = Clock::now();
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) {
    idx[i] = i;
  }
  Placement best;
  best.solver = Solver::exhaustive;
  best.score = std::numeric_limits<double>::infinity();
  for (;;) {
    std::vector<NodeId> subset(n);
    for (int i = 0; i < n; ++i) {
      subset[i] = candidates[idx[i]];
    }
    double load = placement_load(graph, demands, subset);
    if (load < best.score) {
      best.score = load;
      best.transcoders = subset;
    }
    int i = n - 1;
    while (i >= 0 &&
           idx[i] == static_cast<int>(candidates.size()) - n + i) {
      --i;
    }
    if (i < 0) {
      break;
    }
    ++idx[i];
    for (int j = i + 1; j < n; ++j) {
      idx[j] = idx[j - 1] + 1;
    }
  }
  best.runtime_s = seconds_since(start);
  return best;
}

double placement_load(const NetworkGraph& graph, const DemandSet& demands,
                      const std::vector<NodeId>& placement) {
  return network_load(build_routes(graph, demands, placement)).total_load;
}

}  // namespace tmig
