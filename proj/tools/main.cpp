// Command-line harness: placement experiments, migration sweeps, and CSV
// export over scenario files or built-in presets.
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tmig/csv.hpp"
#include "tmig/errors.hpp"
#include "tmig/placement.hpp"
#include "tmig/routing.hpp"
#include "tmig/scenario.hpp"
#include "tmig/simulation.hpp"

namespace {

using namespace tmig;

struct CommonOpts {
  std::string scenario_path;
  std::string preset;
  std::string out_path;
  bool timings = false;  // real runtimes in CSV (non-deterministic bytes)
};

Scenario tiny_preset() {
  // Dumbbell: source 0 feeds clients 5 and 6 through candidates {2, 3}.
  Scenario sc;
  sc.name = "tiny";
  for (int id = 0; id <= 6; ++id) {
    sc.graph.add_node(id);
  }
  sc.graph.add_role(0, Role::source);
  sc.graph.add_role(2, Role::candidate);
  sc.graph.add_role(3, Role::candidate);
  sc.graph.add_role(5, Role::client);
  sc.graph.add_role(6, Role::client);
  sc.graph.add_edge(0, 1, 500);
  sc.graph.add_edge(1, 2, 500);
  sc.graph.add_edge(2, 3, 500);
  sc.graph.add_edge(3, 4, 500);
  sc.graph.add_edge(4, 5, 500);
  sc.graph.add_edge(4, 6, 500);
  sc.codecs = default_codecs();
  sc.demands.push_back({0, 5, sc.codecs[0], "c0"});
  sc.demands.push_back({0, 6, sc.codecs[0], "c0"});
  sc.solver.n = 1;
  return sc;
}

Scenario generated_preset(int nodes, std::uint64_t seed) {
  GeneratorSpec spec;
  spec.nodes = nodes;
  spec.edge_probability = std::max(0.02, 8.0 / nodes);
  spec.demand_count = nodes / 4;
  spec.seed = seed;
  Scenario sc = generate_scenario(spec, "gen-" + std::to_string(nodes));
  sc.solver.n = 3;
  return sc;
}

Scenario resolve_scenario(const CommonOpts& opts, std::uint64_t seed) {
  if (!opts.scenario_path.empty()) {
    return load_scenario(opts.scenario_path);
  }
  if (opts.preset == "tiny") return tiny_preset();
  if (opts.preset == "gen-100") return generated_preset(100, seed);
  if (opts.preset == "gen-200") return generated_preset(200, seed);
  if (opts.preset == "gen-300") return generated_preset(300, seed);
  if (opts.preset.empty()) {
    throw ParseError("give either --scenario <file> or --preset <name>");
  }
  throw ParseError("unknown preset '" + opts.preset +
                   "' (tiny, gen-100, gen-200, gen-300)");
}

void write_out(const CommonOpts& opts, const std::string& csv) {
  if (opts.out_path.empty()) {
    return;
  }
  std::ofstream out(opts.out_path, std::ios::binary);
  if (!out) {
    throw ParseError("cannot open output file '" + opts.out_path + "'");
  }
  out << csv;
}

std::string placement_row(const Scenario& sc, const Placement& p,
                          double lambda, std::uint64_t seed, bool timings) {
  LoadReport load = sc.blocking
                        ? admit_demands(sc.graph, sc.demands, p.transcoders)
                        : network_load(
                              build_routes(sc.graph, sc.demands, p.transcoders));
  std::ostringstream row;
  row << sc.name << "," << solver_name(p.solver) << ","
      << p.transcoders.size() << "," << format_double(lambda) << "," << seed
      << "," << format_double(p.score) << "," << format_double(load.total_load)
      << "," << load.admitted << ","
      << (timings ? format_double(p.runtime_s) : "0") << "\n";
  return row.str();
}

Placement run_solver(const Scenario& sc, Solver solver, double lambda, int n,
                     std::uint64_t seed, std::uint64_t budget) {
  switch (solver) {
    case Solver::heuristic: {
      HeuristicParams params{n, lambda, sc.solver.separation_from_all};
      return place_heuristic(sc.graph, sc.demands, params);
    }
    case Solver::ga: {
      GaParams params = sc.solver.ga_params(sc.blocking);
      params.seed = seed;
      return place_ga(sc.graph, sc.demands, n, params);
    }
    case Solver::random: {
      Placement p = place_random(sc.graph, n, seed);
      p.score = placement_load(sc.graph, sc.demands, p.transcoders);
      return p;
    }
    case Solver::exhaustive:
      return place_exhaustive(sc.graph, sc.demands, n, budget);
  }
  throw ParamError("bad solver");
}

int cmd_place(const CommonOpts& opts, const std::string& solver_arg,
              std::optional<double> lambda_arg, std::optional<int> n_arg,
              std::uint64_t seed) {
  Scenario sc = resolve_scenario(opts, seed);
  Solver solver = sc.solver.solver;
  if (!solver_arg.empty()) {
    if (solver_arg == "heuristic") solver = Solver::heuristic;
    else if (solver_arg == "ga") solver = Solver::ga;
    else if (solver_arg == "random") solver = Solver::random;
    else if (solver_arg == "exhaustive") solver = Solver::exhaustive;
    else throw ParseError("unknown solver '" + solver_arg + "'");
  }
  double lambda = lambda_arg.value_or(sc.solver.lambda);
  int n = n_arg.value_or(sc.solver.n);

  Placement p = run_solver(sc, solver, lambda, n, seed, sc.solver.budget);
  std::cout << "scenario: " << sc.name << "\nsolver: " << solver_name(solver)
            << "\nseed: " << seed << "\nplacement:";
  for (NodeId id : p.transcoders) {
    std::cout << " " << id;
  }
  std::cout << "\nscore: " << format_double(p.score)
            << "\nload: " << format_double(placement_load(sc.graph, sc.demands,
                                                          p.transcoders))
            << "\nruntime_s: " << format_double(p.runtime_s) << "\n";
  std::string csv = "scenario,solver,n,lambda,seed,score,load,admitted,runtime_s\n" +
                    placement_row(sc, p, lambda, seed, opts.timings);
  write_out(opts, csv);
  return 0;
}

int cmd_compare(const CommonOpts& opts, std::optional<int> n_arg,
                std::uint64_t seed, int reps) {
  std::ostringstream csv;
  csv << "scenario,solver,n,lambda,seed,score,load,admitted,runtime_s\n";
  for (int rep = 0; rep < reps; ++rep) {
    std::uint64_t rep_seed = seed + rep;
    Scenario sc = resolve_scenario(opts, rep_seed);
    int n = n_arg.value_or(sc.solver.n);

    Placement heur = run_solver(sc, Solver::heuristic, sc.solver.lambda, n,
                                rep_seed, sc.solver.budget);
    GaParams ga_params = sc.solver.ga_params(sc.blocking);
    ga_params.seed = rep_seed;
    // Fairness rule: the GA races the heuristic's score and stops there.
    Placement ga = place_ga(sc.graph, sc.demands, n, ga_params, heur.score);
    Placement rnd = run_solver(sc, Solver::random, sc.solver.lambda, n,
                               rep_seed, sc.solver.budget);

    csv << placement_row(sc, heur, sc.solver.lambda, rep_seed, opts.timings)
        << placement_row(sc, ga, sc.solver.lambda, rep_seed, opts.timings)
        << placement_row(sc, rnd, sc.solver.lambda, rep_seed, opts.timings);
    std::cout << "seed " << rep_seed << ": heuristic score "
              << format_double(heur.score) << " (" << format_double(heur.runtime_s)
              << " s), ga-to-stop score " << format_double(ga.score) << " ("
              << format_double(ga.runtime_s) << " s)\n";
  }
  write_out(opts, csv.str());
  return 0;
}

std::string sweep_row(const sim::SweepCell& cell) {
  std::ostringstream row;
  row << cell.type << "," << format_double(cell.mean) << ","
      << format_double(cell.ci95) << "," << format_double(cell.min) << ","
      << format_double(cell.max) << "\n";
  return row.str();
}

sim::SimConfig sim_config_for(const CommonOpts& opts, std::uint64_t seed,
                              std::optional<double> rtt) {
  sim::SimConfig cfg;
  if (!opts.scenario_path.empty()) {
    cfg = load_scenario(opts.scenario_path).sim;
  }
  if (rtt) {
    cfg.link_rtt_ms = *rtt;
  }
  cfg.arp_residual_seed = seed;
  return cfg;
}

int cmd_migrate(const CommonOpts& opts, const std::string& type_arg,
                std::optional<double> rtt, int reps, std::uint64_t seed,
                const std::string& deltas_path) {
  sim::SimConfig cfg = sim_config_for(opts, seed, rtt);
  sim::MigrationType type = sim::migration_type_from_name(type_arg);
  sim::SweepCell cell = sim::sweep_cell(type, cfg, reps, seed);
  std::cout << "type: " << cell.type << "\nreps: " << cell.reps
            << "\nmean_gap_s: " << format_double(cell.mean)
            << "\nci95: " << format_double(cell.ci95)
            << "\nmin: " << format_double(cell.min)
            << "\nmax: " << format_double(cell.max) << "\n";
  write_out(opts, "type,mean,ci95,min,max\n" + sweep_row(cell));

  if (!deltas_path.empty()) {
    // Packet-delta series of the first repetition (per-packet spacing at
    // the client around the switchover).
    sim::SimConfig first = cfg;
    auto [trace, gap] = sim::run_migration(type, first);
    std::ofstream out(deltas_path, std::ios::binary);
    if (!out) {
      throw ParseError("cannot open output file '" + deltas_path + "'");
    }
    out << "t_us,delta_us\n";
    for (std::size_t i = 1; i < trace.client_log.size(); ++i) {
      out << trace.client_log[i].t_us << ","
          << trace.client_log[i].t_us - trace.client_log[i - 1].t_us << "\n";
    }
  }
  return 0;
}

int cmd_sweep(const CommonOpts& opts, std::optional<double> rtt, int reps,
              std::uint64_t seed) {
  sim::SimConfig cfg = sim_config_for(opts, seed, rtt);
  std::ostringstream csv;
  csv << "type,mean,ci95,min,max\n";
  for (sim::MigrationType type :
       {sim::MigrationType::of, sim::MigrationType::arp_flush_of,
        sim::MigrationType::arp_flush_standard, sim::MigrationType::standard}) {
    sim::SweepCell cell = sim::sweep_cell(type, cfg, reps, seed);
    csv << sweep_row(cell);
    std::cout << cell.type << ": mean " << format_double(cell.mean)
              << " s, ci95 " << format_double(cell.ci95) << ", min "
              << format_double(cell.min) << ", max " << format_double(cell.max)
              << "\n";
  }
  write_out(opts, csv.str());
  return 0;
}

int cmd_benefit(const CommonOpts& opts, std::uint64_t seed) {
  Scenario sc = resolve_scenario(opts, seed);
  Placement p = place_heuristic(sc.graph, sc.demands,
                                sc.solver.heuristic_params());
  double transcoded = placement_load(sc.graph, sc.demands, p.transcoders);
  double direct =
      network_load(build_direct_routes(sc.graph, sc.demands)).total_load;
  std::cout << "scenario: " << sc.name << "\ndirect_load: "
            << format_double(direct)
            << "\ntranscoded_load: " << format_double(transcoded)
            << "\nratio: " << format_double(direct > 0 ? transcoded / direct : 0)
            << "\n";
  std::ostringstream csv;
  csv << "scenario,direct_load,transcoded_load,ratio\n"
      << sc.name << "," << format_double(direct) << ","
      << format_double(transcoded) << ","
      << format_double(direct > 0 ? transcoded / direct : 0) << "\n";
  write_out(opts, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transcoder placement and migration experiment harness"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string solver_arg;
  std::string type_arg = "of";
  std::string deltas_path;
  std::optional<double> lambda_arg;
  std::optional<int> n_arg;
  std::optional<double> rtt;
  std::uint64_t seed = 1;
  int reps = 1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", opts.scenario_path, "Scenario JSON file");
    cmd->add_option("--preset", opts.preset,
                    "Built-in scenario: tiny, gen-100, gen-200, gen-300");
    cmd->add_option("--out", opts.out_path, "CSV output path");
    cmd->add_option("--seed", seed, "RNG seed");
    cmd->add_flag("--timings", opts.timings,
                  "Write measured runtimes into the CSV (bytes then vary "
                  "run to run)");
  };

  CLI::App* place = app.add_subcommand("place", "Run one placement solver");
  add_common(place);
  place->add_option("--solver", solver_arg,
                    "heuristic | ga | random | exhaustive");
  place->add_option("--lambda", lambda_arg, "Separation constant (0, 0.1]");
  place->add_option("--n", n_arg, "Transcoder count");

  CLI::App* compare =
      app.add_subcommand("compare", "Heuristic vs GA-to-stop vs random");
  add_common(compare);
  compare->add_option("--n", n_arg, "Transcoder count");
  compare->add_option("--reps", reps, "Seeded repetitions");

  CLI::App* migrate = app.add_subcommand("migrate", "Migration gap sweep");
  add_common(migrate);
  migrate->add_option("--type", type_arg,
                      "of | standard | arp-flush-of | arp-flush-standard");
  migrate->add_option("--rtt", rtt, "Inter-switch round trip, ms");
  migrate->add_option("--reps", reps, "Seeded repetitions");
  migrate->add_option("--deltas", deltas_path,
                      "Write per-packet delta series CSV here");

  CLI::App* sweep =
      app.add_subcommand("sweep", "All four migration types at once");
  add_common(sweep);
  sweep->add_option("--rtt", rtt, "Inter-switch round trip, ms");
  sweep->add_option("--reps", reps, "Seeded repetitions");

  CLI::App* benefit =
      app.add_subcommand("benefit", "Direct vs transcoded load");
  add_common(benefit);

  CLI11_PARSE(app, argc, argv);

  try {
    if (place->parsed()) {
      return cmd_place(opts, solver_arg, lambda_arg, n_arg, seed);
    }
    if (compare->parsed()) {
      return cmd_compare(opts, n_arg, seed, reps);
    }
    if (migrate->parsed()) {
      return cmd_migrate(opts, type_arg, rtt, reps, seed, deltas_path);
    }
    if (sweep->parsed()) {
      return cmd_sweep(opts, rtt, reps, seed);
    }
    if (benefit->parsed()) {
      return cmd_benefit(opts, seed);
    }
  } catch (const tmig::BudgetExceededError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const tmig::InfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const tmig::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const tmig::ParamError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const tmig::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
