#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "tmig/flowtable.hpp"

namespace tmig::sim {

struct SimConfig {
  double link_rtt_ms = 125.0;   // inter-switch round trip; one-way = rtt/2
  double packet_rate = 100.0;   // video packets per second
  double arp_timeout_s = 30.0;  // server cache entry lifetime
  double arp_refresh_s = 2.0;   // server re-ARP period inside the handover window
  std::uint64_t arp_residual_seed = 1;
  double wait1_s = 1.0;  // port settle time before the duplication flows
  double wait2_s = 5.0;  // parallel-transcode window before switchover
  double transcoder_startup_s = 2.8;  // input buffering before output starts
  double sim_duration_s = 20.0;
  double migration_start_s = 4.1;
};

enum class MigrationType { of, standard, arp_flush_of, arp_flush_standard };

std::string migration_type_name(MigrationType type);
MigrationType migration_type_from_name(const std::string& name);

struct TraceEvent {
  std::int64_t t_us = 0;
  std::string kind;
  std::string where;
  std::uint64_t copy = 0;  // packet copy id, 0 when not packet-related
  std::string detail;
};

struct ClientRx {
  std::int64_t t_us = 0;
  fabric::Mac src_mac;
  std::uint64_t seq = 0;
};

struct MigrationTrace {
  std::vector<TraceEvent> events;  // strictly non-decreasing timestamps
  std::vector<ClientRx> client_log;
  fabric::Mac t1_mac;
  fabric::Mac t2_mac;
  std::int64_t switchover_t_us = -1;
  std::int64_t duration_us = 0;
  bool unsafe_switchover = false;  // wait2 < transcoder_startup
  bool arp_mapped_t2_before_switchover = false;
  std::vector<std::string> final_flows_sw1;  // formatted rules at end of run
  std::vector<std::string> final_flows_sw2;
};

struct GapReport {
  double gap_s = 0.0;  // first packet from T2's MAC minus last from T1's
  int overlap_packets = 0;
  double max_interpacket_delta_s = 0.0;
};

/// Steady-state stream, no migration: server -> switch1 -> transcoder 1 ->
/// link -> switch2 -> client.
MigrationTrace run_stream(const SimConfig& config);

/// Five-stage flow-assisted migration. flush_arp additionally wipes the
/// server's ARP cache when the handover flows go in.
std::pair<MigrationTrace, GapReport> run_of_migration(const SimConfig& config,
                                                      bool flush_arp = false);

/// Kill-and-restart migration with no flow assistance; the stale server ARP
/// entry (or an explicit flush) governs the outage.
std::pair<MigrationTrace, GapReport> run_standard_migration(
    const SimConfig& config, bool flush_arp);

std::pair<MigrationTrace, GapReport> run_migration(MigrationType type,
                                                   const SimConfig& config);

/// Client-side switchover gap. Throws IncompleteMigrationError unless the
/// client log holds packets from both transcoder MACs.
GapReport measure_gap(const MigrationTrace& trace);

struct SweepCell {
  std::string type;
  int reps = 0;
  double mean = 0.0;
  double ci95 = 0.0;  // normal approximation
  double min = 0.0;
  double max = 0.0;
  bool degenerate_ci = false;  // single repetition
};

/// Runs `reps` migrations with residual seeds seed_base, seed_base+1, ...
SweepCell sweep_cell(MigrationType type, const SimConfig& base, int reps,
                     std::uint64_t seed_base);

void write_trace_jsonl(const MigrationTrace& trace, std::ostream& out);
void write_client_log_csv(const MigrationTrace& trace, std::ostream& out);

}  // namespace tmig::sim
