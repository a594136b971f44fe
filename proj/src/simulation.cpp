#include "tmig/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <queue>
#include <sstream>

#include "tmig/errors.hpp"
#include "tmig/rng.hpp"

namespace tmig::sim {

namespace {

using fabric::Emission;
using fabric::FlowModCommand;
using fabric::kBroadcastMac;
using fabric::kEthArp;
using fabric::kEthIpv4;
using fabric::PacketHeader;
using fabric::PortId;
using fabric::SwitchModel;

constexpr const char* kServerMac = "02:00:00:00:00:01";
constexpr const char* kClientMac = "02:00:00:00:00:02";
constexpr const char* kT1Mac = "02:00:00:00:00:11";
constexpr const char* kT2Mac = "02:00:00:00:00:12";
constexpr const char* kServerIp = "10.0.0.1";
// Both transcoders answer on this IP; they differ only in MAC.
constexpr const char* kTranscoderIp = "10.0.0.2";
constexpr const char* kClientIp = "10.0.0.3";

constexpr const char* kServerPort = "serverPORT";
constexpr const char* kT1Port = "transcoder1PORT";
constexpr const char* kSw1LinkPort = "sw1LinkPORT";
constexpr const char* kSw2LinkPort = "sw2LinkPORT";
constexpr const char* kT2Port = "transcoder2PORT";
constexpr const char* kClientPort = "clientPORT";

constexpr std::int64_t kArpRetryUs = 1000000;  // re-ask while unresolved

fabric::SymbolBindings default_bindings() {
  return {
      {"sw1Name", "sw1"},
      {"sw2Name", "sw2"},
      {"serverIP", kServerIp},
      {"transcoderIP", kTranscoderIp},
      {"clientIP", kClientIp},
      {"transcoder1MAC", kT1Mac},
      {"transcoder2MAC", kT2Mac},
  };
}

std::int64_t to_us(double seconds) {
  return static_cast<std::int64_t>(std::llround(seconds * 1e6));
}

void validate(const SimConfig& c) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) {
      throw ParamError(std::string("sim config: ") + name +
                       " must be positive");
    }
  };
  positive(c.packet_rate, "packet_rate");
  positive(c.arp_timeout_s, "arp_timeout");
  positive(c.arp_refresh_s, "arp_refresh");
  positive(c.wait1_s, "wait1");
  positive(c.wait2_s, "wait2");
  positive(c.transcoder_startup_s, "transcoder_startup");
  positive(c.sim_duration_s, "sim_duration");
  positive(c.migration_start_s, "migration_start");
  if (c.link_rtt_ms < 0.0) {
    throw ParamError("sim config: link_rtt must be non-negative");
  }
}

enum class RunMode { stream, of, standard };

class Sim {
 public:
  Sim(const SimConfig& cfg, RunMode mode, bool flush_arp)
      : cfg_(cfg),
        mode_(mode),
        flush_arp_(flush_arp),
        sw1_("sw1"),
        sw2_("sw2") {
    validate(cfg);
    one_way_us_ = to_us(cfg.link_rtt_ms / 1000.0 / 2.0);
    interval_us_ = std::max<std::int64_t>(1, to_us(1.0 / cfg.packet_rate));
    startup_us_ = to_us(cfg.transcoder_startup_s);
    mig_start_us_ = to_us(cfg.migration_start_s);
    stage3_us_ = mig_start_us_ + to_us(cfg.wait1_s);
    stage5_us_ = stage3_us_ + to_us(cfg.wait2_s);

    trace_.t1_mac = kT1Mac;
    trace_.t2_mac = kT2Mac;
    trace_.unsafe_switchover =
        mode_ == RunMode::of && cfg.wait2_s < cfg.transcoder_startup_s;

    sw1_.add_port(kServerPort);
    sw1_.add_port(kT1Port);
    sw1_.add_port(kSw1LinkPort);
    sw2_.add_port(kSw2LinkPort);
    sw2_.add_port(kClientPort);
    // With flow assistance the new transcoder's port starts disabled and is
    // brought up as the first migration step; without it there is no port
    // control at all.
    sw2_.add_port(kT2Port, mode_ == RunMode::standard);

    t1_.active = true;
    t1_.state = TransState::streaming;  // steady state precondition
    t2_.active = false;

    arp_entry_ = ArpEntry{kT1Mac, to_us(cfg.arp_timeout_s)};

    duration_us_ = to_us(cfg.sim_duration_s);
    if (mode_ == RunMode::of) {
      duration_us_ = std::max(duration_us_, stage5_us_ + to_us(3.0));
    } else if (mode_ == RunMode::standard) {
      double residual_s = 0.0;
      if (!flush_arp_) {
        Rng rng(cfg.arp_residual_seed);
        residual_s = rng.uniform(0.0, cfg.arp_timeout_s);
      }
      residual_us_ = to_us(residual_s);
      duration_us_ = std::max(
          duration_us_, mig_start_us_ + residual_us_ + startup_us_ +
                            to_us(4.0) + 4 * one_way_us_);
    }
    trace_.duration_us = duration_us_;
  }

  MigrationTrace run() {
    schedule(0, [this] { announce("server", sw1_, kServerPort, kServerMac,
                                  kServerIp); });
    schedule(0, [this] { announce("client", sw2_, kClientPort, kClientMac,
                                  kClientIp); });
    for (std::int64_t t = 0; t < duration_us_; t += interval_us_) {
      schedule(t, [this] { server_tick(); });
    }
    if (mode_ == RunMode::of) {
      schedule_of_migration();
    } else if (mode_ == RunMode::standard) {
      schedule_standard_migration();
    }

    while (!queue_.empty()) {
      Event ev = std::move(const_cast<Event&>(queue_.top()));
      queue_.pop();
      now_ = ev.t;
      ev.fn();
    }

    auto dump_rules = [](const SwitchModel& sw) {
      std::vector<std::string> out;
      for (const auto& rule : sw.table().rules()) {
        FlowModCommand cmd;
        cmd.switch_name = sw.name();
        cmd.rule = rule;
        out.push_back(fabric::format_flow_mod(cmd));
      }
      return out;
    };
    trace_.final_flows_sw1 = dump_rules(sw1_);
    trace_.final_flows_sw2 = dump_rules(sw2_);
    return std::move(trace_);
  }

 private:
  struct Event {
    std::int64_t t = 0;
    std::uint64_t order = 0;
    std::function<void()> fn;
  };
  struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
      return a.t != b.t ? a.t > b.t : a.order > b.order;
    }
  };

  enum class TransState { idle, buffering, streaming };
  struct Transcoder {
    bool active = false;
    TransState state = TransState::idle;
    std::int64_t ready_at = 0;
  };
  struct ArpEntry {
    fabric::Mac mac;
    std::int64_t expiry_us = 0;
  };

  void schedule(std::int64_t t, std::function<void()> fn) {
    queue_.push(Event{t, next_order_++, std::move(fn)});
  }

  void log(std::string kind, std::string where, std::uint64_t copy,
           std::string detail) {
    trace_.events.push_back(
        TraceEvent{now_, std::move(kind), std::move(where), copy,
                   std::move(detail)});
  }

  std::uint64_t new_copy() { return ++copy_counter_; }

  // --- packet plumbing -----------------------------------------------------

  void send_from(const std::string& who, SwitchModel& sw, const PortId& port,
                 PacketHeader pkt) {
    std::uint64_t copy = new_copy();
    std::ostringstream detail;
    detail << (pkt.eth_type == kEthArp ? "arp" : "video")
           << " seq=" << pkt.seq << " dst_mac=" << pkt.dst_mac
           << " dst_ip=" << pkt.dst_ip;
    log("ep_tx", who, copy, detail.str());
    pkt.in_port = port;
    SwitchModel* swp = &sw;
    schedule(now_, [this, swp, pkt, copy] { switch_ingress(*swp, pkt, copy); });
  }

  void switch_ingress(SwitchModel& sw, const PacketHeader& pkt,
                      std::uint64_t copy) {
    auto result = sw.handle(pkt);
    if (result.discarded_ingress) {
      log("discard_port", sw.name() + ":" + pkt.in_port, copy, "");
      return;
    }
    for (const auto& warning : result.warnings) {
      log("warn", sw.name(), copy, warning);
    }
    std::ostringstream detail;
    detail << "in=" << pkt.in_port << " out=" << result.emissions.size()
           << (result.matched ? " matched" : " default")
           << (result.dropped_by_rule ? " dropped" : "");
    log("sw_handle", sw.name(), copy, detail.str());
    for (const Emission& emission : result.emissions) {
      std::uint64_t out_copy = new_copy();
      log("sw_out", sw.name() + ":" + emission.port, out_copy,
          "from=" + std::to_string(copy));
      route(sw, emission.port, emission.pkt, out_copy);
    }
  }

  void route(SwitchModel& sw, const PortId& port, PacketHeader pkt,
             std::uint64_t copy) {
    if (&sw == &sw1_ && port == kSw1LinkPort) {
      pkt.in_port = kSw2LinkPort;
      schedule(now_ + one_way_us_,
               [this, pkt, copy] { switch_ingress(sw2_, pkt, copy); });
      return;
    }
    if (&sw == &sw2_ && port == kSw2LinkPort) {
      pkt.in_port = kSw1LinkPort;
      schedule(now_ + one_way_us_,
               [this, pkt, copy] { switch_ingress(sw1_, pkt, copy); });
      return;
    }
    std::string endpoint;
    if (port == kServerPort) endpoint = "server";
    else if (port == kT1Port) endpoint = "t1";
    else if (port == kT2Port) endpoint = "t2";
    else if (port == kClientPort) endpoint = "client";
    schedule(now_, [this, endpoint, pkt, copy] {
      endpoint_receive(endpoint, pkt, copy);
    });
  }

  // --- endpoints -----------------------------------------------------------

  void announce(const std::string& who, SwitchModel& sw, const PortId& port,
                const fabric::Mac& mac, const fabric::Ipv4& ip) {
    PacketHeader pkt;
    pkt.eth_type = kEthArp;
    pkt.src_mac = mac;
    pkt.dst_mac = kBroadcastMac;
    pkt.src_ip = ip;
    pkt.dst_ip = ip;  // gratuitous: seeds MAC learning only
    send_from(who, sw, port, pkt);
  }

  void endpoint_receive(const std::string& who, const PacketHeader& pkt,
                        std::uint64_t copy) {
    if (who == "server") {
      server_receive(pkt, copy);
    } else if (who == "t1") {
      transcoder_receive("t1", t1_, sw1_, kT1Port, kT1Mac, pkt, copy);
    } else if (who == "t2") {
      transcoder_receive("t2", t2_, sw2_, kT2Port, kT2Mac, pkt, copy);
    } else if (who == "client") {
      client_receive(pkt, copy);
    }
  }

  void server_receive(const PacketHeader& pkt, std::uint64_t copy) {
    if (pkt.eth_type == kEthArp && pkt.dst_mac == kServerMac &&
        pkt.src_ip == kTranscoderIp) {
      // ARP reply for the transcoder IP.
      arp_entry_ = ArpEntry{pkt.src_mac, now_ + to_us(cfg_.arp_timeout_s)};
      arp_pending_ = false;
      log("deliver", "server", copy,
          std::string("arp reply ") + kTranscoderIp + " -> " + pkt.src_mac);
      return;
    }
    if (pkt.eth_type == kEthArp && pkt.dst_mac == kBroadcastMac &&
        pkt.dst_ip == kServerIp && pkt.src_ip != kServerIp) {
      log("deliver", "server", copy, "arp request");
      PacketHeader reply;
      reply.eth_type = kEthArp;
      reply.src_mac = kServerMac;
      reply.dst_mac = pkt.src_mac;
      reply.src_ip = kServerIp;
      reply.dst_ip = pkt.src_ip;
      send_from("server", sw1_, kServerPort, reply);
      return;
    }
    log("ignored", "server", copy, "");
  }

  void transcoder_receive(const std::string& who, Transcoder& trans,
                          SwitchModel& sw, const PortId& port,
                          const fabric::Mac& mac, const PacketHeader& pkt,
                          std::uint64_t copy) {
    if (!trans.active) {
      log("ignored", who, copy, "inactive");
      return;
    }
    if (pkt.eth_type == kEthArp && pkt.dst_ip == kTranscoderIp &&
        pkt.src_ip != kTranscoderIp) {
      log("deliver", who, copy, "arp request");
      PacketHeader reply;
      reply.eth_type = kEthArp;
      reply.src_mac = mac;
      reply.dst_mac = pkt.src_mac;
      reply.src_ip = kTranscoderIp;
      reply.dst_ip = pkt.src_ip;
      send_from(who, sw, port, reply);
      return;
    }
    if (pkt.eth_type == kEthIpv4 && pkt.dst_ip == kTranscoderIp) {
      log("deliver", who, copy, "video seq=" + std::to_string(pkt.seq));
      feed(who, trans, sw, port, mac, pkt);
      return;
    }
    log("ignored", who, copy, "");
  }

  void feed(const std::string& who, Transcoder& trans, SwitchModel& sw,
            const PortId& port, const fabric::Mac& mac,
            const PacketHeader& in) {
    if (trans.state == TransState::idle) {
      trans.state = TransState::buffering;
      trans.ready_at = now_ + startup_us_;
      log("state", who, 0, "buffering");
    }
    if (trans.state == TransState::buffering) {
      if (now_ < trans.ready_at) {
        return;  // consumed while the receive buffer fills
      }
      trans.state = TransState::streaming;
      log("state", who, 0, "streaming");
    }
    // 1:1 transcode: one output packet per input packet, same sequence.
    PacketHeader out;
    out.eth_type = kEthIpv4;
    out.src_mac = mac;
    out.dst_mac = kClientMac;  // client binding is static scenario data
    out.src_ip = kTranscoderIp;
    out.dst_ip = kClientIp;
    out.seq = in.seq;
    out.stream_id = in.stream_id;
    send_from(who, sw, port, out);
  }

  void client_receive(const PacketHeader& pkt, std::uint64_t copy) {
    if (pkt.eth_type == kEthIpv4 && pkt.dst_ip == kClientIp) {
      log("deliver", "client", copy,
          "video seq=" + std::to_string(pkt.seq) + " src=" + pkt.src_mac);
      trace_.client_log.push_back(ClientRx{now_, pkt.src_mac, pkt.seq});
      return;
    }
    if (pkt.eth_type == kEthArp && pkt.dst_mac == kBroadcastMac &&
        pkt.dst_ip == kClientIp && pkt.src_ip != kClientIp) {
      log("deliver", "client", copy, "arp request");
      PacketHeader reply;
      reply.eth_type = kEthArp;
      reply.src_mac = kClientMac;
      reply.dst_mac = pkt.src_mac;
      reply.src_ip = kClientIp;
      reply.dst_ip = pkt.src_ip;
      send_from("client", sw2_, kClientPort, reply);
      return;
    }
    log("ignored", "client", copy, "");
  }

  // --- server stream -------------------------------------------------------

  bool arp_valid() const {
    return arp_entry_.has_value() && now_ < arp_entry_->expiry_us;
  }

  void send_arp_request() {
    PacketHeader req;
    req.eth_type = kEthArp;
    req.src_mac = kServerMac;
    req.dst_mac = kBroadcastMac;
    req.src_ip = kServerIp;
    req.dst_ip = kTranscoderIp;
    send_from("server", sw1_, kServerPort, req);
    arp_pending_ = true;
    arp_last_request_us_ = now_;
  }

  void server_tick() {
    if (!arp_valid()) {
      log("tick_unresolved", "server", 0, "seq=" + std::to_string(next_seq_));
      if (!arp_pending_ || now_ - arp_last_request_us_ >= kArpRetryUs) {
        send_arp_request();
      }
      return;
    }
    PacketHeader pkt;
    pkt.eth_type = kEthIpv4;
    pkt.src_mac = kServerMac;
    pkt.dst_mac = arp_entry_->mac;
    pkt.src_ip = kServerIp;
    pkt.dst_ip = kTranscoderIp;
    pkt.seq = next_seq_++;
    pkt.stream_id = "uhd-main";
    send_from("server", sw1_, kServerPort, pkt);
  }

  // --- migration control ---------------------------------------------------

  void apply_cmd(const FlowModCommand& cmd) {
    SwitchModel& sw = cmd.switch_name == "sw1" ? sw1_ : sw2_;
    if (cmd.kind == FlowModCommand::Kind::add_flow) {
      sw.table().install(cmd.rule);
      log("flow_install", sw.name(), 0, fabric::format_flow_mod(cmd));
    } else {
      std::size_t removed = sw.table().delete_by_cookie(cmd.cookie, cmd.mask);
      log("flow_delete", sw.name(), 0,
          fabric::format_flow_mod(cmd) + " removed=" +
              std::to_string(removed));
    }
  }

  void schedule_of_migration() {
    auto cmds = fabric::parse_flow_script(fabric::kMigrationFlowScript,
                                          default_bindings());
    // Script order: [0..5] handover installs, [6] T2->client, [7] del sw2
    // window, [8] server->link, [9] del sw1 window.
    schedule(mig_start_us_, [this] {
      t2_.active = true;
      log("state", "t2", 0, "enabled");
      sw2_.set_port(kT2Port, true);
      log("port_set", "sw2:" + std::string(kT2Port), 0, "enabled");
    });
    schedule(stage3_us_, [this, cmds] {
      for (int i = 0; i < 6; ++i) {
        apply_cmd(cmds[i]);
      }
      if (flush_arp_) {
        arp_entry_.reset();
        arp_pending_ = false;
        log("arp_flush", "server", 0, "");
      }
    });
    // The server refreshes its transcoder mapping inside the parallel
    // window; the handover flows steer those requests to transcoder 2.
    std::int64_t refresh_us = to_us(cfg_.arp_refresh_s);
    for (std::int64_t t = stage3_us_ + refresh_us; t < stage5_us_;
         t += refresh_us) {
      schedule(t, [this] {
        log("arp_refresh", "server", 0, "");
        send_arp_request();
      });
    }
    schedule(stage5_us_, [this, cmds] {
      trace_.switchover_t_us = now_;
      trace_.arp_mapped_t2_before_switchover =
          arp_valid() && arp_entry_->mac == kT2Mac;
      t1_.active = false;
      log("state", "t1", 0, "disabled");
      sw1_.set_port(kT1Port, false);
      log("port_set", "sw1:" + std::string(kT1Port), 0, "disabled");
      apply_cmd(cmds[8]);  // server stream straight to the link
      apply_cmd(cmds[9]);  // drop the switch-1 handover window
      apply_cmd(cmds[6]);  // unmute transcoder 2
      apply_cmd(cmds[7]);  // drop the switch-2 handover window
    });
  }

  void schedule_standard_migration() {
    schedule(mig_start_us_, [this] {
      trace_.switchover_t_us = now_;
      t1_.active = false;
      log("state", "t1", 0, "killed");
      t2_.active = true;
      log("state", "t2", 0, "started");
      if (flush_arp_) {
        arp_entry_.reset();
        arp_pending_ = false;
        log("arp_flush", "server", 0, "");
      } else if (arp_entry_) {
        // The stale entry keeps being used until its residual lifetime runs
        // out; only then does the server ask again.
        arp_entry_->expiry_us = now_ + residual_us_;
        log("arp_residual", "server", 0,
            std::to_string(residual_us_) + "us");
      }
    });
  }

  const SimConfig& cfg_;
  RunMode mode_;
  bool flush_arp_;

  SwitchModel sw1_;
  SwitchModel sw2_;
  Transcoder t1_;
  Transcoder t2_;

  std::optional<ArpEntry> arp_entry_;
  bool arp_pending_ = false;
  std::int64_t arp_last_request_us_ = 0;
  std::uint64_t next_seq_ = 1;

  std::int64_t one_way_us_ = 0;
  std::int64_t interval_us_ = 0;
  std::int64_t startup_us_ = 0;
  std::int64_t mig_start_us_ = 0;
  std::int64_t stage3_us_ = 0;
  std::int64_t stage5_us_ = 0;
  std::int64_t duration_us_ = 0;
  std::int64_t residual_us_ = 0;

  std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
  std::uint64_t next_order_ = 0;
  std::uint64_t copy_counter_ = 0;
  std::int64_t now_ = 0;
  MigrationTrace trace_;
};

}  // namespace

std::string migration_type_name(MigrationType type) {
  switch (type) {
    case MigrationType::of:
      return "of";
    case MigrationType::standard:
      return "standard";
    case MigrationType::arp_flush_of:
      return "arp-flush-of";
    case MigrationType::arp_flush_standard:
      return "arp-flush-standard";
  }
  return "unknown";
}

MigrationType migration_type_from_name(const std::string& name) {
  if (name == "of") return MigrationType::of;
  if (name == "standard") return MigrationType::standard;
  if (name == "arp-flush-of") return MigrationType::arp_flush_of;
  if (name == "arp-flush-standard") return MigrationType::arp_flush_standard;
  throw ParseError("unknown migration type '" + name + "'");
}

MigrationTrace run_stream(const SimConfig& config) {
  return Sim(config, RunMode::stream, false).run();
}

std::pair<MigrationTrace, GapReport> run_of_migration(const SimConfig& config,
                                                      bool flush_arp) {
  MigrationTrace trace = Sim(config, RunMode::of, flush_arp).run();
  GapReport gap = measure_gap(trace);
  return {std::move(trace), gap};
}

std::pair<MigrationTrace, GapReport> run_standard_migration(
    const SimConfig& config, bool flush_arp) {
  MigrationTrace trace = Sim(config, RunMode::standard, flush_arp).run();
  GapReport gap = measure_gap(trace);
  return {std::move(trace), gap};
}

std::pair<MigrationTrace, GapReport> run_migration(MigrationType type,
                                                   const SimConfig& config) {
  switch (type) {
    case MigrationType::of:
      return run_of_migration(config, false);
    case MigrationType::arp_flush_of:
      return run_of_migration(config, true);
    case MigrationType::standard:
      return run_standard_migration(config, false);
    case MigrationType::arp_flush_standard:
      return run_standard_migration(config, true);
  }
  throw ParamError("bad migration type");
}

GapReport measure_gap(const MigrationTrace& trace) {
  std::int64_t last_t1 = -1;
  std::int64_t first_t2 = -1;
  for (const ClientRx& rx : trace.client_log) {
    if (rx.src_mac == trace.t1_mac) {
      last_t1 = rx.t_us;
    } else if (rx.src_mac == trace.t2_mac && first_t2 < 0) {
      first_t2 = rx.t_us;
    }
  }
  if (last_t1 < 0 || first_t2 < 0) {
    throw IncompleteMigrationError(
        "client log lacks packets from " +
        std::string(last_t1 < 0 ? "the old" : "the new") + " transcoder MAC");
  }
  GapReport report;
  report.gap_s = static_cast<double>(first_t2 - last_t1) / 1e6;
  for (const ClientRx& rx : trace.client_log) {
    if (rx.src_mac == trace.t1_mac && rx.t_us > first_t2) {
      ++report.overlap_packets;
    }
  }
  for (std::size_t i = 1; i < trace.client_log.size(); ++i) {
    double delta = static_cast<double>(trace.client_log[i].t_us -
                                       trace.client_log[i - 1].t_us) /
                   1e6;
    report.max_interpacket_delta_s =
        std::max(report.max_interpacket_delta_s, delta);
  }
  return report;
}

SweepCell sweep_cell(MigrationType type, const SimConfig& base, int reps,
                     std::uint64_t seed_base) {
  if (reps < 1) {
    throw ParamError("sweep: repetitions must be >= 1");
  }
  std::vector<double> gaps;
  gaps.reserve(reps);
  for (int i = 0; i < reps; ++i) {
    SimConfig cfg = base;
    cfg.arp_residual_seed = seed_base + static_cast<std::uint64_t>(i);
    gaps.push_back(run_migration(type, cfg).second.gap_s);
  }
  SweepCell cell;
  cell.type = migration_type_name(type);
  cell.reps = reps;
  cell.min = *std::min_element(gaps.begin(), gaps.end());
  cell.max = *std::max_element(gaps.begin(), gaps.end());
  double sum = 0.0;
  for (double g : gaps) sum += g;
  cell.mean = sum / gaps.size();
  if (reps == 1) {
    cell.ci95 = 0.0;
    cell.degenerate_ci = true;
  } else {
    double var = 0.0;
    for (double g : gaps) var += (g - cell.mean) * (g - cell.mean);
    var /= (gaps.size() - 1);
    cell.ci95 = 1.96 * std::sqrt(var / gaps.size());
  }
  return cell;
}

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out.push_back('\\');
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace

void write_trace_jsonl(const MigrationTrace& trace, std::ostream& out) {
  for (const TraceEvent& e : trace.events) {
    out << "{\"t_us\":" << e.t_us << ",\"kind\":\"" << json_escape(e.kind)
        << "\",\"where\":\"" << json_escape(e.where) << "\",\"copy\":" << e.copy
        << ",\"detail\":\"" << json_escape(e.detail) << "\"}\n";
  }
}

void write_client_log_csv(const MigrationTrace& trace, std::ostream& out) {
  out << "t_us,src_mac,seq\n";
  for (const ClientRx& rx : trace.client_log) {
    out << rx.t_us << "," << rx.src_mac << "," << rx.seq << "\n";
  }
}

}  // namespace tmig::sim
