#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tmig::fabric {

using PortId = std::string;
using Mac = std::string;
using Ipv4 = std::string;

constexpr std::uint16_t kEthIpv4 = 0x0800;
constexpr std::uint16_t kEthArp = 0x0806;

/// Priority used for migration rules so they override default forwarding.
constexpr int kMigrationPriority = 1000;

inline const Mac kBroadcastMac = "ff:ff:ff:ff:ff:ff";

struct PacketHeader {
  PortId in_port;
  std::uint16_t eth_type = kEthIpv4;
  Mac src_mac;
  Mac dst_mac;
  Ipv4 src_ip;
  Ipv4 dst_ip;
  std::uint64_t seq = 0;    // payload stand-in
  std::string stream_id;

  bool operator==(const PacketHeader&) const = default;
};

/// Exact-or-wildcard match over header fields.
struct Match {
  std::optional<PortId> in_port;
  std::optional<std::uint16_t> eth_type;
  std::optional<Mac> src_mac;
  std::optional<Mac> dst_mac;
  std::optional<Ipv4> src_ip;
  std::optional<Ipv4> dst_ip;

  bool matches(const PacketHeader& pkt) const;
  int specificity() const;  // count of non-wildcard fields

  bool operator==(const Match&) const = default;
};

struct Action {
  enum class Kind { output, mod_dst_mac, drop };
  Kind kind = Kind::drop;
  PortId port;  // output
  Mac mac;      // mod_dst_mac

  static Action output(PortId p) { return {Kind::output, std::move(p), {}}; }
  static Action mod_dst_mac(Mac m) {
    return {Kind::mod_dst_mac, {}, std::move(m)};
  }
  static Action drop() { return {}; }

  bool operator==(const Action&) const = default;
};

struct FlowRule {
  std::uint64_t cookie = 0;
  int priority = 0;
  Match match;
  std::vector<Action> actions;  // empty list == drop

  bool operator==(const FlowRule&) const = default;
};

/// Lookup picks the highest-priority matching rule; ties go to the most
/// specific match, then the lowest cookie, then install order.
class FlowTable {
 public:
  /// Replaces a rule with identical match and priority.
  void install(const FlowRule& rule);
  std::size_t delete_by_cookie(std::uint64_t cookie, std::uint64_t mask);
  const FlowRule* match(const PacketHeader& pkt) const;

  std::size_t size() const { return entries_.size(); }
  std::vector<FlowRule> rules() const;

 private:
  struct Entry {
    FlowRule rule;
    std::uint64_t order = 0;
  };
  std::vector<Entry> entries_;
  std::uint64_t next_order_ = 0;
};

struct Emission {
  PortId port;
  PacketHeader pkt;

  bool operator==(const Emission&) const = default;
};

/// Result of pushing one packet through a switch.
struct SwitchResult {
  std::vector<Emission> emissions;
  bool matched = false;
  bool dropped_by_rule = false;     // matched a rule with no surviving output
  bool discarded_ingress = false;   // arrived on a disabled port
  std::vector<std::string> warnings;
};

/// OpenFlow-style switch with a learning-switch default path: source MACs
/// are learned on every ingress, misses forward to the learned port or flood.
class SwitchModel {
 public:
  explicit SwitchModel(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }

  void add_port(const PortId& port, bool enabled = true);
  bool has_port(const PortId& port) const;
  /// Throws InvalidNodeError for unknown ports. Idempotent.
  void set_port(const PortId& port, bool enabled);
  bool port_enabled(const PortId& port) const;
  std::vector<PortId> ports() const;

  FlowTable& table() { return table_; }
  const FlowTable& table() const { return table_; }

  SwitchResult handle(const PacketHeader& pkt);

  /// Applies an action list in order. mod_dst_mac rewrites affect only
  /// outputs that come after them in the list.
  std::vector<Emission> apply_actions(const PacketHeader& pkt,
                                      const std::vector<Action>& actions,
                                      std::vector<std::string>* warnings) const;

 private:
  std::vector<Emission> default_forward(const PacketHeader& pkt) const;

  std::string name_;
  std::map<PortId, bool> ports_;
  std::map<Mac, PortId> learned_;
  FlowTable table_;
};

/// One line of the migration flow script: either a rule install on a named
/// switch or a masked cookie delete.
struct FlowModCommand {
  enum class Kind { add_flow, del_flows };
  Kind kind = Kind::add_flow;
  std::string switch_name;
  FlowRule rule;               // add_flow
  std::uint64_t cookie = 0;    // del_flows
  std::uint64_t mask = ~0ULL;  // "-1" == all ones

  bool operator==(const FlowModCommand&) const = default;
};

using SymbolBindings = std::map<std::string, std::string>;

/// Parses `add-flow <switch> cookie=...,in_port=...,actions=...` or
/// `del-flows <switch> cookie=<c>/<mask>` lines. Symbolic names (serverPORT,
/// transcoder1MAC, ...) are substituted from `bindings`; unknown symbols are
/// kept verbatim. Throws ParseError on malformed input.
FlowModCommand parse_flow_mod(const std::string& line,
                              const SymbolBindings& bindings = {},
                              int priority = kMigrationPriority);

std::string format_flow_mod(const FlowModCommand& cmd);

/// Parses a whole flow script, skipping blank lines and `#` comments.
std::vector<FlowModCommand> parse_flow_script(const std::string& text,
                                              const SymbolBindings& bindings = {},
                                              int priority = kMigrationPriority);

/// The ten flow-mods of the migration sequence, in execution order. Flows
/// 1-6 are the stage-3 installs, 7-10 the stage-5 switchover.
extern const char* const kMigrationFlowScript;

}  // namespace tmig::fabric
