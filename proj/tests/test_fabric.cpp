#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "tmig/errors.hpp"
#include "tmig/flowtable.hpp"
#include "tmig/rng.hpp"

using namespace tmig::fabric;

namespace {

const Mac kServerMac = "02:00:00:00:00:01";
const Mac kClientMac = "02:00:00:00:00:02";
const Mac kT1Mac = "02:00:00:00:00:11";
const Mac kT2Mac = "02:00:00:00:00:12";
const Ipv4 kServerIp = "10.0.0.1";
const Ipv4 kTranscoderIp = "10.0.0.2";
const Ipv4 kClientIp = "10.0.0.3";

SymbolBindings bindings() {
  return {
      {"sw1Name", "sw1"},          {"sw2Name", "sw2"},
      {"serverIP", kServerIp},     {"transcoderIP", kTranscoderIp},
      {"clientIP", kClientIp},     {"transcoder1MAC", kT1Mac},
      {"transcoder2MAC", kT2Mac},
  };
}

std::vector<FlowModCommand> script() {
  return parse_flow_script(kMigrationFlowScript, bindings());
}

PacketHeader server_video(const Mac& dst_mac) {
  PacketHeader pkt;
  pkt.in_port = "serverPORT";
  pkt.eth_type = kEthIpv4;
  pkt.src_mac = kServerMac;
  pkt.dst_mac = dst_mac;
  pkt.src_ip = kServerIp;
  pkt.dst_ip = kTranscoderIp;
  pkt.seq = 42;
  return pkt;
}

SwitchModel make_sw1() {
  SwitchModel sw("sw1");
  sw.add_port("serverPORT");
  sw.add_port("transcoder1PORT");
  sw.add_port("sw1LinkPORT");
  return sw;
}

SwitchModel make_sw2() {
  SwitchModel sw("sw2");
  sw.add_port("sw2LinkPORT");
  sw.add_port("transcoder2PORT");
  sw.add_port("clientPORT");
  return sw;
}

}  // namespace

TEST_CASE("flow script parses ten commands with the expected shapes") {
  auto cmds = script();
  REQUIRE(cmds.size() == 10);
  for (int i : {0, 1, 2, 3, 4, 5, 6, 8}) {
    CHECK(cmds[i].kind == FlowModCommand::Kind::add_flow);
  }
  CHECK(cmds[7].kind == FlowModCommand::Kind::del_flows);
  CHECK(cmds[7].switch_name == "sw2");
  CHECK(cmds[7].cookie == 9997);
  CHECK(cmds[7].mask == ~0ULL);
  CHECK(cmds[9].kind == FlowModCommand::Kind::del_flows);
  CHECK(cmds[9].switch_name == "sw1");
  CHECK(cmds[9].cookie == 9998);

  // Flow 1: duplicate, link copy first, rewritten transcoder copy second.
  REQUIRE(cmds[0].rule.actions.size() == 3);
  CHECK(cmds[0].rule.actions[0] == Action::output("sw1LinkPORT"));
  CHECK(cmds[0].rule.actions[1] == Action::mod_dst_mac(kT1Mac));
  CHECK(cmds[0].rule.actions[2] == Action::output("transcoder1PORT"));
  // Flow 6: empty action list == drop.
  CHECK(cmds[5].rule.actions.empty());
  CHECK(cmds[5].rule.match.in_port == PortId("transcoder2PORT"));
}

TEST_CASE("shipped migration.flows file equals the built-in script") {
  std::ifstream in(std::string(TMIG_DATA_DIR) + "/migration.flows");
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  auto from_file = parse_flow_script(buf.str(), bindings());
  auto builtin = script();
  REQUIRE(from_file.size() == builtin.size());
  for (std::size_t i = 0; i < builtin.size(); ++i) {
    CHECK(from_file[i] == builtin[i]);
  }
}

TEST_CASE("parser/printer round-trip identity on all ten flow mods") {
  for (const FlowModCommand& cmd : script()) {
    std::string text = format_flow_mod(cmd);
    FlowModCommand reparsed = parse_flow_mod(text);
    CHECK(reparsed == cmd);
    CHECK(format_flow_mod(reparsed) == text);
  }
}

TEST_CASE("parser errors and extras") {
  CHECK_THROWS_AS(parse_flow_mod("bogus sw1 cookie=1,actions="),
                  tmig::ParseError);
  CHECK_THROWS_AS(parse_flow_mod("add-flow sw1 cookie=1,nope=3,actions="),
                  tmig::ParseError);
  CHECK_THROWS_AS(parse_flow_mod("add-flow sw1 cookie=zzz,actions="),
                  tmig::ParseError);
  CHECK_THROWS_AS(parse_flow_mod("del-flows sw1 priority=1"), tmig::ParseError);

  FlowModCommand hex = parse_flow_mod(
      "add-flow sw1 cookie=0xff,dl_type=0x0806,priority=7,actions=drop");
  CHECK(hex.rule.cookie == 0xff);
  CHECK(hex.rule.priority == 7);
  CHECK(hex.rule.match.eth_type == kEthArp);

  FlowModCommand masked = parse_flow_mod("del-flows sw1 cookie=0xf0/0xf0");
  CHECK(masked.mask == 0xf0);

  // Unknown symbols stay verbatim.
  FlowModCommand raw =
      parse_flow_mod("add-flow swX cookie=1,in_port=mysteryPORT,actions=");
  CHECK(raw.switch_name == "swX");
  CHECK(raw.rule.match.in_port == PortId("mysteryPORT"));
}

TEST_CASE("flow 1 duplication rewrites only the transcoder copy") {
  SwitchModel sw1 = make_sw1();
  auto cmds = script();
  sw1.table().install(cmds[0].rule);
  sw1.table().install(cmds[1].rule);

  SwitchResult r = sw1.handle(server_video(kT1Mac));
  CHECK(r.matched);
  REQUIRE(r.emissions.size() == 2);
  CHECK(r.emissions[0].port == "sw1LinkPORT");
  CHECK(r.emissions[0].pkt.dst_mac == kT1Mac);  // original header untouched
  CHECK(r.emissions[1].port == "transcoder1PORT");
  CHECK(r.emissions[1].pkt.dst_mac == kT1Mac);

  // Same duplication when the server still addresses a stale MAC.
  SwitchResult stale = sw1.handle(server_video("02:aa:aa:aa:aa:aa"));
  REQUIRE(stale.emissions.size() == 2);
  CHECK(stale.emissions[0].pkt.dst_mac == "02:aa:aa:aa:aa:aa");
  CHECK(stale.emissions[1].pkt.dst_mac == kT1Mac);
}

TEST_CASE("flow 3 rewrites to transcoder 2 on switch 2") {
  SwitchModel sw2 = make_sw2();
  auto cmds = script();
  for (int i : {2, 3, 4, 5}) {
    sw2.table().install(cmds[i].rule);
  }
  PacketHeader pkt = server_video(kT1Mac);
  pkt.in_port = "sw2LinkPORT";
  SwitchResult r = sw2.handle(pkt);
  CHECK(r.matched);
  REQUIRE(r.emissions.size() == 1);
  CHECK(r.emissions[0].port == "transcoder2PORT");
  CHECK(r.emissions[0].pkt.dst_mac == kT2Mac);
}

TEST_CASE("flow 6 drops transcoder 2 output during the window") {
  SwitchModel sw2 = make_sw2();
  auto cmds = script();
  sw2.table().install(cmds[5].rule);
  PacketHeader out;
  out.in_port = "transcoder2PORT";
  out.eth_type = kEthIpv4;
  out.src_mac = kT2Mac;
  out.dst_mac = kClientMac;
  out.src_ip = kTranscoderIp;
  out.dst_ip = kClientIp;
  SwitchResult r = sw2.handle(out);
  CHECK(r.matched);
  CHECK(r.dropped_by_rule);
  CHECK(r.emissions.empty());
}

TEST_CASE("stage-5 deletes leave exactly the steady-state flows") {
  SwitchModel sw1 = make_sw1();
  SwitchModel sw2 = make_sw2();
  auto cmds = script();
  sw1.table().install(cmds[0].rule);
  sw1.table().install(cmds[1].rule);
  for (int i : {2, 3, 4, 5}) {
    sw2.table().install(cmds[i].rule);
  }
  // Switchover: flow 9 replaces flow 1 (identical match+priority) and flow 7
  // replaces flow 6, so each cookie delete removes the one rule left in its
  // window.
  sw1.table().install(cmds[8].rule);
  CHECK(sw1.table().delete_by_cookie(cmds[9].cookie, cmds[9].mask) == 1);
  sw2.table().install(cmds[6].rule);
  CHECK(sw2.table().delete_by_cookie(cmds[7].cookie, cmds[7].mask) == 1);

  CHECK(sw1.table().size() == 1);   // flow 9
  CHECK(sw2.table().size() == 3);   // flows 4, 5, 7
  for (const FlowRule& rule : sw1.table().rules()) {
    for (const Action& a : rule.actions) {
      CHECK(a.kind != Action::Kind::mod_dst_mac);
    }
  }
  for (const FlowRule& rule : sw2.table().rules()) {
    CHECK(rule.cookie == 9999);
    for (const Action& a : rule.actions) {
      CHECK(a.kind != Action::Kind::mod_dst_mac);
    }
  }
}

TEST_CASE("cookie delete removes every rule in the window at once") {
  // A table holding only the two stage-3 switch-1 rules: the single delete
  // strips both.
  FlowTable table;
  auto cmds = script();
  table.install(cmds[0].rule);
  table.install(cmds[1].rule);
  CHECK(table.delete_by_cookie(9998, ~0ULL) == 2);
  CHECK(table.size() == 0);
}

TEST_CASE("delete_by_cookie edge cases") {
  FlowTable table;
  CHECK(table.delete_by_cookie(9997, ~0ULL) == 0);
  FlowRule a;
  a.cookie = 9997;
  FlowRule b;
  b.cookie = 9999;
  b.match.in_port = "p";
  table.install(a);
  table.install(b);
  CHECK(table.delete_by_cookie(9997, ~0ULL) == 1);
  CHECK(table.size() == 1);
  CHECK(table.rules()[0].cookie == 9999);
  // Masked delete: low nibble only.
  FlowRule c;
  c.cookie = 0x19;
  c.match.in_port = "q";
  table.install(c);
  CHECK(table.delete_by_cookie(0x09, 0x0f) == 1);  // removes 0x19, not 9999
  CHECK(table.rules()[0].cookie == 9999);
}

TEST_CASE("install replaces identical match+priority") {
  FlowTable table;
  FlowRule r;
  r.cookie = 1;
  r.priority = 10;
  r.match.in_port = "p";
  r.actions = {Action::output("a")};
  table.install(r);
  table.install(r);
  CHECK(table.size() == 1);
  r.actions = {Action::output("b")};
  table.install(r);
  CHECK(table.size() == 1);
  CHECK(table.rules()[0].actions[0] == Action::output("b"));
}

TEST_CASE("lookup tie-breaks: priority, specificity, cookie, order") {
  FlowTable table;
  PacketHeader pkt;
  pkt.in_port = "p";
  pkt.eth_type = kEthIpv4;
  pkt.dst_ip = kClientIp;

  FlowRule low;
  low.cookie = 5;
  low.priority = 1;
  low.match.in_port = "p";
  FlowRule high;
  high.cookie = 6;
  high.priority = 2;
  table.install(low);
  table.install(high);
  CHECK(table.match(pkt)->cookie == 6);  // priority dominates specificity

  FlowTable spec;
  FlowRule wide;
  wide.cookie = 1;
  wide.priority = 1;
  FlowRule narrow;
  narrow.cookie = 2;
  narrow.priority = 1;
  narrow.match.in_port = "p";
  narrow.match.dst_ip = kClientIp;
  spec.install(wide);
  spec.install(narrow);
  CHECK(spec.match(pkt)->cookie == 2);  // specificity breaks the tie

  FlowTable cookies;
  FlowRule c9;
  c9.cookie = 9;
  c9.match.in_port = "p";
  FlowRule c3;
  c3.cookie = 3;
  c3.match.dst_ip = kClientIp;
  cookies.install(c9);
  cookies.install(c3);
  CHECK(cookies.match(pkt)->cookie == 3);  // lowest cookie wins

  FlowTable order;
  FlowRule first;
  first.cookie = 4;
  first.match.in_port = "p";
  first.actions = {Action::output("x")};
  FlowRule second;
  second.cookie = 4;
  second.match.dst_ip = kClientIp;
  second.actions = {Action::output("y")};
  order.install(first);
  order.install(second);
  CHECK(order.match(pkt)->actions[0] == Action::output("x"));
}

TEST_CASE("priority dominance holds on generated tables") {
  tmig::Rng rng(2024);
  const std::vector<PortId> ports{"p0", "p1", "p2"};
  const std::vector<Ipv4> ips{kServerIp, kTranscoderIp, kClientIp};
  for (int trial = 0; trial < 200; ++trial) {
    FlowTable table;
    std::vector<FlowRule> rules;
    int count = 1 + static_cast<int>(rng.below(6));
    for (int i = 0; i < count; ++i) {
      FlowRule r;
      r.cookie = rng.below(5);
      r.priority = static_cast<int>(rng.below(4));
      if (rng.unit() < 0.5) r.match.in_port = ports[rng.below(3)];
      if (rng.unit() < 0.5) {
        r.match.eth_type = rng.unit() < 0.5 ? kEthIpv4 : kEthArp;
      }
      if (rng.unit() < 0.5) r.match.dst_ip = ips[rng.below(3)];
      table.install(r);
      rules.push_back(r);
    }
    PacketHeader pkt;
    pkt.in_port = ports[rng.below(3)];
    pkt.eth_type = rng.unit() < 0.5 ? kEthIpv4 : kEthArp;
    pkt.dst_ip = ips[rng.below(3)];

    const FlowRule* winner = table.match(pkt);
    int best_priority = -1;
    bool any = false;
    for (const FlowRule& r : rules) {
      if (r.match.matches(pkt)) {
        any = true;
        best_priority = std::max(best_priority, r.priority);
      }
    }
    if (!any) {
      CHECK(winner == nullptr);
    } else {
      REQUIRE(winner != nullptr);
      CHECK(winner->priority == best_priority);
    }
  }
}

TEST_CASE("ARP and IPv4 rules never cross-match") {
  auto cmds = script();
  PacketHeader arp = server_video(kBroadcastMac);
  arp.eth_type = kEthArp;
  PacketHeader ip = server_video(kT1Mac);
  for (const FlowModCommand& cmd : cmds) {
    if (cmd.kind != FlowModCommand::Kind::add_flow ||
        !cmd.rule.match.eth_type) {
      continue;
    }
    if (*cmd.rule.match.eth_type == kEthArp) {
      CHECK_FALSE(cmd.rule.match.matches(ip));
    } else {
      CHECK_FALSE(cmd.rule.match.matches(arp));
    }
  }
}

TEST_CASE("miss falls back to the learning switch") {
  SwitchModel sw = make_sw1();
  // Unknown destination floods everywhere except the ingress.
  PacketHeader pkt = server_video(kT1Mac);
  SwitchResult flood = sw.handle(pkt);
  CHECK_FALSE(flood.matched);
  CHECK(flood.emissions.size() == 2);

  // Teach the switch T1's location, then the same packet unicasts.
  PacketHeader from_t1;
  from_t1.in_port = "transcoder1PORT";
  from_t1.eth_type = kEthIpv4;
  from_t1.src_mac = kT1Mac;
  from_t1.dst_mac = kServerMac;
  sw.handle(from_t1);
  SwitchResult unicast = sw.handle(pkt);
  REQUIRE(unicast.emissions.size() == 1);
  CHECK(unicast.emissions[0].port == "transcoder1PORT");
}

TEST_CASE("port gating discards traffic") {
  SwitchModel sw = make_sw1();
  sw.set_port("transcoder1PORT", false);
  PacketHeader inbound;
  inbound.in_port = "transcoder1PORT";
  inbound.eth_type = kEthIpv4;
  inbound.src_mac = kT1Mac;
  CHECK(sw.handle(inbound).discarded_ingress);

  // Output toward the disabled port is discarded with a warning.
  auto cmds = script();
  sw.table().install(cmds[0].rule);
  SwitchResult r = sw.handle(server_video(kT1Mac));
  REQUIRE(r.emissions.size() == 1);
  CHECK(r.emissions[0].port == "sw1LinkPORT");
  CHECK(r.warnings.size() == 1);

  sw.set_port("transcoder1PORT", true);
  sw.set_port("transcoder1PORT", true);  // idempotent
  CHECK(sw.handle(server_video(kT1Mac)).emissions.size() == 2);
  CHECK_THROWS_AS(sw.set_port("nope", true), tmig::InvalidNodeError);
}
