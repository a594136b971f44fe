#include "tmig/flowtable.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "tmig/errors.hpp"

namespace tmig::fabric {

bool Match::matches(const PacketHeader& pkt) const {
  return (!in_port || *in_port == pkt.in_port) &&
         (!eth_type || *eth_type == pkt.eth_type) &&
         (!src_mac || *src_mac == pkt.src_mac) &&
         (!dst_mac || *dst_mac == pkt.dst_mac) &&
         (!src_ip || *src_ip == pkt.src_ip) &&
         (!dst_ip || *dst_ip == pkt.dst_ip);
}

int Match::specificity() const {
  return static_cast<int>(in_port.has_value()) + eth_type.has_value() +
         src_mac.has_value() + dst_mac.has_value() + src_ip.has_value() +
         dst_ip.has_value();
}

void FlowTable::install(const FlowRule& rule) {
  for (Entry& e : entries_) {
    if (e.rule.match == rule.match && e.rule.priority == rule.priority) {
      e.rule = rule;
      return;
    }
  }
  entries_.push_back({rule, next_order_++});
}

std::size_t FlowTable::delete_by_cookie(std::uint64_t cookie,
                                        std::uint64_t mask) {
  std::size_t before = entries_.size();
  std::erase_if(entries_, [&](const Entry& e) {
    return (e.rule.cookie & mask) == (cookie & mask);
  });
  return before - entries_.size();
}

const FlowRule* FlowTable::match(const PacketHeader& pkt) const {
  const Entry* winner = nullptr;
  for (const Entry& e : entries_) {
    if (!e.rule.match.matches(pkt)) {
      continue;
    }
    if (!winner) {
      winner = &e;
      continue;
    }
    const FlowRule& r = e.rule;
    const FlowRule& w = winner->rule;
    if (r.priority != w.priority) {
      if (r.priority > w.priority) winner = &e;
    } else if (r.match.specificity() != w.match.specificity()) {
      if (r.match.specificity() > w.match.specificity()) winner = &e;
    } else if (r.cookie != w.cookie) {
      if (r.cookie < w.cookie) winner = &e;
    }  // equal on all counts: keep the earlier install
  }
  return winner ? &winner->rule : nullptr;
}

std::vector<FlowRule> FlowTable::rules() const {
  std::vector<FlowRule> out;
  out.reserve(entries_.size());
  for (const Entry& e : entries_) {
    out.push_back(e.rule);
  }
  return out;
}

void SwitchModel::add_port(const PortId& port, bool enabled) {
  ports_[port] = enabled;
}

bool SwitchModel::has_port(const PortId& port) const {
  return ports_.count(port) != 0;
}

void SwitchModel::set_port(const PortId& port, bool enabled) {
  auto it = ports_.find(port);
  if (it == ports_.end()) {
    throw InvalidNodeError("set_port: switch " + name_ + " has no port " +
                           port);
  }
  it->second = enabled;
}

bool SwitchModel::port_enabled(const PortId& port) const {
  auto it = ports_.find(port);
  return it != ports_.end() && it->second;
}

std::vector<PortId> SwitchModel::ports() const {
  std::vector<PortId> out;
  for (const auto& [p, _] : ports_) {
    out.push_back(p);
  }
  return out;
}

std::vector<Emission> SwitchModel::apply_actions(
    const PacketHeader& pkt, const std::vector<Action>& actions,
    std::vector<std::string>* warnings) const {
  std::vector<Emission> out;
  PacketHeader current = pkt;
  for (const Action& action : actions) {
    switch (action.kind) {
      case Action::Kind::mod_dst_mac:
        current.dst_mac = action.mac;
        break;
      case Action::Kind::output: {
        auto it = ports_.find(action.port);
        if (it == ports_.end()) {
          if (warnings) {
            warnings->push_back("output to unknown port " + action.port);
          }
          break;
        }
        if (!it->second) {
          if (warnings) {
            warnings->push_back("output to disabled port " + action.port);
          }
          break;
        }
        Emission e{action.port, current};
        e.pkt.in_port.clear();
        out.push_back(std::move(e));
        break;
      }
      case Action::Kind::drop:
        return out;
    }
  }
  return out;
}

std::vector<Emission> SwitchModel::default_forward(
    const PacketHeader& pkt) const {
  std::vector<Emission> out;
  auto emit = [&](const PortId& port) {
    Emission e{port, pkt};
    e.pkt.in_port.clear();
    out.push_back(std::move(e));
  };
  if (pkt.dst_mac != kBroadcastMac) {
    auto it = learned_.find(pkt.dst_mac);
    if (it != learned_.end()) {
      if (it->second != pkt.in_port && port_enabled(it->second)) {
        emit(it->second);
      }
      return out;
    }
  }
  for (const auto& [port, enabled] : ports_) {  // flood
    if (enabled && port != pkt.in_port) {
      emit(port);
    }
  }
  return out;
}

SwitchResult SwitchModel::handle(const PacketHeader& pkt) {
  SwitchResult result;
  auto it = ports_.find(pkt.in_port);
  if (it == ports_.end() || !it->second) {
    result.discarded_ingress = true;
    return result;
  }
  if (pkt.src_mac != kBroadcastMac && !pkt.src_mac.empty()) {
    learned_[pkt.src_mac] = pkt.in_port;
  }
  if (const FlowRule* rule = table_.match(pkt)) {
    result.matched = true;
    result.emissions = apply_actions(pkt, rule->actions, &result.warnings);
    result.dropped_by_rule = result.emissions.empty();
  } else {
    result.emissions = default_forward(pkt);
  }
  return result;
}

namespace {

std::string resolve(const SymbolBindings& bindings, const std::string& symbol) {
  auto it = bindings.find(symbol);
  return it == bindings.end() ? symbol : it->second;
}

std::uint64_t parse_u64(const std::string& text, const char* what) {
  try {
    if (text.starts_with("0x") || text.starts_with("0X")) {
      return std::stoull(text.substr(2), nullptr, 16);
    }
    return std::stoull(text);
  } catch (const std::exception&) {
    throw ParseError(std::string("bad ") + what + " value '" + text + "'");
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) {
    return "";
  }
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

FlowModCommand parse_flow_mod(const std::string& raw,
                              const SymbolBindings& bindings, int priority) {
  const std::string line = trim(raw);
  FlowModCommand cmd;

  auto first_space = line.find(' ');
  if (first_space == std::string::npos) {
    throw ParseError("flow mod missing verb: '" + line + "'");
  }
  const std::string verb = line.substr(0, first_space);
  std::string rest = trim(line.substr(first_space + 1));
  auto second_space = rest.find(' ');

  if (verb == "del-flows") {
    cmd.kind = FlowModCommand::Kind::del_flows;
    if (second_space == std::string::npos) {
      throw ParseError("del-flows needs '<switch> cookie=<c>/<mask>'");
    }
    cmd.switch_name = resolve(bindings, rest.substr(0, second_space));
    std::string spec = trim(rest.substr(second_space + 1));
    if (!spec.starts_with("cookie=")) {
      throw ParseError("del-flows needs a cookie= spec, got '" + spec + "'");
    }
    spec = spec.substr(7);
    auto slash = spec.find('/');
    if (slash == std::string::npos) {
      cmd.cookie = parse_u64(spec, "cookie");
      cmd.mask = ~0ULL;
    } else {
      cmd.cookie = parse_u64(spec.substr(0, slash), "cookie");
      std::string mask = spec.substr(slash + 1);
      cmd.mask = mask == "-1" ? ~0ULL : parse_u64(mask, "cookie mask");
    }
    return cmd;
  }

  if (verb != "add-flow") {
    throw ParseError("unknown flow mod verb '" + verb + "'");
  }
  cmd.kind = FlowModCommand::Kind::add_flow;
  if (second_space == std::string::npos) {
    throw ParseError("add-flow needs '<switch> <rule>'");
  }
  cmd.switch_name = resolve(bindings, rest.substr(0, second_space));
  std::string body = trim(rest.substr(second_space + 1));

  auto actions_pos = body.find("actions=");
  if (actions_pos == std::string::npos) {
    throw ParseError("add-flow rule has no actions= list");
  }
  std::string match_part = body.substr(0, actions_pos);
  std::string actions_part = body.substr(actions_pos + 8);
  // Strip the separator (comma or whitespace) before actions=.
  while (!match_part.empty() &&
         (match_part.back() == ',' || match_part.back() == ' ')) {
    match_part.pop_back();
  }

  FlowRule& rule = cmd.rule;
  rule.priority = priority;
  for (const std::string& field : split(match_part, ',')) {
    if (trim(field).empty()) {
      continue;
    }
    auto eq = field.find('=');
    if (eq == std::string::npos) {
      throw ParseError("bad match field '" + field + "'");
    }
    std::string key = trim(field.substr(0, eq));
    std::string value = trim(field.substr(eq + 1));
    if (key == "cookie") {
      rule.cookie = parse_u64(value, "cookie");
    } else if (key == "priority") {
      rule.priority = static_cast<int>(parse_u64(value, "priority"));
    } else if (key == "in_port") {
      rule.match.in_port = resolve(bindings, value);
    } else if (key == "dl_type") {
      rule.match.eth_type =
          static_cast<std::uint16_t>(parse_u64(value, "dl_type"));
    } else if (key == "dl_src") {
      rule.match.src_mac = resolve(bindings, value);
    } else if (key == "dl_dst") {
      rule.match.dst_mac = resolve(bindings, value);
    } else if (key == "nw_src") {
      rule.match.src_ip = resolve(bindings, value);
    } else if (key == "nw_dst") {
      rule.match.dst_ip = resolve(bindings, value);
    } else {
      throw ParseError("unknown match field '" + key + "'");
    }
  }

  for (const std::string& item : split(actions_part, ',')) {
    std::string token = trim(item);
    if (token.empty()) {
      continue;  // "actions=" with nothing following == drop
    }
    if (token == "drop") {
      rule.actions.push_back(Action::drop());
      continue;
    }
    auto colon = token.find(':');
    if (colon == std::string::npos) {
      throw ParseError("bad action '" + token + "'");
    }
    std::string kind = token.substr(0, colon);
    std::string arg = resolve(bindings, token.substr(colon + 1));
    if (kind == "output") {
      rule.actions.push_back(Action::output(arg));
    } else if (kind == "mod_dl_dst") {
      rule.actions.push_back(Action::mod_dst_mac(arg));
    } else {
      throw ParseError("unknown action '" + kind + "'");
    }
  }
  return cmd;
}

std::string format_flow_mod(const FlowModCommand& cmd) {
  std::ostringstream out;
  if (cmd.kind == FlowModCommand::Kind::del_flows) {
    out << "del-flows " << cmd.switch_name << " cookie=" << cmd.cookie << "/";
    if (cmd.mask == ~0ULL) {
      out << "-1";
    } else {
      out << cmd.mask;
    }
    return out.str();
  }
  out << "add-flow " << cmd.switch_name << " cookie=" << cmd.rule.cookie;
  if (cmd.rule.priority != kMigrationPriority) {
    out << ",priority=" << cmd.rule.priority;
  }
  const Match& m = cmd.rule.match;
  if (m.in_port) out << ",in_port=" << *m.in_port;
  if (m.eth_type) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "0x%04x", *m.eth_type);
    out << ",dl_type=" << buf;
  }
  if (m.src_mac) out << ",dl_src=" << *m.src_mac;
  if (m.dst_mac) out << ",dl_dst=" << *m.dst_mac;
  if (m.src_ip) out << ",nw_src=" << *m.src_ip;
  if (m.dst_ip) out << ",nw_dst=" << *m.dst_ip;
  out << ",actions=";
  bool first = true;
  for (const Action& a : cmd.rule.actions) {
    if (!first) out << ",";
    first = false;
    switch (a.kind) {
      case Action::Kind::output:
        out << "output:" << a.port;
        break;
      case Action::Kind::mod_dst_mac:
        out << "mod_dl_dst:" << a.mac;
        break;
      case Action::Kind::drop:
        out << "drop";
        break;
    }
  }
  return out.str();
}

std::vector<FlowModCommand> parse_flow_script(const std::string& text,
                                              const SymbolBindings& bindings,
                                              int priority) {
  std::vector<FlowModCommand> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') {
      continue;
    }
    try {
      out.push_back(parse_flow_mod(t, bindings, priority));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

// Cookies group the rules by lifetime: 9998 tags switch-1 rules that live
// only during the handover window, 9997 the equivalent switch-2 rules, and
// 9999 the rules that stay installed afterwards. The stage-5 deletes
// (flows 8 and 10) then strip the whole window by cookie, leaving flows
// 4, 5, 7 and 9 as the steady state.
const char* const kMigrationFlowScript =
    "# stage 3, switch 1: duplicate the server stream and forward its ARPs\n"
    "add-flow sw1Name cookie=9998,in_port=serverPORT,dl_type=0x0800,"
    "nw_src=serverIP,nw_dst=transcoderIP,"
    "actions=output:sw1LinkPORT,mod_dl_dst:transcoder1MAC,"
    "output:transcoder1PORT\n"
    "add-flow sw1Name cookie=9998,in_port=serverPORT,dl_type=0x0806,"
    "nw_src=serverIP,nw_dst=transcoderIP,actions=output:sw1LinkPORT\n"
    "# stage 3, switch 2: steer the copy to transcoder 2, mute its output\n"
    "add-flow sw2Name cookie=9997,in_port=sw2LinkPORT,dl_type=0x0800,"
    "dl_dst=transcoder1MAC,nw_src=serverIP,nw_dst=transcoderIP,"
    "actions=mod_dl_dst:transcoder2MAC,output:transcoder2PORT\n"
    "add-flow sw2Name cookie=9999,in_port=sw2LinkPORT,dl_type=0x0800,"
    "dl_dst=transcoder2MAC,nw_src=serverIP,nw_dst=transcoderIP,"
    "actions=output:transcoder2PORT\n"
    "add-flow sw2Name cookie=9999,in_port=sw2LinkPORT,dl_type=0x0806,"
    "nw_src=serverIP,nw_dst=transcoderIP,actions=output:transcoder2PORT\n"
    "add-flow sw2Name cookie=9997,in_port=transcoder2PORT,dl_type=0x0800,"
    "nw_src=transcoderIP,nw_dst=clientIP,actions=\n"
    "# stage 5: switch over and clean up\n"
    "add-flow sw2Name cookie=9999,in_port=transcoder2PORT,dl_type=0x0800,"
    "nw_src=transcoderIP,nw_dst=clientIP,actions=output:clientPORT\n"
    "del-flows sw2Name cookie=9997/-1\n"
    "add-flow sw1Name cookie=9999,in_port=serverPORT,dl_type=0x0800,"
    "nw_src=serverIP,nw_dst=transcoderIP,actions=output:sw1LinkPORT\n"
    "del-flows sw1Name cookie=9998/-1\n";

}  // namespace tmig::fabric
