// SPDX-License-Identifier: Apache-2.0
#include "ocs/model/types.hpp"

#include <stdexcept>

#include "ocs/errors.hpp"

namespace ocs {

ErrorCode error_code_from_string(const std::string& s) {
  if (s == "AlreadyExist") return ErrorCode::AlreadyExist;
  if (s == "ConnectionFailed") return ErrorCode::ConnectionFailed;
  if (s == "NotFound") return ErrorCode::NotFound;
  if (s == "InvalidRange") return ErrorCode::InvalidRange;
  if (s == "BlockingOccured") return ErrorCode::BlockingOccured;
  if (s == "PathOperFailed") return ErrorCode::PathOperFailed;
  throw std::invalid_argument("unknown error code: " + s);
}

}  // namespace ocs

namespace ocs::model {

ResourceStatus status_from_string(const std::string& s) {
  if (s == "AVAILABLE") return ResourceStatus::AVAILABLE;
  if (s == "UNAVAILABLE") return ResourceStatus::UNAVAILABLE;
  throw std::invalid_argument("unknown status: " + s);
}

json to_json(const ConnInfo& c) { return json{{"host", c.host}, {"port", c.port}}; }

json to_json(const OcsNode& n) {
  return json{{"id", n.id},
              {"conn", to_json(n.conn)},
              {"tx_ports", n.tx_ports},
              {"rx_ports", n.rx_ports},
              {"status", to_string(n.status)}};
}

json to_json(const Terminal& t) {
  return json{{"id", t.id}, {"conn", to_json(t.conn)}, {"status", to_string(t.status)}};
}

json to_json(const FiberLink& l) {
  return json{{"id", l.id},       {"src", l.src},           {"dst", l.dst},
              {"src_port", l.src_port}, {"dst_port", l.dst_port},
              {"status", to_string(l.status)}};
}

json to_json(const InternalConnection& c) {
  return json{{"name", c.name}, {"rx", c.rx_port}, {"tx", c.tx_port}};
}

json to_json(const FiberPath& p) {
  json cfgs = json::object();
  for (const auto& [ocs, conns] : p.per_ocs_configs) {
    json arr = json::array();
    for (const auto& c : conns) arr.push_back(to_json(c));
    cfgs[ocs] = arr;
  }
  return json{{"svc_id", p.svc_id}, {"a", p.a},     {"z", p.z},
              {"hops", p.hops},     {"per_ocs_configs", cfgs},
              {"links", p.links},   {"status", to_string(p.status)}};
}

ConnInfo conn_info_from_json(const json& j) {
  ConnInfo c;
  c.host = j.at("host").get<std::string>();
  c.port = j.at("port").get<int>();
  return c;
}

OcsNode node_from_json(const json& j) {
  OcsNode n;
  n.id = j.at("id").get<std::string>();
  n.conn = conn_info_from_json(j.at("conn"));
  n.tx_ports = j.at("tx_ports").get<std::set<std::string>>();
  n.rx_ports = j.at("rx_ports").get<std::set<std::string>>();
  if (j.contains("status")) n.status = status_from_string(j.at("status"));
  return n;
}

Terminal terminal_from_json(const json& j) {
  Terminal t;
  t.id = j.at("id").get<std::string>();
  t.conn = conn_info_from_json(j.at("conn"));
  if (j.contains("status")) t.status = status_from_string(j.at("status"));
  return t;
}

FiberLink link_from_json(const json& j) {
  FiberLink l;
  l.id = j.at("id").get<std::string>();
  l.src = j.at("src").get<std::string>();
  l.dst = j.at("dst").get<std::string>();
  l.src_port = j.at("src_port").get<std::string>();
  l.dst_port = j.at("dst_port").get<std::string>();
  if (j.contains("status")) l.status = status_from_string(j.at("status"));
  return l;
}

InternalConnection connection_from_json(const json& j) {
  return InternalConnection{j.at("name").get<std::string>(), j.at("rx").get<std::string>(),
                            j.at("tx").get<std::string>()};
}

FiberPath path_from_json(const json& j) {
  FiberPath p;
  p.svc_id = j.at("svc_id").get<std::string>();
  p.a = j.at("a").get<std::string>();
  p.z = j.at("z").get<std::string>();
  p.hops = j.at("hops").get<std::vector<std::string>>();
  for (const auto& [ocs, arr] : j.at("per_ocs_configs").items()) {
    std::vector<InternalConnection> conns;
    for (const auto& c : arr) conns.push_back(connection_from_json(c));
    p.per_ocs_configs[ocs] = std::move(conns);
  }
  if (j.contains("links")) p.links = j.at("links").get<std::vector<std::string>>();
  if (j.contains("status")) p.status = status_from_string(j.at("status"));
  return p;
}

}  // namespace ocs::model
