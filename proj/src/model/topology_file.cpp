// SPDX-License-Identifier: Apache-2.0
#include "ocs/model/topology_file.hpp"

#include <yaml-cpp/yaml.h>

#include "ocs/errors.hpp"

namespace ocs::model {

namespace {

json yaml_to_json(const YAML::Node& n) {
  switch (n.Type()) {
    case YAML::NodeType::Null:
      return nullptr;
    case YAML::NodeType::Scalar: {
      // YAML scalars are untyped; try the narrower interpretations first
      const std::string& s = n.Scalar();
      try {
        return json(n.as<long long>());
      } catch (...) {
      }
      try {
        return json(n.as<double>());
      } catch (...) {
      }
      if (s == "true") return json(true);
      if (s == "false") return json(false);
      return json(s);
    }
    case YAML::NodeType::Sequence: {
      json arr = json::array();
      for (const auto& item : n) arr.push_back(yaml_to_json(item));
      return arr;
    }
    case YAML::NodeType::Map: {
      json obj = json::object();
      for (const auto& kv : n) obj[kv.first.as<std::string>()] = yaml_to_json(kv.second);
      return obj;
    }
    default:
      return nullptr;
  }
}

}  // namespace

Topology parse_topology_doc(const json& doc) {
  if (!doc.is_object())
    throw NbiError(ErrorCode::InvalidRange, "topology document must be an object");
  Topology t;
  for (const auto& s : doc.value("switches", json::array())) {
    OcsNode n;
    n.id = s.at("id").get<std::string>();
    n.conn.host = s.at("host").get<std::string>();
    n.conn.port = s.at("port").get<int>();
    n.tx_ports = s.at("tx_ports").get<std::set<std::string>>();
    n.rx_ports = s.at("rx_ports").get<std::set<std::string>>();
    if (!t.nodes.emplace(n.id, n).second)
      throw NbiError(ErrorCode::AlreadyExist, "duplicate switch id in file: " + n.id);
  }
  for (const auto& s : doc.value("terminals", json::array())) {
    Terminal term;
    term.id = s.at("id").get<std::string>();
    term.conn.host = s.at("host").get<std::string>();
    term.conn.port = s.at("port").get<int>();
    if (!t.terminals.emplace(term.id, term).second)
      throw NbiError(ErrorCode::AlreadyExist, "duplicate terminal id in file: " + term.id);
  }
  for (const auto& s : doc.value("links", json::array())) {
    FiberLink l;
    l.id = s.at("id").get<std::string>();
    l.src = s.at("src").get<std::string>();
    l.dst = s.at("dst").get<std::string>();
    l.src_port = s.at("src_port").get<std::string>();
    l.dst_port = s.at("dst_port").get<std::string>();
    if (!t.links.emplace(l.id, l).second)
      throw NbiError(ErrorCode::AlreadyExist, "duplicate link id in file: " + l.id);
  }
  return t;
}

Topology parse_topology_text(const std::string& text) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (!doc.is_discarded()) {
    try {
      return parse_topology_doc(doc);
    } catch (const NbiError&) {
      throw;
    } catch (const std::exception& e) {
      throw NbiError(ErrorCode::InvalidRange, std::string("topology file: ") + e.what());
    }
  }
  try {
    YAML::Node y = YAML::Load(text);
    return parse_topology_doc(yaml_to_json(y));
  } catch (const NbiError&) {
    throw;
  } catch (const std::exception& e) {
    throw NbiError(ErrorCode::InvalidRange,
                   std::string("topology file is neither valid JSON nor YAML: ") + e.what());
  }
}

json topology_to_doc(const Topology& t) {
  json switches = json::array(), terminals = json::array(), links = json::array();
  for (const auto& [id, n] : t.nodes) {
    switches.push_back(json{{"id", n.id},
                            {"host", n.conn.host},
                            {"port", n.conn.port},
                            {"tx_ports", n.tx_ports},
                            {"rx_ports", n.rx_ports}});
  }
  for (const auto& [id, term] : t.terminals) {
    terminals.push_back(
        json{{"id", term.id}, {"host", term.conn.host}, {"port", term.conn.port}});
  }
  for (const auto& [id, l] : t.links) {
    links.push_back(json{{"id", l.id},
                         {"src", l.src},
                         {"dst", l.dst},
                         {"src_port", l.src_port},
                         {"dst_port", l.dst_port}});
  }
  return json{{"switches", switches}, {"terminals", terminals}, {"links", links}};
}

}  // namespace ocs::model
