// SPDX-License-Identifier: Apache-2.0
#include "ocs/nbi/server.hpp"

namespace ocs::nbi {

using model::json;

namespace {

std::string need_string(const json& params, const char* key) {
  if (!params.contains(key) || !params.at(key).is_string())
    throw NbiError(ErrorCode::InvalidRange, std::string("missing parameter: ") + key);
  return params.at(key).get<std::string>();
}

double need_number(const json& params, const char* key) {
  if (!params.contains(key) || !params.at(key).is_number())
    throw NbiError(ErrorCode::InvalidRange, std::string("missing parameter: ") + key);
  return params.at(key).get<double>();
}

model::ConnInfo need_conn(const json& params) {
  if (!params.contains("conn_info") || !params.at("conn_info").is_object())
    throw NbiError(ErrorCode::InvalidRange, "missing parameter: conn_info");
  const auto& c = params.at("conn_info");
  model::ConnInfo conn;
  conn.host = c.value("host", "");
  conn.port = c.value("port", 0);
  return conn;
}

std::optional<std::string> opt_string(const json& params, const char* key) {
  if (!params.contains(key) || params.at(key).is_null()) return std::nullopt;
  return params.at(key).get<std::string>();
}

std::optional<std::vector<std::string>> opt_list(const json& params, const char* key) {
  if (!params.contains(key) || params.at(key).is_null()) return std::nullopt;
  if (!params.at(key).is_array())
    throw NbiError(ErrorCode::InvalidRange, std::string(key) + " must be a list");
  return params.at(key).get<std::vector<std::string>>();
}

const json kAck = json{{"ack", true}};

}  // namespace

NbiServer::NbiServer(Controller& ctrl) : ctrl_(ctrl) {}

const std::vector<std::string>& NbiServer::table1_methods() {
  static const std::vector<std::string> methods = {
      "AddSwitch",       "AddTerminal",        "AddLink",
      "CreateNetwork",   "UpdateResourceStatus",
      "CreateFiberPath", "DeleteFiberPath",    "RestoreFiberPath",
      "UpdatePathAvailability",
      "AddEvent",        "CreateAction",       "DeleteAction",
      "CreateEventHandler", "CreateAlarmHandler"};
  return methods;
}

json NbiServer::dispatch(const std::string& method, const json& params) {
  if (method == "AddSwitch") {
    model::OcsNode node;
    node.id = need_string(params, "ocs_id");
    node.conn = need_conn(params);
    if (!params.contains("tx_ports") || !params.contains("rx_ports"))
      throw NbiError(ErrorCode::InvalidRange, "tx_ports and rx_ports are required");
    node.tx_ports = params.at("tx_ports").get<std::set<std::string>>();
    node.rx_ports = params.at("rx_ports").get<std::set<std::string>>();
    ctrl_.add_switch(node);
    return kAck;
  }
  if (method == "AddTerminal") {
    model::Terminal t;
    t.id = need_string(params, "terminal_id");
    t.conn = need_conn(params);
    ctrl_.add_terminal(t);
    return kAck;
  }
  if (method == "AddLink") {
    model::FiberLink l;
    l.id = need_string(params, "link_id");
    l.src = need_string(params, "src");
    l.dst = need_string(params, "dst");
    l.src_port = need_string(params, "src_port");
    l.dst_port = need_string(params, "dst_port");
    ctrl_.add_link(l);
    return kAck;
  }
  if (method == "CreateNetwork") {
    if (!params.contains("topology_file"))
      throw NbiError(ErrorCode::InvalidRange, "missing parameter: topology_file");
    const auto& tf = params.at("topology_file");
    ctrl_.create_network(tf.is_string() ? tf.get<std::string>() : tf.dump());
    return kAck;
  }
  if (method == "UpdateResourceStatus") {
    ctrl_.update_resource_status(need_string(params, "object_id"),
                                 need_string(params, "object_type"),
                                 need_string(params, "status"));
    return kAck;
  }
  if (method == "CreateFiberPath") {
    return ctrl_.create_fiber_path(need_string(params, "svc_id"), need_string(params, "a"),
                                   need_string(params, "z"), opt_string(params, "pce_alg"),
                                   opt_list(params, "ocs_list"));
  }
  if (method == "DeleteFiberPath") {
    ctrl_.delete_fiber_path(need_string(params, "svc_id"));
    return kAck;
  }
  if (method == "RestoreFiberPath") {
    return ctrl_.restore_fiber_path(need_string(params, "svc_id"), need_string(params, "a"),
                                    need_string(params, "z"), opt_string(params, "pce_alg"),
                                    opt_list(params, "ocs_list"));
  }
  if (method == "UpdatePathAvailability") {
    ctrl_.update_path_availability(need_string(params, "svc_id"),
                                   need_string(params, "status"));
    return kAck;
  }
  if (method == "AddEvent") {
    ctrl_.add_event(need_string(params, "event_id"), need_string(params, "event_type"),
                    need_string(params, "ocs"), need_string(params, "port"),
                    need_number(params, "threshold"));
    return kAck;
  }
  if (method == "CreateAction") {
    ctrl_.create_action(need_string(params, "act_id"), need_string(params, "svc_id"),
                        need_string(params, "a"), need_string(params, "z"),
                        opt_string(params, "pce_alg"), opt_list(params, "ocs_list"));
    return kAck;
  }
  if (method == "DeleteAction") {
    ctrl_.delete_action(need_string(params, "act_id"), need_string(params, "svc_id"));
    return kAck;
  }
  if (method == "CreateEventHandler") {
    ctrl_.create_event_handler(need_string(params, "event_id"),
                               need_string(params, "act_id"));
    return kAck;
  }
  if (method == "CreateAlarmHandler") {
    ctrl_.create_alarm_handler(need_string(params, "svc_id"), need_string(params, "act_id"));
    return kAck;
  }
  // administrative queries, outside the Table-1 surface
  if (method == "admin.reconcile_report") return ctrl_.reconcile_report();
  if (method == "admin.audit") return ctrl_.audit();
  throw NbiError(ErrorCode::NotFound, "unknown method: " + method);
}

void NbiServer::handle(net::LineSocket& s) {
  while (auto line = s.read_line()) {
    json req = json::parse(*line, nullptr, false);
    int64_t id = 0;
    if (!req.is_discarded() && req.contains("id") && req.at("id").is_number_integer())
      id = req.at("id").get<int64_t>();
    json response;
    if (req.is_discarded() || !req.contains("method") || !req.at("method").is_string()) {
      response = json{{"id", id},
                      {"error",
                       {{"code", to_string(ErrorCode::InvalidRange)},
                        {"message", "malformed request frame"}}}};
    } else {
      try {
        json result = dispatch(req.at("method").get<std::string>(),
                               req.value("params", json::object()));
        response = json{{"id", id}, {"result", result}};
      } catch (const NbiError& e) {
        response = json{
            {"id", id}, {"error", {{"code", to_string(e.code())}, {"message", e.what()}}}};
      } catch (const std::exception& e) {
        response = json{{"id", id},
                        {"error",
                         {{"code", to_string(ErrorCode::PathOperFailed)},
                          {"message", e.what()}}}};
      }
    }
    if (!s.write_line(response.dump())) break;
  }
}

void NbiServer::start(int port) {
  server_.start(port, [this](net::LineSocket& s) { handle(s); });
}

void NbiServer::stop() { server_.stop(); }

}  // namespace ocs::nbi
