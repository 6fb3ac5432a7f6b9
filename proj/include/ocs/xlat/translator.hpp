// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>

#include "ocs/net/server.hpp"
#include "ocs/xlat/vendor_client.hpp"

namespace ocs::xlat {

/// Per-device protocol bridge: serves the unified SBI on its north port and
/// drives exactly one vendor device through a pluggable converter. Runs
/// in-process next to the controller by default but binds a TCP port either
/// way, so it can be deployed standalone unchanged.
class Translator {
 public:
  Translator(std::string device_id, emu::Vendor vendor, model::ConnInfo vendor_target);
  ~Translator();

  void start(int north_port = 0);
  void stop();
  int north_port() const { return north_.port(); }
  const std::string& device_id() const { return device_id_; }

 private:
  void handle_north(net::LineSocket& s);
  model::json do_edit_config(const model::json& payload);
  model::json do_get();
  void on_vendor_event(const sbi::Notification& n);

  std::string device_id_;
  VendorClient client_;

  // YANG-style datastore: the unified config intent, the serialization point
  std::mutex ds_mu_;
  std::map<std::string, model::InternalConnection> ds_connections_;
  std::map<std::string, sbi::MonitorConfig> ds_monitors_;
  std::map<std::string, sbi::AlarmConfig> ds_alarms_;

  net::Server north_;
  std::mutex subs_mu_;
  std::set<net::LineSocket*> subs_;
};

}  // namespace ocs::xlat
