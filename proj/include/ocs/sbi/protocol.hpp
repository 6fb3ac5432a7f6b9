// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ocs/model/types.hpp"

namespace ocs::sbi {

using model::InternalConnection;
using model::json;

/// Threshold values accepted anywhere in the system, in dBm.
constexpr double kMinThresholdDbm = -99.0;
constexpr double kMaxThresholdDbm = 30.0;

/// Power level reported for a dark (unlit) port.
constexpr double kDarkDbm = -99.0;

inline bool threshold_in_range(double dbm) {
  return dbm >= kMinThresholdDbm && dbm <= kMaxThresholdDbm;
}

struct MonitorConfig {
  std::string port;
  bool enabled = true;
  std::optional<double> wavelength_nm;
};

struct AlarmConfig {
  std::string port;
  std::optional<double> high_dbm;
  std::optional<double> low_dbm;
};

/// One grouped edit-config payload: the full set of changes a device
/// receives for one operation.
struct EditPayload {
  std::vector<InternalConnection> creates;
  std::vector<std::string> deletes;
  std::vector<MonitorConfig> monitors;
  std::vector<AlarmConfig> alarms;

  bool empty() const {
    return creates.empty() && deletes.empty() && monitors.empty() && alarms.empty();
  }
};

struct PowerReading {
  std::string port;
  double dbm = kDarkDbm;
};

/// The state leaf snapshot: what the device actually applied.
struct DeviceState {
  std::vector<InternalConnection> connections;
  std::vector<PowerReading> power;
};

enum class NotifKind { SIGNAL_DETECTED, SIGNAL_DEGRADED };

inline const char* to_string(NotifKind k) {
  return k == NotifKind::SIGNAL_DETECTED ? "signal-detected" : "signal-degraded";
}

struct Notification {
  std::string device_id;  // filled by the receiving session
  std::string port;
  NotifKind kind = NotifKind::SIGNAL_DETECTED;
  double measured_dbm = kDarkDbm;
  double ts = 0.0;
};

json edit_payload_to_json(const EditPayload& p);
EditPayload edit_payload_from_json(const json& j);
json device_state_to_json(const DeviceState& s);
DeviceState device_state_from_json(const json& j);
json notification_to_json(const Notification& n);
Notification notification_from_json(const json& j);

/// Seconds since the unix epoch, sub-millisecond resolution.
double unix_now();

}  // namespace ocs::sbi
