// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ocs/emu/emulator.hpp"
#include "ocs/sbi/protocol.hpp"

namespace ocs::xlat {

using model::InternalConnection;

/// Vendor rejected an operation or replied with garbage.
struct VendorError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Vendor codec: renders unified-model operations as one vendor's wire
/// lines and parses that vendor's replies and asynchronous events. New
/// vendors plug in by implementing this interface; nothing north of the
/// translator changes.
class Converter {
 public:
  virtual ~Converter() = default;
  virtual std::string tag() const = 0;

  /// One wire line per cross-connect op, creates before deletes.
  virtual std::vector<std::string> edit_lines(
      const std::vector<InternalConnection>& creates,
      const std::vector<std::string>& deletes) const = 0;

  /// Parses an OK/ERR-style result line; returns ok flag, fills err.
  virtual bool parse_result(const std::string& line, std::string& err) const = 0;

  virtual std::string list_query() const = 0;
  /// Pulls reply lines until the vendor's list is complete.
  /// `next_line` yields nullopt on timeout/disconnect. Throws VendorError.
  virtual std::vector<InternalConnection> read_list(
      const std::function<std::optional<std::string>()>& next_line) const = 0;

  virtual std::string monitor_line(const sbi::MonitorConfig& m) const = 0;
  /// One or more command lines (vendors differ on thresholds-per-command).
  virtual std::vector<std::string> alarm_lines(const sbi::AlarmConfig& a) const = 0;
  virtual std::string power_query(const std::string& port) const = 0;
  virtual bool parse_power_reply(const std::string& line, double& dbm,
                                 std::string& err) const = 0;

  virtual bool is_event_line(const std::string& line) const = 0;
  virtual std::optional<sbi::Notification> parse_event(const std::string& line) const = 0;

  static std::unique_ptr<Converter> make(emu::Vendor v);
};

}  // namespace ocs::xlat
