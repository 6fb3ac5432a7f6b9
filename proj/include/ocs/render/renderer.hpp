// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <functional>
#include <mutex>
#include <string>
#include <vector>

#include "ocs/errors.hpp"
#include "ocs/model/types.hpp"
#include "ocs/sbi/session.hpp"

namespace ocs::render {

using model::ConfigPayload;

/// One device's configuration wrapped with its exact inverse, so a failed
/// fiber-path operation can be undone on every device that applied it.
struct OcsCommand {
  std::string ocs_id;
  ConfigPayload forward;
  ConfigPayload revert;

  enum class Outcome { PENDING, SUCCEEDED, FAILED, REVERTED };
  Outcome outcome = Outcome::PENDING;
  std::string error;
  bool revert_failed = false;
};

struct AtomicCommand {
  std::vector<OcsCommand> commands;
  /// Per-command deadline; shared with the SBI RPC timeout.
  std::chrono::milliseconds deadline{3000};
};

/// Wall-clock breakdown of one execute_atomic run, for the timing criteria.
/// Times are seconds relative to the start of execution.
struct RenderMetrics {
  double wall_s = 0.0;
  double first_failure_s = -1.0;  // first command failure detected
  double revert_start_s = -1.0;   // all commands settled, revert phase begins
  double revert_end_s = -1.0;     // last revert ack

  /// Duration of the roll-back operation itself.
  double rollback_s() const {
    return revert_end_s < 0 ? -1.0 : revert_end_s - revert_start_s;
  }
};

/// Raised when an atomic configuration failed; carries which devices failed
/// to execute and which failed to revert.
class PathOperError : public NbiError {
 public:
  PathOperError(std::string message, std::vector<std::string> failed,
                std::vector<std::string> revert_failed)
      : NbiError(ErrorCode::PathOperFailed, std::move(message)),
        failed_(std::move(failed)),
        revert_failed_(std::move(revert_failed)) {}

  const std::vector<std::string>& failed_ids() const { return failed_; }
  const std::vector<std::string>& revert_failed_ids() const { return revert_failed_; }

 private:
  std::vector<std::string> failed_;
  std::vector<std::string> revert_failed_;
};

/// Executes grouped per-OCS payloads concurrently with all-or-nothing
/// semantics: either every command succeeds (including its post-apply sanity
/// check) or every applied command is reverted and PathOperFailed is raised.
class OcsRenderer {
 public:
  using SessionProvider = std::function<sbi::SbiSession&(const std::string& ocs_id)>;
  using UnavailableMarker = std::function<void(const std::string& ocs_id)>;

  OcsRenderer(SessionProvider sessions, UnavailableMarker mark_unavailable);

  /// Builds the inverse payload: creations become deletions and vice versa.
  /// Deleted connections are reconstructed from `original` (the connections
  /// the path being deleted had on this device).
  static ConfigPayload invert(const ConfigPayload& forward,
                              const std::vector<model::InternalConnection>& original);

  static sbi::EditPayload to_edit(const ConfigPayload& p);

  /// Throws PathOperError on failure; per-command outcomes are left in cmd.
  RenderMetrics execute_atomic(AtomicCommand& cmd);

  /// Reads the device state and verifies the payload took effect: created
  /// connections present verbatim, deleted names absent.
  static bool sanity_check(sbi::SbiSession& session, const ConfigPayload& intended);

  RenderMetrics last_metrics() const;

 private:
  SessionProvider sessions_;
  UnavailableMarker mark_unavailable_;
  mutable std::mutex metrics_mu_;
  RenderMetrics last_;
};

}  // namespace ocs::render
