// SPDX-License-Identifier: Apache-2.0
#include "ocs/render/renderer.hpp"

#include <algorithm>
#include <set>
#include <thread>

namespace ocs::render {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

OcsRenderer::OcsRenderer(SessionProvider sessions, UnavailableMarker mark_unavailable)
    : sessions_(std::move(sessions)), mark_unavailable_(std::move(mark_unavailable)) {}

ConfigPayload OcsRenderer::invert(const ConfigPayload& forward,
                                  const std::vector<model::InternalConnection>& original) {
  ConfigPayload rev;
  rev.ocs_id = forward.ocs_id;
  for (const auto& c : forward.connections_to_create) rev.connections_to_delete.push_back(c.name);
  for (const auto& name : forward.connections_to_delete) {
    auto it = std::find_if(original.begin(), original.end(),
                           [&](const auto& c) { return c.name == name; });
    if (it != original.end()) rev.connections_to_create.push_back(*it);
  }
  return rev;
}

sbi::EditPayload OcsRenderer::to_edit(const ConfigPayload& p) {
  sbi::EditPayload e;
  e.creates = p.connections_to_create;
  e.deletes = p.connections_to_delete;
  return e;
}

bool OcsRenderer::sanity_check(sbi::SbiSession& session, const ConfigPayload& intended) {
  auto state = session.get_state();
  std::set<model::InternalConnection> actual(state.connections.begin(),
                                             state.connections.end());
  std::set<std::string> actual_names;
  for (const auto& c : state.connections) actual_names.insert(c.name);
  for (const auto& c : intended.connections_to_create) {
    if (!actual.count(c)) return false;
  }
  for (const auto& name : intended.connections_to_delete) {
    if (actual_names.count(name)) return false;
  }
  return true;
}

RenderMetrics OcsRenderer::execute_atomic(AtomicCommand& cmd) {
  RenderMetrics m;
  const auto t0 = Clock::now();
  std::mutex mm;

  // execute phase: one task per device, settle before any revert
  {
    std::vector<std::thread> workers;
    workers.reserve(cmd.commands.size());
    for (auto& c : cmd.commands) {
      workers.emplace_back([&, t0] {
        try {
          auto& session = sessions_(c.ocs_id);
          session.edit_config(to_edit(c.forward), cmd.deadline);
          if (!sanity_check(session, c.forward))
            throw sbi::RpcError(c.ocs_id + ": state does not match configuration");
          c.outcome = OcsCommand::Outcome::SUCCEEDED;
        } catch (const std::exception& e) {
          c.outcome = OcsCommand::Outcome::FAILED;
          c.error = e.what();
          std::lock_guard lk(mm);
          if (m.first_failure_s < 0) m.first_failure_s = since(t0);
        }
      });
    }
    for (auto& w : workers) w.join();
  }

  const bool all_ok = std::all_of(cmd.commands.begin(), cmd.commands.end(), [](const auto& c) {
    return c.outcome == OcsCommand::Outcome::SUCCEEDED;
  });
  if (all_ok) {
    m.wall_s = since(t0);
    std::lock_guard lk(metrics_mu_);
    last_ = m;
    return m;
  }

  // revert phase: undo every command that applied, concurrently
  m.revert_start_s = since(t0);
  {
    std::vector<std::thread> workers;
    for (auto& c : cmd.commands) {
      if (c.outcome != OcsCommand::Outcome::SUCCEEDED) continue;
      workers.emplace_back([&] {
        try {
          auto& session = sessions_(c.ocs_id);
          session.edit_config(to_edit(c.revert), cmd.deadline);
          c.outcome = OcsCommand::Outcome::REVERTED;
        } catch (const std::exception& e) {
          c.revert_failed = true;
          c.error = e.what();
        }
      });
    }
    for (auto& w : workers) w.join();
  }
  m.revert_end_s = since(t0);
  m.wall_s = since(t0);

  std::vector<std::string> failed, revert_failed;
  std::string detail;
  for (const auto& c : cmd.commands) {
    if (c.outcome == OcsCommand::Outcome::FAILED) {
      failed.push_back(c.ocs_id);
      if (!detail.empty()) detail += "; ";
      detail += c.ocs_id + ": " + c.error;
    }
    if (c.revert_failed) revert_failed.push_back(c.ocs_id);
  }
  for (const auto& id : failed) mark_unavailable_(id);
  for (const auto& id : revert_failed) mark_unavailable_(id);
  {
    std::lock_guard lk(metrics_mu_);
    last_ = m;
  }
  throw PathOperError("configuration failed on [" + detail + "]", std::move(failed),
                      std::move(revert_failed));
}

RenderMetrics OcsRenderer::last_metrics() const {
  std::lock_guard lk(metrics_mu_);
  return last_;
}

}  // namespace ocs::render
