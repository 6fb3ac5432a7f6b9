// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

#include "ocs/scen/harness.hpp"

namespace ocs::scen {

struct Sample {
  std::string group;  // route, M, N... depending on the scenario
  std::string op;     // "create" | "release" | "rollback" | ...
  int run = 0;
  double seconds = 0.0;
};

std::string to_csv(const std::vector<Sample>& samples, const std::string& group_header);
double mean_of(const std::vector<Sample>& samples, const std::string& group,
               const std::string& op = "");
double max_of(const std::vector<Sample>& samples);

/// Fiber-path establishment and release per route on the five-OCS testbed.
struct PathControlResult {
  std::vector<Sample> samples;
  bool all_ok = true;
  std::string detail;
};
PathControlResult run_fig9(int runs_per_route, uint64_t seed);

/// Roll-back under M stopped devices on the longest route.
struct RollbackResult {
  std::vector<Sample> samples;  // op == "rollback"
  int runs = 0;
  int wrong_outcome = 0;        // create did not fail PathOperFailed
  int snapshot_mismatch = 0;    // a healthy device changed
  std::string detail;
};
RollbackResult run_fig10(int runs_per_m, uint64_t seed);

/// Automatic establishment upon signal detection, per route.
struct EventTimingResult {
  std::vector<Sample> samples;  // op == "detect-establish" / "alarm-restore"
  int runs = 0;
  int failures = 0;
  std::string detail;
};
EventTimingResult run_fig11a(int runs_per_route, uint64_t seed);

/// Automatic restoration upon signal degradation, cases R1->R2, R2->R3, R3->R1.
EventTimingResult run_fig11b(int runs_per_case, uint64_t seed);

/// Establishment/release on the 3N-4-node emulated network.
PathControlResult run_fig13(const std::vector<int>& route_sizes, int cycles, uint64_t seed);

/// Unified-vs-direct translation overhead per vendor and batch size.
struct OverheadSample {
  std::string vendor;
  int n_connections = 0;
  double direct_s = 0.0;
  double unified_s = 0.0;
  double overhead_s() const { return unified_s - direct_s; }
};
struct OverheadResult {
  std::vector<OverheadSample> zero_latency;   // medians at fixed(0)
  double latency_overhead_s = 0.0;            // at fixed(0.7), n=2
  double latency_total_s = 0.0;
  std::string detail;
};
OverheadResult run_overhead(int trials, uint64_t seed);

/// Every SERVER_DOWN subset of the 5-hop route: full intent or exact prior
/// state, never anything else.
struct AtomicityResult {
  int subsets_tested = 0;
  int violations = 0;
  std::string detail;
};
AtomicityResult run_atomicity_subsets(uint64_t seed);

/// 100 simultaneous detection events on a wide topology.
struct EventStormResult {
  int events_fired = 0;
  int actions_ok = 0;
  uint64_t received = 0;
  uint64_t dropped = 0;
  bool audit_clean = false;
  bool all_lit = false;
  std::string detail;
};
EventStormResult run_event_storm(int pairs, uint64_t seed);

}  // namespace ocs::scen
