#pragma once

#include <cstddef>
#include <filesystem>
#include <ostream>
#include <vector>

#include "fsd/arch/schedule.hpp"
#include "fsd/arch/simulator.hpp"
#include "fsd/bench/config.hpp"

namespace fsd::bench {

struct ScheduleReport {
  int parallelism = 4;
  double clock_hz = 0.0;
  arch::Schedule schedule;
  std::size_t visited_nodes = 0;
  int traversal_cycles = 0;
  int total_cycles = 0;  // N_c
  arch::Throughput rate;
  std::vector<arch::Hazard> hazards;
  std::vector<std::string> coverage_problems;
};

ScheduleReport run_schedule_report(int parallelism, const NodeDistribution& dist, double clock_hz,
                                   int bits_per_symbol = 4, int n_tx = 4);

// Cycle table followed by the summary lines.
void print_schedule_report(const ScheduleReport& report, std::ostream& out);

enum class AuditList { kFsd, kFullLattice };

struct LlrAuditRow {
  std::size_t frame = 0;
  double snr_db = 0.0;
  int bit = 0;
  double list_llr = 0.0;
  double oracle_llr = 0.0;  // exhaustive value limited to +-l_max
  bool clamped = false;     // a hypothesis set was empty in the list
};

struct LlrAuditSummary {
  double snr_db = 0.0;
  std::size_t bits = 0;
  double mean_abs_dev = 0.0;
  double max_abs_dev = 0.0;
  std::size_t clamped = 0;
};

struct LlrAudit {
  std::vector<LlrAuditRow> rows;
  std::vector<LlrAuditSummary> summary;  // one per SNR
};

// Per-bit comparison of list LLRs (FSD list, or the full lattice as a list)
// against the exhaustive max-log oracle. Uses the first QRD mode of `cfg`.
LlrAudit run_llr_audit(const SimConfig& cfg, AuditList list);

void write_llr_audit_csv(const LlrAudit& audit, std::ostream& out);

}  // namespace fsd::bench
