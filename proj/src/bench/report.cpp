#include "fsd/bench/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>

#include "fsd/llr.hpp"
#include "fsd/mimo_model.hpp"
#include "fsd/oracle.hpp"
#include "fsd/qrd.hpp"

namespace fsd::bench {

ScheduleReport run_schedule_report(int parallelism, const NodeDistribution& dist, double clock_hz,
                                   int bits_per_symbol, int n_tx) {
  ScheduleReport report;
  report.parallelism = parallelism;
  report.clock_hz = clock_hz;
  report.schedule = arch::build_schedule(dist.levels(), parallelism, dist);
  report.visited_nodes = arch::scheduled_nodes(report.schedule);
  report.traversal_cycles = static_cast<int>(report.schedule.size());
  report.total_cycles = report.traversal_cycles + 1;
  report.rate = arch::throughput(clock_hz, bits_per_symbol, n_tx, report.total_cycles);
  report.hazards = arch::check_hazards(report.schedule, dist.levels());
  report.coverage_problems = arch::check_coverage(report.schedule, dist.levels());
  return report;
}

void print_schedule_report(const ScheduleReport& report, std::ostream& out) {
  out << std::left << std::setw(7) << "cycle" << std::setw(14) << "d_i" << std::setw(14) << "b_i"
      << "DE\n";
  for (const arch::ScheduleEntry& e : report.schedule) {
    out << std::left << std::setw(7) << e.cycle << std::setw(14) << arch::format_groups(e.d)
        << std::setw(14) << arch::format_groups(e.b) << arch::format_groups(e.de) << '\n';
  }
  char line[512];
  std::snprintf(line, sizeof line,
                "parallelism       %d nodes/cycle\n"
                "visited nodes     %zu\n"
                "traversal cycles  %d\n"
                "cycles/vector     %d (including restart)\n"
                "throughput        %.1f Mbps at %.1f MHz\n"
                "bits/cycle        %.3f\n",
                report.parallelism, report.visited_nodes, report.traversal_cycles, report.total_cycles,
                report.rate.bits_per_second / 1e6, report.clock_hz / 1e6, report.rate.bits_per_cycle);
  out << line;
  out << "hazards           " << report.hazards.size() << '\n';
  for (const auto& h : report.hazards) {
    out << "  cycle " << h.cycle << " " << h.unit << " " << arch::to_string(h.group) << ": "
        << arch::to_string(h.kind) << " (" << h.detail << ")\n";
  }
  for (const auto& p : report.coverage_problems) out << "  coverage: " << p << '\n';
}

LlrAudit run_llr_audit(const SimConfig& cfg, AuditList list) {
  validate(cfg);
  const Constellation c(cfg.bits_per_symbol);
  const int levels = 2 * cfg.n_tx;
  const std::size_t total = lattice_size(levels, c);  // rejects oversized configurations
  const NodeDistribution dist = NodeDistribution::parse(cfg.distribution, c.branches());
  const QrdMode mode = cfg.qrd_modes.front();

  CandidateList full;
  if (list == AuditList::kFullLattice) {
    full.resize(total);
    for (std::size_t i = 0; i < total; ++i) full[i].path = lattice_point(i, levels, c);
  }

  LlrAudit audit;
  for (double snr : cfg.snr_db) {
    const double noise_var = noise_variance_for_snr(snr, c, cfg.n_tx);
    LlrAuditSummary summary;
    summary.snr_db = snr;
    double dev_sum = 0.0;
    for (std::size_t f = 0; f < cfg.frames; ++f) {
      Rng rng(derive_seed(cfg.seed, f));
      const Bits bits = random_bits(rng, static_cast<std::size_t>(c.bits_per_symbol()) * cfg.n_tx);
      const TransmitFrame tx = map_bits(bits, c, cfg.n_tx);
      const ComplexChannel ch = generate_channel(rng, cfg.n_tx, cfg.n_rx);
      const RealSystem sys = realify(ch, apply_channel(ch, tx, noise_var, rng), noise_var);
      const QrdResult qrd = decompose(sys.h, mode);
      const Eigen::VectorXd y_zf = zf_transform(qrd, sys.y);
      const BitLayout layout{c, qrd.perm};

      CandidateList candidates;
      if (list == AuditList::kFullLattice) {
        const std::vector<double> metrics = lattice_metrics(qrd.r, y_zf, c);
        candidates = full;
        for (std::size_t i = 0; i < total; ++i) candidates[i].ped = metrics[i];
      } else {
        candidates = fsd_search(qrd.r, y_zf, dist, c).candidates;
      }
      const LlrVector approx = list_llr(candidates, layout, noise_var, {}, {cfg.l_max});
      const std::vector<double> truth = exhaustive_maxlog_llr(qrd.r, y_zf, noise_var, {}, layout);
      for (std::size_t k = 0; k < truth.size(); ++k) {
        LlrAuditRow row;
        row.frame = f;
        row.snr_db = snr;
        row.bit = static_cast<int>(k);
        row.list_llr = approx.values[k];
        row.oracle_llr = std::clamp(truth[k], -cfg.l_max, cfg.l_max);
        row.clamped = approx.status[k] == LlrStatus::kEmptySet;
        const double dev = std::abs(row.list_llr - row.oracle_llr);
        dev_sum += dev;
        summary.max_abs_dev = std::max(summary.max_abs_dev, dev);
        summary.clamped += row.clamped;
        ++summary.bits;
        audit.rows.push_back(row);
      }
    }
    summary.mean_abs_dev = summary.bits ? dev_sum / static_cast<double>(summary.bits) : 0.0;
    audit.summary.push_back(summary);
  }
  return audit;
}

void write_llr_audit_csv(const LlrAudit& audit, std::ostream& out) {
  out << "frame,snr_db,bit,list_llr,oracle_llr,abs_dev,clamped\n";
  char buf[160];
  for (const LlrAuditRow& r : audit.rows) {
    std::snprintf(buf, sizeof buf, "%zu,%.10g,%d,%.10g,%.10g,%.10g,%d\n", r.frame, r.snr_db, r.bit,
                  r.list_llr, r.oracle_llr, std::abs(r.list_llr - r.oracle_llr), r.clamped ? 1 : 0);
    out << buf;
  }
}

}  // namespace fsd::bench
