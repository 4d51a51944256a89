// fsd-sim: Monte Carlo and architecture reports for the fixed-complexity
// sphere decoder.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "fsd/arch/schedule.hpp"
#include "fsd/bench/config.hpp"
#include "fsd/bench/report.hpp"
#include "fsd/bench/sweep.hpp"
#include "fsd/errors.hpp"
#include "fsd/kernels/kernels.hpp"

namespace {

using fsd::bench::SimConfig;

struct SweepFlags {
  std::string config_file;
  std::string snr;
  std::size_t frames = 0;
  std::uint64_t seed = 0;
  std::string detector;
  std::string qrd;
  std::string dist;
  int parallelism = 4;
  int frac_bits = 7;
  double fx_scale = 0.25;
  int n_tx = 4;
  int n_rx = 4;
  int threads = 1;
  double l_max = 8.0;
  std::string out;
};

void add_config_flags(CLI::App* app, SweepFlags& f) {
  app->add_option("--config", f.config_file, "JSON config file; explicit flags override it");
  app->add_option("--snr", f.snr, "SNR points in dB: list '6,10,14' or range '0:20:5'");
  app->add_option("--frames", f.frames, "frames per SNR point");
  app->add_option("--seed", f.seed, "master seed");
  app->add_option("--detector", f.detector, "comma list of fsd|see-sd|exhaustive|fsd-fx");
  app->add_option("--qrd", f.qrd, "comma list of plain|sorted|sorted-min");
  app->add_option("--dist", f.dist, "node distribution, lowest level first (e.g. 1,1,1,1,1,1,4,4)");
  app->add_option("--parallelism", f.parallelism, "nodes per cycle of the fixed-point model (4|8)");
  app->add_option("--frac-bits", f.frac_bits, "fractional bits of the 12-bit datapath");
  app->add_option("--fx-scale", f.fx_scale, "input scale applied before quantization");
  app->add_option("--ntx", f.n_tx, "transmit antennas");
  app->add_option("--nrx", f.n_rx, "receive antennas");
  app->add_option("--threads", f.threads, "worker threads (output does not depend on it)");
  app->add_option("--l-max", f.l_max, "LLR magnitude limit");
  app->add_option("--out", f.out, "output CSV path (default stdout)");
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string token;
  while (std::getline(in, token, ',')) {
    if (!token.empty()) out.push_back(token);
  }
  return out;
}

SimConfig resolve(const CLI::App* app, const SweepFlags& f) {
  SimConfig cfg = f.config_file.empty() ? SimConfig{} : fsd::bench::load_config_file(f.config_file);
  auto given = [&](const char* name) { return app->get_option(name)->count() > 0; };
  if (given("--snr")) cfg.snr_db = fsd::bench::parse_snr_list(f.snr);
  if (given("--frames")) cfg.frames = f.frames;
  if (given("--seed")) cfg.seed = f.seed;
  if (given("--detector")) {
    cfg.detectors.clear();
    for (const auto& d : split(f.detector)) cfg.detectors.push_back(fsd::bench::parse_detector(d));
  }
  if (given("--qrd")) {
    cfg.qrd_modes.clear();
    for (const auto& q : split(f.qrd)) cfg.qrd_modes.push_back(fsd::parse_qrd_mode(q));
  }
  if (given("--dist")) cfg.distribution = f.dist;
  if (given("--parallelism")) cfg.parallelism = f.parallelism;
  if (given("--frac-bits")) cfg.frac_bits = f.frac_bits;
  if (given("--fx-scale")) cfg.fx_input_scale = f.fx_scale;
  if (given("--ntx")) cfg.n_tx = f.n_tx;
  if (given("--nrx")) cfg.n_rx = f.n_rx;
  if (given("--threads")) cfg.threads = f.threads;
  if (given("--l-max")) cfg.l_max = f.l_max;
  if (given("--out")) cfg.out_path = f.out;
  fsd::bench::validate(cfg);
  return cfg;
}

template <typename Fn>
void emit(const std::string& path, Fn&& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw fsd::Error("cannot open " + path + " for writing");
  write(out);
  out.flush();
  if (!out) throw fsd::Error("write to " + path + " failed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Fixed-complexity sphere decoder simulator (4x4 16-QAM real model by default).\n"
      "BER figures are uncoded hard-decision rates. SNR is the total received signal\n"
      "energy per receive antenna over N0 (n_tx * Es / N0, unit-variance Rayleigh channel,\n"
      "unnormalized 16-QAM with Es = 10). LLRs are positive for bit = 1."};
  app.require_subcommand(1);

  SweepFlags sweep_flags;
  bool audit_llr = false;
  CLI::App* sweep = app.add_subcommand("sweep", "BER sweep over SNR; writes one CSV row per point");
  add_config_flags(sweep, sweep_flags);
  sweep->add_flag("--audit-llr", audit_llr, "also report mean |list LLR - exhaustive LLR| on stderr");

  int sched_p = 4;
  std::string sched_dist = "1,1,1,1,1,1,4,4";
  double clock_mhz = 400.0;
  std::string trace_out;
  CLI::App* schedule = app.add_subcommand("schedule", "cycle schedule, hazards and throughput");
  schedule->add_option("--parallelism", sched_p, "nodes per cycle (4|8)");
  schedule->add_option("--dist", sched_dist, "node distribution, lowest level first");
  schedule->add_option("--clock-mhz", clock_mhz, "clock frequency in MHz");
  schedule->add_option("--trace-out", trace_out, "write cycle,d_group,b_group,de_group trace here");

  SweepFlags audit_flags;
  bool full_list = false;
  CLI::App* audit = app.add_subcommand("llr-audit", "per-bit list LLR vs exhaustive max-log LLR");
  add_config_flags(audit, audit_flags);
  audit->add_flag("--full-lattice", full_list, "use the whole lattice as the list (exact case)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sweep->parsed()) {
      const SimConfig cfg = resolve(sweep, sweep_flags);
      const auto stats = fsd::bench::run_sweep(cfg, {audit_llr});
      emit(cfg.out_path, [&](std::ostream& out) { fsd::bench::write_csv(stats, out); });
      if (audit_llr) {
        for (const auto& p : stats.points) {
          if (p.llr_mad) {
            std::cerr << p.snr_db << " dB " << fsd::bench::to_string(p.detector) << "/"
                      << fsd::to_string(p.qrd) << ": mean |dLLR| = " << *p.llr_mad << '\n';
          }
        }
      }
      const auto problems = fsd::bench::check_sweep_invariants(stats);
      for (const auto& p : problems) std::cerr << "invariant violated: " << p << '\n';
      return problems.empty() ? 0 : 3;
    }
    if (schedule->parsed()) {
      const fsd::NodeDistribution dist = fsd::NodeDistribution::parse(sched_dist, 4);
      const auto report = fsd::bench::run_schedule_report(sched_p, dist, clock_mhz * 1e6);
      fsd::bench::print_schedule_report(report, std::cout);
      if (!trace_out.empty()) {
        emit(trace_out, [&](std::ostream& out) { out << fsd::arch::trace_csv(report.schedule); });
      }
      return report.hazards.empty() && report.coverage_problems.empty() ? 0 : 3;
    }
    if (audit->parsed()) {
      const SimConfig cfg = resolve(audit, audit_flags);
      const auto result = fsd::bench::run_llr_audit(
          cfg, full_list ? fsd::bench::AuditList::kFullLattice : fsd::bench::AuditList::kFsd);
      emit(cfg.out_path, [&](std::ostream& out) { fsd::bench::write_llr_audit_csv(result, out); });
      for (const auto& s : result.summary) {
        std::cerr << s.snr_db << " dB: bits=" << s.bits << " mean|dev|=" << s.mean_abs_dev
                  << " max|dev|=" << s.max_abs_dev << " clamped=" << s.clamped << '\n';
      }
      return 0;
    }
  } catch (const fsd::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
