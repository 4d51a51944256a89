#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fsd/bench/config.hpp"

namespace fsd::bench {

struct BerPoint {
  double snr_db = 0.0;
  Detector detector = Detector::kFsd;
  QrdMode qrd = QrdMode::kSorted;
  std::size_t frames = 0;
  std::size_t bits = 0;
  std::size_t bit_errors = 0;
  double ber = 0.0;
  std::optional<double> ml_in_list_rate;  // list detectors only
  double mean_visited_nodes = 0.0;
  std::optional<double> fx_agree_rate;  // fsd-fx only
  std::optional<double> llr_mad;        // list detectors, when audit_llr is set
};

struct BerStats {
  std::vector<BerPoint> points;  // SNR-major, then qrd, then detector, config order
  std::uint64_t seed = 0;
  std::string config_hash;
};

struct SweepOptions {
  // Also measure the mean |list LLR - exhaustive LLR| per list-detector row.
  bool audit_llr = false;
};

// Monte Carlo sweep with paired realizations: frame f draws bits, channel and a
// unit noise vector from derive_seed(seed, f); every SNR point, QRD mode and
// detector sees those same draws.
BerStats run_sweep(const SimConfig& cfg, const SweepOptions& options = {});

inline constexpr const char* kCsvHeader =
    "snr_db,detector,qrd,frames,bits,bit_errors,ber,ml_in_list_rate,mean_visited_nodes,"
    "fx_agree_rate,seed,config_hash";

void write_csv(const BerStats& stats, std::ostream& out);
// Throws fsd::Error naming the path on I/O failure.
void write_csv_file(const BerStats& stats, const std::filesystem::path& path);

// sqrt(p (1 - p) / n).
double binomial_sigma(double p, std::size_t n);

// Counter consistency, BER non-increasing in SNR per (detector, qrd) within two
// standard deviations, and identical errors for the two exact ML detectors.
std::vector<std::string> check_sweep_invariants(const BerStats& stats);

}  // namespace fsd::bench
