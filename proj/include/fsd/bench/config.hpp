#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fsd/qrd.hpp"

namespace fsd::bench {

enum class Detector { kFsd, kSeeSd, kExhaustive, kFsdFx };

const char* to_string(Detector d);
Detector parse_detector(std::string_view text);

struct SimConfig {
  int n_tx = 4;
  int n_rx = 4;
  int bits_per_symbol = 4;
  std::string distribution = "1,1,1,1,1,1,4,4";
  std::vector<Detector> detectors{Detector::kFsd};
  std::vector<QrdMode> qrd_modes{QrdMode::kSorted};
  std::vector<double> snr_db{0.0, 5.0, 10.0, 15.0, 20.0};
  std::size_t frames = 1000;
  std::uint64_t seed = 1;
  int frac_bits = 7;
  int parallelism = 4;
  double fx_input_scale = 0.25;
  double l_max = 8.0;
  int threads = 1;
  std::string out_path;  // empty: stdout
};

// Throws ConfigError naming the first offending field.
void validate(const SimConfig& cfg);

// JSON object whose keys mirror the CLI flags (snr, frames, seed, detector,
// qrd, dist, parallelism, frac_bits, out, ...). Missing keys keep defaults.
SimConfig load_config_file(const std::filesystem::path& path);
SimConfig config_from_json_text(std::string_view text);
std::string config_to_json(const SimConfig& cfg);

// FNV-1a of the canonical JSON of every result-affecting field, 16 hex digits.
std::string config_hash(const SimConfig& cfg);

// "6,10,14" or "0:20:5" (start:stop:step, inclusive).
std::vector<double> parse_snr_list(std::string_view text);

}  // namespace fsd::bench
