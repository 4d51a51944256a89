#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fsd/arch/fixed_word.hpp"
#include "fsd/arch/schedule.hpp"
#include "fsd/fsd_core.hpp"

namespace fsd::arch {

inline constexpr int kListSize = kColumns * kGroupSize;  // 16 candidates

// Detector inputs after the load-time quantization.
struct FxInputs {
  int levels = 0;
  std::vector<FixedWord> r;  // row-major levels x levels
  std::vector<FixedWord> y;  // y_zf
  int load_saturations = 0;

  FixedWord r_at(int i, int j) const { return r[static_cast<std::size_t>(i) * levels + j]; }
};

// Scales R and y_zf by `scale` (same factor, so the search is unchanged up to
// rounding) and rounds them to 12-bit words.
FxInputs quantize_inputs(const Eigen::MatrixXd& r, const Eigen::VectorXd& y_zf, int frac_bits,
                         double scale);

struct FlipFlops {
  int path_history = 0;
  int b_cache = 0;
  int ped_cache = 0;
};

// Storage of the datapath. The top two levels of every path are fixed by the
// entry position and therefore not stored.
struct CacheModel {
  explicit CacheModel(int levels = 8);

  int stored_levels() const { return levels - 2; }
  std::int8_t& path(int entry, int level) { return path_history[entry * stored_levels() + level]; }
  std::int8_t path(int entry, int level) const {
    return path_history[entry * stored_levels() + level];
  }

  FlipFlops flip_flops() const;

  int levels;
  std::vector<std::int8_t> path_history;  // kListSize x (levels - 2) symbols, 2 bits each
  std::vector<FixedWord> b_cache;         // kListSize
  std::vector<FixedWord> ped_cache;       // kListSize
};

struct FxCandidate {
  SymbolVector path;
  FixedWord ped;
};

struct CycleStats {
  int parallelism = 4;
  int traversal_cycles = 0;
  int total_cycles = 0;  // N_c, traversal plus one restart cycle
  std::size_t visited_nodes = 0;
  Schedule task_log;
  int load_saturations = 0;
};

struct SimResult {
  std::vector<FxCandidate> candidates;  // same order as fsd_search
  CycleStats stats;
  std::vector<CacheModel> trace;  // cache state after each cycle, when requested
};

struct ArchConfig {
  int parallelism = 4;
  int frac_bits = kDefaultFracBits;
  double input_scale = 0.25;
  bool record_trace = false;
};

// Cycle-by-cycle execution of the breadth-first schedule over the cache model.
// Reads within a cycle see the state left by the previous cycle; writes commit
// at the end of the cycle.
SimResult simulate(const Eigen::MatrixXd& r, const Eigen::VectorXd& y_zf,
                   const NodeDistribution& dist, const ArchConfig& config = {});

// Same on pre-quantized inputs with an explicit (possibly hand-edited) schedule.
SimResult simulate_schedule(const FxInputs& inputs, const Schedule& schedule, int parallelism,
                            bool record_trace = false);

// Smallest raw PED, earliest on ties.
std::size_t best_fx_candidate(std::span<const FxCandidate> list);
Bits fx_hard_decision(std::span<const FxCandidate> list, std::span<const int> perm,
                      const Constellation& c);

// Converts to a floating CandidateList (PEDs divided back by scale^2).
CandidateList to_candidate_list(std::span<const FxCandidate> list, double input_scale);

struct Throughput {
  double bits_per_second = 0.0;
  double bits_per_cycle = 0.0;
};

// f_c * M * N_t / N_c.
Throughput throughput(double clock_hz, int bits_per_symbol, int n_tx, int cycles);

}  // namespace fsd::arch
