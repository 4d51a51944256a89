#pragma once

// Ground-truth detectors used to grade the fixed-complexity search.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fsd/fsd_core.hpp"
#include "fsd/mimo_model.hpp"

namespace fsd {

// Exhaustive routines refuse lattices larger than this.
inline constexpr std::size_t kMaxLatticePoints = std::size_t{1} << 20;

struct MlSolution {
  SymbolVector path;  // detection (permuted) order, path[k] = level k
  double ped = 0.0;
  std::size_t visited_nodes = 0;
};

// How bits are read off a detection-order path.
struct BitLayout {
  Constellation constellation;
  std::vector<int> perm;  // from QrdResult
};

// N_b^n, or throws ConfigError above kMaxLatticePoints.
std::size_t lattice_size(int levels, const Constellation& c);

// Lattice point `index`; the top level is the most significant base-N_b digit,
// so increasing index is lexicographic order from the top level down.
SymbolVector lattice_point(std::size_t index, int levels, const Constellation& c);

// ||y_zf - R s||^2 for every lattice point in index order, via the active
// data-parallel kernel.
std::vector<double> lattice_metrics(const Eigen::MatrixXd& r, const Eigen::VectorXd& y_zf,
                                    const Constellation& c);

// Global minimum over the full lattice; lowest index wins ties.
MlSolution exhaustive_ml(const Eigen::MatrixXd& r, const Eigen::VectorXd& y_zf,
                         const Constellation& c);

// Depth-first Schnorr-Euchner sphere decoder with radius update at each leaf.
// Returns the same path as exhaustive_ml; visited_nodes counts nodes whose PED
// did not exceed the radius at the time they were reached.
MlSolution see_sd(const Eigen::MatrixXd& r, const Eigen::VectorXd& y_zf, const Constellation& c);

// List sphere decoder: the radius stays infinite until `k` leaves are held,
// then tracks the k-th best. Returns the k smallest-PED lattice points sorted
// by (PED, index).
CandidateList see_lsd(const Eigen::MatrixXd& r, const Eigen::VectorXd& y_zf,
                      const Constellation& c, std::size_t k);

// Max-log LLR of every frame bit over the full lattice. Bits map 0 -> -1 and
// 1 -> +1; a positive value favours bit = 1. `prior` may be empty (all zero).
std::vector<double> exhaustive_maxlog_llr(const Eigen::MatrixXd& r, const Eigen::VectorXd& y_zf,
                                          double noise_var, std::span<const double> prior,
                                          const BitLayout& layout);

}  // namespace fsd
