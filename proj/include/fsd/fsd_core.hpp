#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "fsd/mimo_model.hpp"

namespace fsd {

// Number of children kept per surviving path at each tree level.
//
// Entries are stored lowest level first, so the textual form "1,1,1,1,1,1,4,4"
// fully expands the two highest levels. Every entry is 1 or N_b.
class NodeDistribution {
 public:
  NodeDistribution(std::vector<int> counts_lowest_first, int branches);

  // {1, ..., 1, N_b, N_b}; requires at least two levels.
  static NodeDistribution standard(int levels, int branches);
  // Accepts "1,1,1,1,1,1,4,4" or "11111144".
  static NodeDistribution parse(std::string_view text, int branches);

  int levels() const { return static_cast<int>(counts_.size()); }
  int branches() const { return branches_; }
  int count(int level) const { return counts_.at(level); }
  bool is_full(int level) const { return counts_.at(level) == branches_; }

  // Product of all entries.
  std::size_t list_size() const;
  // Sum over levels of the number of nodes whose PED is evaluated.
  std::size_t visited_nodes() const;

  std::string to_string() const;

  friend bool operator==(const NodeDistribution&, const NodeDistribution&) = default;

 private:
  std::vector<int> counts_;
  int branches_;
};

struct Candidate {
  SymbolVector path;  // path[k] = symbol at level k
  double ped = 0.0;   // d_0
  // level_peds[k] = d_k along the path; d_k >= d_{k+1}.
  std::vector<double> level_peds;
};

using CandidateList = std::vector<Candidate>;

struct FsdResult {
  CandidateList candidates;  // zig-zag column order
  std::size_t visited_nodes = 0;
};

// b_i = y_zf_i - sum_{j > i} R_ij s_j. Only path entries above `level` are read.
double compute_b(const Eigen::MatrixXd& r, const Eigen::VectorXd& y_zf,
                 std::span<const int> path, int level);

// argmin over the alphabet of |b - r_ii * s|, ties to the smaller symbol.
int direct_enumerate(double b, double r_ii, const Constellation& c);

// d_prev + (b - r_ii * s)^2.
double accumulate_ped(double d_prev, double b, double r_ii, int symbol);

// Breadth-first fixed-complexity tree search. At a full level every child of
// every surviving path is kept (children in ascending symbol order, parent
// major); at a single level each path keeps its direct-enumeration child.
FsdResult fsd_search(const Eigen::MatrixXd& r, const Eigen::VectorXd& y_zf,
                     const NodeDistribution& dist, const Constellation& c);

// Index of the smallest-PED candidate, earliest on ties.
std::size_t best_candidate(const CandidateList& list);

// Picks the best candidate, restores input column order and demaps.
Bits hard_decision(const CandidateList& list, std::span<const int> perm, const Constellation& c);

}  // namespace fsd
