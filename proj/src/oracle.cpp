#include "fsd/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "fsd/errors.hpp"
#include "fsd/kernels/kernels.hpp"
#include "fsd/qrd.hpp"

namespace fsd {

std::size_t lattice_size(int levels, const Constellation& c) {
  std::size_t size = 1;
  for (int i = 0; i < levels; ++i) {
    size *= static_cast<std::size_t>(c.branches());
    if (size > kMaxLatticePoints) {
      throw ConfigError("lattice with " + std::to_string(levels) + " levels of " +
                        std::to_string(c.branches()) + " symbols exceeds the exhaustive limit of " +
                        std::to_string(kMaxLatticePoints) + " points");
    }
  }
  return size;
}

SymbolVector lattice_point(std::size_t index, int levels, const Constellation& c) {
  SymbolVector path(levels);
  const auto nb = static_cast<std::size_t>(c.branches());
  for (int level = 0; level < levels; ++level) {
    path[level] = c.alphabet()[index % nb];
    index /= nb;
  }
  return path;
}

namespace {

std::size_t lattice_index(std::span<const int> path, const Constellation& c) {
  std::size_t index = 0;
  for (int level = static_cast<int>(path.size()) - 1; level >= 0; --level) {
    index = index * static_cast<std::size_t>(c.branches()) + c.index_of(path[level]);
  }
  return index;
}

void check_shapes(const Eigen::MatrixXd& r, const Eigen::VectorXd& y_zf) {
  if (r.rows() != r.cols() || y_zf.size() != r.rows()) {
    throw InputShapeError("R must be square with as many rows as y_zf");
  }
}

// Shared depth-first traversal for the hard and list sphere decoders.
class DepthFirst {
 public:
  DepthFirst(const Eigen::MatrixXd& r, const Eigen::VectorXd& y_zf, const Constellation& c)
      : r_(r), y_(y_zf), c_(c), n_(static_cast<int>(r.cols())), path_(n_, 0) {}

  // on_leaf(path, ped) is called for every leaf within the radius; radius() is
  // re-read after every visit.
  template <typename Leaf, typename Radius>
  std::size_t run(Leaf&& on_leaf, Radius&& radius) {
    visited_ = 0;
    descend(n_ - 1, 0.0, on_leaf, radius);
    return visited_;
  }

 private:
  template <typename Leaf, typename Radius>
  void descend(int level, double ped, Leaf& on_leaf, Radius& radius) {
    const double r_ii = r_(level, level);
    const double b = compute_b(r_, y_, path_, level);
    // Schnorr-Euchner order: increasing |e|, ties to the smaller symbol.
    std::array<std::pair<double, int>, 64> order{};
    const int nb = c_.branches();
    for (int k = 0; k < nb; ++k) {
      const int s = c_.alphabet()[k];
      order[k] = {std::abs(b - r_ii * s), s};
    }
    std::stable_sort(order.begin(), order.begin() + nb,
                     [](const auto& a, const auto& b2) { return a.first < b2.first; });
    for (int k = 0; k < nb; ++k) {
      const int s = order[k].second;
      const double child = accumulate_ped(ped, b, r_ii, s);
      if (child > radius()) break;  // later children are at least as far
      ++visited_;
      path_[level] = s;
      if (level == 0) {
        on_leaf(std::span<const int>(path_), child);
      } else {
        descend(level - 1, child, on_leaf, radius);
      }
    }
    path_[level] = 0;
  }

  const Eigen::MatrixXd& r_;
  const Eigen::VectorXd& y_;
  const Constellation& c_;
  int n_;
  SymbolVector path_;
  std::size_t visited_ = 0;
};

}  // namespace

std::vector<double> lattice_metrics(const Eigen::MatrixXd& r, const Eigen::VectorXd& y_zf,
                                    const Constellation& c) {
  check_shapes(r, y_zf);
  const int n = static_cast<int>(r.cols());
  const std::size_t total = lattice_size(n, c);
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = r;
  const Eigen::VectorXd y = y_zf;

  constexpr std::size_t kBlock = 4096;
  std::vector<double> metrics(total);
  std::vector<double> symbols(kBlock * static_cast<std::size_t>(n));
  const auto& kernel = kernels::active();
  const auto nb = static_cast<std::size_t>(c.branches());
  for (std::size_t start = 0; start < total; start += kBlock) {
    const std::size_t count = std::min(kBlock, total - start);
    for (std::size_t p = 0; p < count; ++p) {
      std::size_t index = start + p;
      for (int level = 0; level < n; ++level) {
        symbols[level * count + p] = c.alphabet()[index % nb];
        index /= nb;
      }
    }
    kernel.lattice_metrics(rm.data(), y.data(), n, symbols.data(), count, metrics.data() + start);
  }
  return metrics;
}

MlSolution exhaustive_ml(const Eigen::MatrixXd& r, const Eigen::VectorXd& y_zf,
                         const Constellation& c) {
  const std::vector<double> metrics = lattice_metrics(r, y_zf, c);
  const auto best = std::min_element(metrics.begin(), metrics.end());
  MlSolution sol;
  sol.path = lattice_point(static_cast<std::size_t>(best - metrics.begin()),
                           static_cast<int>(r.cols()), c);
  sol.ped = *best;
  sol.visited_nodes = metrics.size();
  return sol;
}

MlSolution see_sd(const Eigen::MatrixXd& r, const Eigen::VectorXd& y_zf, const Constellation& c) {
  check_shapes(r, y_zf);
  MlSolution best;
  best.ped = std::numeric_limits<double>::infinity();
  std::size_t best_index = std::numeric_limits<std::size_t>::max();
  DepthFirst search(r, y_zf, c);
  best.visited_nodes = search.run(
      [&](std::span<const int> path, double ped) {
        const std::size_t index = lattice_index(path, c);
        if (ped < best.ped || (ped == best.ped && index < best_index)) {
          best.ped = ped;
          best.path.assign(path.begin(), path.end());
          best_index = index;
        }
      },
      [&] { return best.ped; });
  return best;
}

CandidateList see_lsd(const Eigen::MatrixXd& r, const Eigen::VectorXd& y_zf,
                      const Constellation& c, std::size_t k) {
  check_shapes(r, y_zf);
  const int n = static_cast<int>(r.cols());
  const std::size_t total = lattice_size(n, c);
  if (k == 0 || k > total) {
    throw ParameterError("list size " + std::to_string(k) + " outside [1, " +
                         std::to_string(total) + "]");
  }
  using Entry = std::pair<double, std::size_t>;  // (ped, lattice index), max-heap
  std::priority_queue<Entry> held;
  DepthFirst search(r, y_zf, c);
  search.run(
      [&](std::span<const int> path, double ped) {
        const Entry entry{ped, lattice_index(path, c)};
        if (held.size() < k) {
          held.push(entry);
        } else if (entry < held.top()) {
          held.pop();
          held.push(entry);
        }
      },
      [&] {
        return held.size() < k ? std::numeric_limits<double>::infinity() : held.top().first;
      });

  std::vector<Entry> sorted;
  sorted.reserve(held.size());
  while (!held.empty()) {
    sorted.push_back(held.top());
    held.pop();
  }
  std::reverse(sorted.begin(), sorted.end());
  CandidateList list;
  list.reserve(sorted.size());
  for (const auto& [ped, index] : sorted) {
    Candidate cand;
    cand.path = lattice_point(index, n, c);
    cand.ped = ped;
    list.push_back(std::move(cand));
  }
  return list;
}

std::vector<double> exhaustive_maxlog_llr(const Eigen::MatrixXd& r, const Eigen::VectorXd& y_zf,
                                          double noise_var, std::span<const double> prior,
                                          const BitLayout& layout) {
  if (!(noise_var > 0.0)) throw ParameterError("max-log LLR needs a positive noise variance");
  const Constellation& c = layout.constellation;
  const int n = static_cast<int>(r.cols());
  if (layout.perm.size() != static_cast<std::size_t>(n) || n % 2 != 0) {
    throw InputShapeError("bit layout permutation does not match R");
  }
  const std::size_t nbits = static_cast<std::size_t>(c.bits_per_symbol()) * (n / 2);
  if (!prior.empty() && prior.size() != nbits) {
    throw InputShapeError("a-priori vector must have " + std::to_string(nbits) + " entries");
  }
  const std::vector<double> metrics = lattice_metrics(r, y_zf, c);
  const double neg_inf = -std::numeric_limits<double>::infinity();
  std::vector<double> best_one(nbits, neg_inf);
  std::vector<double> best_zero(nbits, neg_inf);
  for (std::size_t index = 0; index < metrics.size(); ++index) {
    const Bits bits = demap(unpermute_symbols(layout.perm, lattice_point(index, n, c)), c);
    double prior_total = 0.0;
    if (!prior.empty()) {
      for (std::size_t j = 0; j < nbits; ++j) prior_total += (bits[j] ? 1.0 : -1.0) * prior[j];
    }
    const double likelihood = -metrics[index] / noise_var;
    for (std::size_t k = 0; k < nbits; ++k) {
      const double x_k = bits[k] ? 1.0 : -1.0;
      const double others = prior.empty() ? 0.0 : prior_total - x_k * prior[k];
      const double value = likelihood + others;
      double& slot = bits[k] ? best_one[k] : best_zero[k];
      slot = std::max(slot, value);
    }
  }
  std::vector<double> llr(nbits);
  for (std::size_t k = 0; k < nbits; ++k) llr[k] = 0.5 * best_one[k] - 0.5 * best_zero[k];
  return llr;
}

}  // namespace fsd
