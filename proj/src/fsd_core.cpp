#include "fsd/fsd_core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "fsd/errors.hpp"
#include "fsd/qrd.hpp"

namespace fsd {

NodeDistribution::NodeDistribution(std::vector<int> counts_lowest_first, int branches)
    : counts_(std::move(counts_lowest_first)), branches_(branches) {
  if (branches_ < 2) throw ConfigError("node distribution needs at least two branches per node");
  if (counts_.empty()) throw ConfigError("node distribution has no levels");
  for (int c : counts_) {
    if (c != 1 && c != branches_) {
      throw ConfigError("node distribution entry " + std::to_string(c) + " is not 1 or " +
                        std::to_string(branches_));
    }
  }
}

NodeDistribution NodeDistribution::standard(int levels, int branches) {
  if (levels < 2) throw ConfigError("standard distribution needs at least two levels");
  std::vector<int> counts(levels, 1);
  counts[levels - 1] = branches;
  counts[levels - 2] = branches;
  return NodeDistribution(std::move(counts), branches);
}

NodeDistribution NodeDistribution::parse(std::string_view text, int branches) {
  std::vector<int> counts;
  const bool has_separator = text.find_first_of(", ") != std::string_view::npos;
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    counts.push_back(std::stoi(token));
    token.clear();
  };
  for (char ch : text) {
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      token.push_back(ch);
      if (!has_separator) flush();
    } else if (ch == ',' || ch == ' ' || ch == '{' || ch == '}') {
      flush();
    } else {
      throw ConfigError("bad character in node distribution '" + std::string(text) + "'");
    }
  }
  flush();
  return NodeDistribution(std::move(counts), branches);
}

std::size_t NodeDistribution::list_size() const {
  std::size_t size = 1;
  for (int c : counts_) size *= static_cast<std::size_t>(c);
  return size;
}

std::size_t NodeDistribution::visited_nodes() const {
  std::size_t paths = 1;
  std::size_t total = 0;
  for (auto it = counts_.rbegin(); it != counts_.rend(); ++it) {
    paths *= static_cast<std::size_t>(*it);
    total += paths;
  }
  return total;
}

std::string NodeDistribution::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(counts_[i]);
  }
  return out;
}

double compute_b(const Eigen::MatrixXd& r, const Eigen::VectorXd& y_zf,
                 std::span<const int> path, int level) {
  const int n = static_cast<int>(r.cols());
  double b = y_zf(level);
  for (int j = level + 1; j < n; ++j) b -= r(level, j) * path[j];
  return b;
}

int direct_enumerate(double b, double r_ii, const Constellation& c) {
  int best = c.alphabet().front();
  double best_dist = std::numeric_limits<double>::infinity();
  for (int s : c.alphabet()) {
    const double dist = std::abs(b - r_ii * s);
    if (dist < best_dist) {
      best_dist = dist;
      best = s;
    }
  }
  return best;
}

double accumulate_ped(double d_prev, double b, double r_ii, int symbol) {
  const double e = b - r_ii * symbol;
  return d_prev + e * e;
}

FsdResult fsd_search(const Eigen::MatrixXd& r, const Eigen::VectorXd& y_zf,
                     const NodeDistribution& dist, const Constellation& c) {
  const int n = static_cast<int>(r.cols());
  if (r.rows() != n || y_zf.size() != n || dist.levels() != n) {
    throw InputShapeError("fsd_search: R is " + std::to_string(r.rows()) + "x" +
                          std::to_string(n) + ", y_zf has " + std::to_string(y_zf.size()) +
                          " entries, distribution has " + std::to_string(dist.levels()) +
                          " levels");
  }
  if (dist.branches() != c.branches()) {
    throw ConfigError("node distribution branch count does not match the constellation");
  }

  FsdResult result;
  // Each partial path carries a full-length symbol vector; entries below the
  // current level are not yet meaningful.
  CandidateList frontier(1);
  frontier[0].path.assign(n, 0);
  frontier[0].level_peds.assign(n, 0.0);

  for (int level = n - 1; level >= 0; --level) {
    const double r_ii = r(level, level);
    CandidateList next;
    next.reserve(frontier.size() * dist.count(level));
    for (const Candidate& parent : frontier) {
      const double b = compute_b(r, y_zf, parent.path, level);
      auto extend = [&](int symbol) {
        Candidate child = parent;
        child.path[level] = symbol;
        child.ped = accumulate_ped(parent.ped, b, r_ii, symbol);
        child.level_peds[level] = child.ped;
        next.push_back(std::move(child));
        ++result.visited_nodes;
      };
      if (dist.is_full(level)) {
        for (int s : c.alphabet()) extend(s);
      } else {
        extend(direct_enumerate(b, r_ii, c));
      }
    }
    frontier = std::move(next);
  }
  result.candidates = std::move(frontier);
  return result;
}

std::size_t best_candidate(const CandidateList& list) {
  if (list.empty()) throw InputShapeError("candidate list is empty");
  std::size_t best = 0;
  for (std::size_t i = 1; i < list.size(); ++i) {
    if (list[i].ped < list[best].ped) best = i;
  }
  return best;
}

Bits hard_decision(const CandidateList& list, std::span<const int> perm, const Constellation& c) {
  const Candidate& best = list[best_candidate(list)];
  return demap(unpermute_symbols(perm, best.path), c);
}

}  // namespace fsd
