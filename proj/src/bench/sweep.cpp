#include "fsd/bench/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <thread>

#include "fsd/arch/simulator.hpp"
#include "fsd/errors.hpp"
#include "fsd/fsd_core.hpp"
#include "fsd/llr.hpp"
#include "fsd/mimo_model.hpp"
#include "fsd/oracle.hpp"
#include "fsd/qrd.hpp"

namespace fsd::bench {

namespace {

struct Cell {
  std::size_t bit_errors = 0;
  std::size_t visited = 0;
  std::size_t ml_in_list = 0;
  std::size_t fx_agree = 0;
  std::vector<double> llr_dev;  // per frame, reduced in frame order
};

struct Layout {
  std::size_t snrs, qrds, dets;
  std::size_t index(std::size_t s, std::size_t q, std::size_t d) const {
    return (s * qrds + q) * dets + d;
  }
  std::size_t size() const { return snrs * qrds * dets; }
};

std::size_t count_errors(const Bits& a, const Bits& b) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += a[i] != b[i];
  return n;
}

bool contains_path(const CandidateList& list, const SymbolVector& path) {
  return std::any_of(list.begin(), list.end(), [&](const Candidate& c) { return c.path == path; });
}

double llr_deviation(const CandidateList& list, const Eigen::MatrixXd& r, const Eigen::VectorXd& y_zf,
                     double noise_var, const BitLayout& layout, double l_max) {
  const LlrVector approx = list_llr(list, layout, noise_var, {}, {l_max});
  const std::vector<double> truth = exhaustive_maxlog_llr(r, y_zf, noise_var, {}, layout);
  double sum = 0.0;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    sum += std::abs(approx.values[k] - std::clamp(truth[k], -l_max, l_max));
  }
  return sum / static_cast<double>(truth.size());
}

class FrameRunner {
 public:
  FrameRunner(const SimConfig& cfg, const SweepOptions& options)
      : cfg_(cfg),
        options_(options),
        c_(cfg.bits_per_symbol),
        dist_(NodeDistribution::parse(cfg.distribution, c_.branches())),
        layout_{cfg.snr_db.size(), cfg.qrd_modes.size(), cfg.detectors.size()} {
    for (double snr : cfg.snr_db) noise_.push_back(noise_variance_for_snr(snr, c_, cfg.n_tx));
  }

  const Layout& layout() const { return layout_; }

  void run(std::size_t frame, std::vector<Cell>& cells) const {
    Rng rng(derive_seed(cfg_.seed, frame));
    const Bits bits = random_bits(rng, static_cast<std::size_t>(c_.bits_per_symbol()) * cfg_.n_tx);
    const TransmitFrame tx = map_bits(bits, c_, cfg_.n_tx);
    const ComplexChannel ch = generate_channel(rng, cfg_.n_tx, cfg_.n_rx);
    Eigen::VectorXcd unit(cfg_.n_rx);
    for (Eigen::Index i = 0; i < unit.size(); ++i) {
      const double re = rng.gaussian() * std::sqrt(0.5);
      const double im = rng.gaussian() * std::sqrt(0.5);
      unit(i) = {re, im};
    }
    const RealSystem noiseless = realify(ch, apply_channel(ch, tx, 0.0, unit), 0.0);
    std::vector<QrdResult> qrds;
    for (QrdMode mode : cfg_.qrd_modes) qrds.push_back(decompose(noiseless.h, mode));

    for (std::size_t s = 0; s < noise_.size(); ++s) {
      const Eigen::VectorXd y = realify_vector(apply_channel(ch, tx, noise_[s], unit));
      for (std::size_t q = 0; q < qrds.size(); ++q) {
        run_point(frame, bits, qrds[q], zf_transform(qrds[q], y), noise_[s], s, q, cells);
      }
    }
  }

 private:
  void run_point(std::size_t frame, const Bits& bits, const QrdResult& qrd, const Eigen::VectorXd& y_zf,
                 double noise_var, std::size_t s, std::size_t q, std::vector<Cell>& cells) const {
    std::optional<MlSolution> ml;
    std::optional<FsdResult> fsd;
    auto get_ml = [&]() -> const MlSolution& {
      if (!ml) ml = see_sd(qrd.r, y_zf, c_);
      return *ml;
    };
    auto get_fsd = [&]() -> const FsdResult& {
      if (!fsd) fsd = fsd_search(qrd.r, y_zf, dist_, c_);
      return *fsd;
    };
    const BitLayout bit_layout{c_, qrd.perm};

    for (std::size_t d = 0; d < cfg_.detectors.size(); ++d) {
      Cell& cell = cells[layout_.index(s, q, d)];
      switch (cfg_.detectors[d]) {
        case Detector::kSeeSd: {
          const MlSolution& sol = get_ml();
          cell.bit_errors += count_errors(bits, demap(unpermute_symbols(qrd.perm, sol.path), c_));
          cell.visited += sol.visited_nodes;
          break;
        }
        case Detector::kExhaustive: {
          const MlSolution sol = exhaustive_ml(qrd.r, y_zf, c_);
          cell.bit_errors += count_errors(bits, demap(unpermute_symbols(qrd.perm, sol.path), c_));
          cell.visited += sol.visited_nodes;
          break;
        }
        case Detector::kFsd: {
          const FsdResult& res = get_fsd();
          cell.bit_errors += count_errors(bits, hard_decision(res.candidates, qrd.perm, c_));
          cell.visited += res.visited_nodes;
          cell.ml_in_list += contains_path(res.candidates, get_ml().path);
          if (options_.audit_llr) {
            cell.llr_dev[frame] =
                llr_deviation(res.candidates, qrd.r, y_zf, noise_var, bit_layout, cfg_.l_max);
          }
          break;
        }
        case Detector::kFsdFx: {
          const arch::ArchConfig arch_cfg{cfg_.parallelism, cfg_.frac_bits, cfg_.fx_input_scale, false};
          const arch::SimResult sim = arch::simulate(qrd.r, y_zf, dist_, arch_cfg);
          const Bits decided = arch::fx_hard_decision(sim.candidates, qrd.perm, c_);
          cell.bit_errors += count_errors(bits, decided);
          cell.visited += sim.stats.visited_nodes;
          cell.fx_agree += decided == hard_decision(get_fsd().candidates, qrd.perm, c_);
          const CandidateList list = arch::to_candidate_list(sim.candidates, cfg_.fx_input_scale);
          cell.ml_in_list += contains_path(list, get_ml().path);
          if (options_.audit_llr) {
            cell.llr_dev[frame] = llr_deviation(list, qrd.r, y_zf, noise_var, bit_layout, cfg_.l_max);
          }
          break;
        }
      }
    }
  }

  const SimConfig& cfg_;
  const SweepOptions& options_;
  Constellation c_;
  NodeDistribution dist_;
  Layout layout_;
  std::vector<double> noise_;
};

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

BerStats run_sweep(const SimConfig& cfg, const SweepOptions& options) {
  validate(cfg);
  const FrameRunner runner(cfg, options);
  const Layout layout = runner.layout();

  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(cfg.threads), cfg.frames);
  std::vector<std::vector<Cell>> partial(workers, std::vector<Cell>(layout.size()));
  if (options.audit_llr) {
    for (auto& cells : partial) {
      for (auto& cell : cells) cell.llr_dev.assign(cfg.frames, 0.0);
    }
  }
  // Contiguous frame blocks per worker; integer counters make the reduction
  // order-free, and LLR deviations are summed in frame order afterwards.
  auto work = [&](std::size_t w) {
    const std::size_t begin = cfg.frames * w / workers;
    const std::size_t end = cfg.frames * (w + 1) / workers;
    for (std::size_t f = begin; f < end; ++f) runner.run(f, partial[w]);
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }

  const Constellation c(cfg.bits_per_symbol);
  const std::size_t bits_per_frame = static_cast<std::size_t>(c.bits_per_symbol()) * cfg.n_tx;
  BerStats stats;
  stats.seed = cfg.seed;
  stats.config_hash = config_hash(cfg);
  for (std::size_t s = 0; s < layout.snrs; ++s) {
    for (std::size_t q = 0; q < layout.qrds; ++q) {
      for (std::size_t d = 0; d < layout.dets; ++d) {
        Cell total;
        double llr_sum = 0.0;
        for (std::size_t w = 0; w < workers; ++w) {
          const Cell& part = partial[w][layout.index(s, q, d)];
          total.bit_errors += part.bit_errors;
          total.visited += part.visited;
          total.ml_in_list += part.ml_in_list;
          total.fx_agree += part.fx_agree;
        }
        if (options.audit_llr) {
          // Each frame was written by exactly one worker; the others hold an
          // exact 0.0, so the sum is the same for any worker count.
          for (std::size_t f = 0; f < cfg.frames; ++f) {
            double frame_dev = 0.0;
            for (std::size_t w = 0; w < workers; ++w) {
              frame_dev += partial[w][layout.index(s, q, d)].llr_dev[f];
            }
            llr_sum += frame_dev;
          }
        }
        BerPoint p;
        p.snr_db = cfg.snr_db[s];
        p.detector = cfg.detectors[d];
        p.qrd = cfg.qrd_modes[q];
        p.frames = cfg.frames;
        p.bits = cfg.frames * bits_per_frame;
        p.bit_errors = total.bit_errors;
        p.ber = static_cast<double>(p.bit_errors) / static_cast<double>(p.bits);
        p.mean_visited_nodes = static_cast<double>(total.visited) / static_cast<double>(cfg.frames);
        const bool is_list = p.detector == Detector::kFsd || p.detector == Detector::kFsdFx;
        if (is_list) {
          p.ml_in_list_rate = static_cast<double>(total.ml_in_list) / static_cast<double>(cfg.frames);
          if (options.audit_llr) p.llr_mad = llr_sum / static_cast<double>(cfg.frames);
        }
        if (p.detector == Detector::kFsdFx) {
          p.fx_agree_rate = static_cast<double>(total.fx_agree) / static_cast<double>(cfg.frames);
        }
        stats.points.push_back(p);
      }
    }
  }
  return stats;
}

void write_csv(const BerStats& stats, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const BerPoint& p : stats.points) {
    out << format_double(p.snr_db) << ',' << to_string(p.detector) << ',' << to_string(p.qrd) << ','
        << p.frames << ',' << p.bits << ',' << p.bit_errors << ',' << format_double(p.ber) << ','
        << (p.ml_in_list_rate ? format_double(*p.ml_in_list_rate) : "") << ','
        << format_double(p.mean_visited_nodes) << ','
        << (p.fx_agree_rate ? format_double(*p.fx_agree_rate) : "") << ',' << stats.seed << ','
        << stats.config_hash << '\n';
  }
}

void write_csv_file(const BerStats& stats, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_csv(stats, out);
  out.flush();
  if (!out) throw Error("write to " + path.string() + " failed");
}

double binomial_sigma(double p, std::size_t n) {
  if (n == 0) return 0.0;
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

std::vector<std::string> check_sweep_invariants(const BerStats& stats) {
  std::vector<std::string> problems;
  std::map<std::pair<int, int>, std::vector<const BerPoint*>> series;
  for (const BerPoint& p : stats.points) {
    if (p.bit_errors > p.bits || p.ber < 0.0 || p.ber > 1.0) {
      problems.push_back("inconsistent counters at " + format_double(p.snr_db) + " dB, " +
                         to_string(p.detector));
    }
    series[{static_cast<int>(p.detector), static_cast<int>(p.qrd)}].push_back(&p);
  }
  for (auto& [key, points] : series) {
    std::stable_sort(points.begin(), points.end(),
                     [](const BerPoint* a, const BerPoint* b) { return a->snr_db < b->snr_db; });
    for (std::size_t i = 1; i < points.size(); ++i) {
      const BerPoint& lo = *points[i - 1];
      const BerPoint& hi = *points[i];
      if (hi.snr_db == lo.snr_db) continue;
      const double sigma = std::hypot(binomial_sigma(lo.ber, lo.bits), binomial_sigma(hi.ber, hi.bits));
      if (hi.ber > lo.ber + 2.0 * sigma) {
        problems.push_back(std::string("BER of ") + to_string(hi.detector) + "/" + to_string(hi.qrd) +
                           " rises from " + format_double(lo.ber) + " at " + format_double(lo.snr_db) +
                           " dB to " + format_double(hi.ber) + " at " + format_double(hi.snr_db) +
                           " dB");
      }
    }
  }
  for (const BerPoint& a : stats.points) {
    if (a.detector != Detector::kExhaustive) continue;
    for (const BerPoint& b : stats.points) {
      if (b.detector == Detector::kSeeSd && b.snr_db == a.snr_db && b.qrd == a.qrd &&
          b.bit_errors != a.bit_errors) {
        problems.push_back("exhaustive and see-sd disagree at " + format_double(a.snr_db) + " dB");
      }
    }
  }
  return problems;
}

}  // namespace fsd::bench
