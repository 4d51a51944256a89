#include "fsd/arch/simulator.hpp"

#include <array>
#include <string>

#include "fsd/errors.hpp"
#include "fsd/kernels/kernels.hpp"
#include "fsd/qrd.hpp"

namespace fsd::arch {

namespace {

constexpr std::array<int, 4> kAlphabet = {-3, -1, 1, 3};

// Symbols fixed by entry position.
int top_symbol(int entry) { return kAlphabet[entry / kGroupSize]; }
int second_symbol(int entry) { return kAlphabet[entry % kGroupSize]; }

std::vector<int> entries_of(std::span<const GroupId> groups) {
  std::vector<int> entries;
  for (const GroupId& g : groups) {
    for (int k = 0; k < kGroupSize; ++k) entries.push_back((g.column - 1) * kGroupSize + k);
  }
  return entries;
}

void require_single_level(std::span<const GroupId> groups) {
  for (const GroupId& g : groups) {
    if (g.level != groups.front().level) {
      throw ConfigError("a unit bank cannot process two tree levels in one cycle");
    }
  }
}

class Datapath {
 public:
  Datapath(const FxInputs& in, const kernels::KernelTable& k) : in_(in), k_(k), top_(in.levels - 1) {}

  // Symbol of `entry` at `level` as seen in `state`.
  int symbol(const CacheModel& state, int entry, int level) const {
    if (level == top_) return top_symbol(entry);
    if (level == top_ - 1) return second_symbol(entry);
    return state.path(entry, level);
  }

  void d_task(const CacheModel& before, CacheModel& after, std::span<const GroupId> groups) {
    if (groups.empty()) return;
    require_single_level(groups);
    const int level = groups.front().level;
    const std::int16_t r_ii = static_cast<std::int16_t>(in_.r_at(level, level).raw());
    if (level == top_) {
      // One group of four root children; each PED is broadcast to the four
      // entries of the column it heads.
      std::array<std::int16_t, kGroupSize> zero{}, b{}, out{};
      std::array<std::int8_t, kGroupSize> sym{};
      for (int k = 0; k < kGroupSize; ++k) {
        b[k] = static_cast<std::int16_t>(before.b_cache[k * kGroupSize].raw());
        sym[k] = static_cast<std::int8_t>(kAlphabet[k]);
      }
      k_.fx_ped_lanes(zero.data(), b.data(), r_ii, sym.data(), kGroupSize, frac(), out.data());
      for (int k = 0; k < kGroupSize; ++k) {
        for (int e = 0; e < kGroupSize; ++e) {
          after.ped_cache[k * kGroupSize + e] = FixedWord::saturate(out[k], frac());
        }
      }
      return;
    }
    const std::vector<int> entries = entries_of(groups);
    const int lanes = static_cast<int>(entries.size());
    std::vector<std::int16_t> d_prev(lanes), b(lanes), out(lanes);
    std::vector<std::int8_t> sym(lanes);
    for (int l = 0; l < lanes; ++l) {
      d_prev[l] = static_cast<std::int16_t>(before.ped_cache[entries[l]].raw());
      b[l] = static_cast<std::int16_t>(before.b_cache[entries[l]].raw());
      sym[l] = static_cast<std::int8_t>(symbol(before, entries[l], level));
    }
    k_.fx_ped_lanes(d_prev.data(), b.data(), r_ii, sym.data(), lanes, frac(), out.data());
    for (int l = 0; l < lanes; ++l) after.ped_cache[entries[l]] = FixedWord::saturate(out[l], frac());
  }

  void b_task(const CacheModel& before, CacheModel& after, std::span<const GroupId> groups) {
    if (groups.empty()) return;
    require_single_level(groups);
    const int level = groups.front().level;
    const int terms = top_ - level;
    std::vector<std::int16_t> r_row(terms);
    for (int t = 0; t < terms; ++t) {
      r_row[t] = static_cast<std::int16_t>(in_.r_at(level, level + 1 + t).raw());
    }
    const std::int16_t y = static_cast<std::int16_t>(in_.y[level].raw());

    if (level == top_ - 1) {
      // Nodes of a group share their parent, so one value per group is
      // computed and written to the group's four entries.
      const int lanes = static_cast<int>(groups.size());
      std::vector<std::int8_t> sym(lanes);
      std::vector<std::int16_t> out(lanes);
      for (int l = 0; l < lanes; ++l) sym[l] = static_cast<std::int8_t>(kAlphabet[groups[l].column - 1]);
      k_.fx_interference_lanes(y, r_row.data(), sym.data(), terms, lanes, out.data());
      for (int l = 0; l < lanes; ++l) {
        for (int e = 0; e < kGroupSize; ++e) {
          after.b_cache[(groups[l].column - 1) * kGroupSize + e] = FixedWord::saturate(out[l], frac());
        }
      }
      return;
    }
    const std::vector<int> entries = entries_of(groups);
    const int lanes = static_cast<int>(entries.size());
    std::vector<std::int8_t> sym(static_cast<std::size_t>(terms) * lanes);
    std::vector<std::int16_t> out(lanes);
    for (int t = 0; t < terms; ++t) {
      for (int l = 0; l < lanes; ++l) {
        sym[t * lanes + l] = static_cast<std::int8_t>(symbol(before, entries[l], level + 1 + t));
      }
    }
    k_.fx_interference_lanes(y, r_row.data(), sym.data(), terms, lanes, out.data());
    for (int l = 0; l < lanes; ++l) after.b_cache[entries[l]] = FixedWord::saturate(out[l], frac());
  }

  void de_task(const CacheModel& before, CacheModel& after, std::span<const GroupId> groups) {
    if (groups.empty()) return;
    require_single_level(groups);
    const int level = groups.front().level;
    if (level > top_ - 2) throw ConfigError("direct enumeration scheduled on a fully expanded level");
    const std::vector<int> entries = entries_of(groups);
    const int lanes = static_cast<int>(entries.size());
    std::vector<std::int16_t> b(lanes);
    std::vector<std::int8_t> out(lanes);
    for (int l = 0; l < lanes; ++l) b[l] = static_cast<std::int16_t>(before.b_cache[entries[l]].raw());
    k_.fx_de_lanes(b.data(), static_cast<std::int16_t>(in_.r_at(level, level).raw()), lanes, out.data());
    for (int l = 0; l < lanes; ++l) after.path(entries[l], level) = out[l];
  }

 private:
  int frac() const { return in_.y.front().frac_bits(); }

  const FxInputs& in_;
  const kernels::KernelTable& k_;
  int top_;
};

}  // namespace

FxInputs quantize_inputs(const Eigen::MatrixXd& r, const Eigen::VectorXd& y_zf, int frac_bits,
                         double scale) {
  const int n = static_cast<int>(r.cols());
  if (r.rows() != n || y_zf.size() != n) throw InputShapeError("R and y_zf sizes disagree");
  if (!(scale > 0.0)) throw ParameterError("input scale must be positive");
  FxInputs in;
  in.levels = n;
  in.r.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Quantized q = quantize(r(i, j) * scale, frac_bits);
      in.load_saturations += q.saturated;
      in.r.push_back(q.word);
    }
  }
  for (int i = 0; i < n; ++i) {
    const Quantized q = quantize(y_zf(i) * scale, frac_bits);
    in.load_saturations += q.saturated;
    in.y.push_back(q.word);
  }
  return in;
}

CacheModel::CacheModel(int levels_in)
    : levels(levels_in),
      path_history(static_cast<std::size_t>(kListSize) * (levels_in - 2), 0),
      b_cache(kListSize),
      ped_cache(kListSize) {
  if (levels_in < 3) throw ConfigError("cache model needs at least three levels");
}

FlipFlops CacheModel::flip_flops() const {
  return {static_cast<int>(path_history.size()) * 2, static_cast<int>(b_cache.size()) * kWordBits,
          static_cast<int>(ped_cache.size()) * kWordBits};
}

SimResult simulate_schedule(const FxInputs& inputs, const Schedule& schedule, int parallelism,
                            bool record_trace) {
  const int levels = inputs.levels;
  const int top = levels - 1;
  CacheModel state(levels);
  // Reset: b of the top level goes straight into the b cache.
  for (auto& b : state.b_cache) b = inputs.y[top];

  Datapath unit(inputs, kernels::active());
  SimResult result;
  for (const ScheduleEntry& entry : schedule) {
    const CacheModel before = state;
    unit.d_task(before, state, entry.d);
    unit.b_task(before, state, entry.b);
    unit.de_task(before, state, entry.de);
    result.stats.visited_nodes += entry.d.size() * kGroupSize;
    if (record_trace) result.trace.push_back(state);
  }

  result.candidates.resize(kListSize);
  for (int p = 0; p < kListSize; ++p) {
    FxCandidate& cand = result.candidates[p];
    cand.path.resize(levels);
    cand.path[top] = top_symbol(p);
    cand.path[top - 1] = second_symbol(p);
    for (int level = 0; level <= top - 2; ++level) cand.path[level] = state.path(p, level);
    cand.ped = state.ped_cache[p];
  }
  result.stats.parallelism = parallelism;
  result.stats.traversal_cycles = static_cast<int>(schedule.size());
  result.stats.total_cycles = result.stats.traversal_cycles + 1;
  result.stats.task_log = schedule;
  result.stats.load_saturations = inputs.load_saturations;
  return result;
}

SimResult simulate(const Eigen::MatrixXd& r, const Eigen::VectorXd& y_zf,
                   const NodeDistribution& dist, const ArchConfig& config) {
  const int levels = static_cast<int>(r.cols());
  const Schedule schedule = build_schedule(levels, config.parallelism, dist);
  const FxInputs inputs = quantize_inputs(r, y_zf, config.frac_bits, config.input_scale);
  return simulate_schedule(inputs, schedule, config.parallelism, config.record_trace);
}

std::size_t best_fx_candidate(std::span<const FxCandidate> list) {
  if (list.empty()) throw InputShapeError("candidate list is empty");
  std::size_t best = 0;
  for (std::size_t i = 1; i < list.size(); ++i) {
    if (list[i].ped.raw() < list[best].ped.raw()) best = i;
  }
  return best;
}

Bits fx_hard_decision(std::span<const FxCandidate> list, std::span<const int> perm,
                      const Constellation& c) {
  const FxCandidate& best = list[best_fx_candidate(list)];
  return demap(unpermute_symbols(perm, best.path), c);
}

CandidateList to_candidate_list(std::span<const FxCandidate> list, double input_scale) {
  CandidateList out;
  out.reserve(list.size());
  for (const FxCandidate& fx : list) {
    Candidate cand;
    cand.path = fx.path;
    cand.ped = fx.ped.to_double() / (input_scale * input_scale);
    out.push_back(std::move(cand));
  }
  return out;
}

Throughput throughput(double clock_hz, int bits_per_symbol, int n_tx, int cycles) {
  if (cycles <= 0) throw ParameterError("cycle count must be positive");
  if (!(clock_hz > 0.0) || bits_per_symbol <= 0 || n_tx <= 0) {
    throw ParameterError("clock, bits per symbol and antenna count must be positive");
  }
  const double bits_per_cycle = static_cast<double>(bits_per_symbol) * n_tx / cycles;
  return {clock_hz * bits_per_cycle, bits_per_cycle};
}

}  // namespace fsd::arch
