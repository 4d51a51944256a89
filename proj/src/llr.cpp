#include "fsd/llr.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fsd/errors.hpp"
#include "fsd/qrd.hpp"

namespace fsd {

LlrVector list_llr(const CandidateList& list, const BitLayout& layout, double noise_var,
                   std::span<const double> prior, const LlrOptions& options) {
  if (!(noise_var > 0.0)) throw ParameterError("list_llr needs a positive noise variance");
  if (!(options.l_max > 0.0)) throw ParameterError("l_max must be positive");
  if (list.empty()) throw InputShapeError("list_llr needs a nonempty candidate list");
  const Constellation& c = layout.constellation;
  const std::size_t nbits =
      static_cast<std::size_t>(c.bits_per_symbol()) * (layout.perm.size() / 2);
  if (!prior.empty() && prior.size() != nbits) {
    throw InputShapeError("a-priori vector must have " + std::to_string(nbits) + " entries");
  }

  const double neg_inf = -std::numeric_limits<double>::infinity();
  std::vector<double> best_one(nbits, neg_inf);
  std::vector<double> best_zero(nbits, neg_inf);
  for (const Candidate& cand : list) {
    const Bits bits = demap(unpermute_symbols(layout.perm, cand.path), c);
    double prior_total = 0.0;
    if (!prior.empty()) {
      for (std::size_t j = 0; j < nbits; ++j) prior_total += (bits[j] ? 1.0 : -1.0) * prior[j];
    }
    const double likelihood = -cand.ped / noise_var;
    for (std::size_t k = 0; k < nbits; ++k) {
      const double x_k = bits[k] ? 1.0 : -1.0;
      const double others = prior.empty() ? 0.0 : prior_total - x_k * prior[k];
      double& slot = bits[k] ? best_one[k] : best_zero[k];
      slot = std::max(slot, likelihood + others);
    }
  }

  LlrVector out;
  out.l_max = options.l_max;
  out.values.resize(nbits);
  out.status.resize(nbits, LlrStatus::kExact);
  for (std::size_t k = 0; k < nbits; ++k) {
    if (best_zero[k] == neg_inf) {
      out.values[k] = options.l_max;
      out.status[k] = LlrStatus::kEmptySet;
    } else if (best_one[k] == neg_inf) {
      out.values[k] = -options.l_max;
      out.status[k] = LlrStatus::kEmptySet;
    } else {
      const double value = 0.5 * best_one[k] - 0.5 * best_zero[k];
      if (std::abs(value) > options.l_max) {
        out.values[k] = std::copysign(options.l_max, value);
        out.status[k] = LlrStatus::kSaturated;
      } else {
        out.values[k] = value;
      }
    }
  }
  return out;
}

}  // namespace fsd
