#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fsd/fsd_core.hpp"
#include "fsd/oracle.hpp"

namespace fsd {

enum class LlrStatus : std::uint8_t {
  kExact,      // both hypothesis sets present, |L| <= l_max
  kSaturated,  // both sets present, magnitude clipped to l_max
  kEmptySet,   // one hypothesis set absent from the list, set to +-l_max
};

struct LlrOptions {
  double l_max = 8.0;
};

struct LlrVector {
  std::vector<double> values;  // per frame bit, positive favours bit = 1
  std::vector<LlrStatus> status;
  double l_max = 8.0;

  bool clamped(std::size_t k) const { return status[k] != LlrStatus::kExact; }
};

// Max-log extrinsic LLRs restricted to the candidate list:
//   L_E(x_k) = 1/2 max_{x_k=+1} { -m/noise_var + x_[k] . L_A,[k] }
//            - 1/2 max_{x_k=-1} { -m/noise_var + x_[k] . L_A,[k] }
// with m the candidate PED. `prior` may be empty (no a-priori information).
LlrVector list_llr(const CandidateList& list, const BitLayout& layout, double noise_var,
                   std::span<const double> prior, const LlrOptions& options = {});

}  // namespace fsd
