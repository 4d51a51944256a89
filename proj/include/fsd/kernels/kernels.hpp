#pragma once

// Data-parallel inner loops with one scalar reference implementation and
// optional ISA-specific variants. Every variant must produce bit-identical
// output to the scalar one; tests/unit/test_kernels.cpp enforces that.
//
// This header is also included by the AVX2 translation unit, so it must stay
// free of inline code from other headers.

#include <cstddef>
#include <cstdint>

namespace fsd::kernels {

enum class Isa { kScalar, kAvx2 };

const char* to_string(Isa isa);

// Symbols are stored level-major: symbols[level * count + point].
// out[p] = sum_{i = n-1 .. 0} (y_i - sum_{j = i .. n-1} R_ij s_jp)^2, accumulated
// top level first, R row-major n x n.
using LatticeMetricsFn = void (*)(const double* r, const double* y, int n, const double* symbols,
                                  std::size_t count, double* out);

// Fixed-point datapath lanes. All values are raw 12-bit two's-complement words
// held in int16_t; symbols are in {-3, -1, +1, +3}.
//
// PED unit: e = b - sat(r_ii * s) (13-bit, exact); out = sat12(d_prev + (e*e >> frac_bits)).
using FxPedLanesFn = void (*)(const std::int16_t* d_prev, const std::int16_t* b, std::int16_t r_ii,
                              const std::int8_t* symbols, int lanes, int frac_bits,
                              std::int16_t* out);
// DE unit: out = argmin_s |b - sat(r_ii * s)|, ties to the smaller symbol.
using FxDeLanesFn = void (*)(const std::int16_t* b, std::int16_t r_ii, int lanes,
                             std::int8_t* out);
// b unit: out = sat12(y - sum_t r_row[t] * symbols[t * lanes + lane]), products formed by
// shift-add and kept wide until the single final saturation.
using FxInterferenceLanesFn = void (*)(std::int16_t y, const std::int16_t* r_row,
                                       const std::int8_t* symbols, int terms, int lanes,
                                       std::int16_t* out);

struct KernelTable {
  Isa isa;
  LatticeMetricsFn lattice_metrics;
  FxPedLanesFn fx_ped_lanes;
  FxDeLanesFn fx_de_lanes;
  FxInterferenceLanesFn fx_interference_lanes;
};

// Best table for this CPU. FSD_KERNELS=scalar in the environment forces the
// scalar reference.
const KernelTable& active();

// nullptr when the variant was not built or the CPU lacks the ISA.
const KernelTable* table_for(Isa isa);

namespace scalar {
extern const KernelTable kTable;
}

#if defined(FSD_HAVE_AVX2)
namespace avx2 {
extern const KernelTable kTable;
}
#endif

}  // namespace fsd::kernels
