#include <algorithm>
#include <cstdlib>

#include "fsd/kernels/kernels.hpp"

namespace fsd::kernels::scalar {
namespace {

constexpr int kMax = 2047;
constexpr int kMin = -2048;

inline int sat12(int v) { return std::clamp(v, kMin, kMax); }

// r * s through shift-add, saturated.
inline int mul_sym(int r, int s) {
  const int mag = (s == 3 || s == -3) ? r + (r << 1) : r;
  return sat12(s < 0 ? -mag : mag);
}

void lattice_metrics(const double* r, const double* y, int n, const double* symbols,
                     std::size_t count, double* out) {
  for (std::size_t p = 0; p < count; ++p) {
    double total = 0.0;
    for (int i = n - 1; i >= 0; --i) {
      double acc = y[i];
      for (int j = i; j < n; ++j) acc = acc - r[i * n + j] * symbols[j * count + p];
      total = total + acc * acc;
    }
    out[p] = total;
  }
}

void fx_ped_lanes(const std::int16_t* d_prev, const std::int16_t* b, std::int16_t r_ii,
                  const std::int8_t* symbols, int lanes, int frac_bits, std::int16_t* out) {
  for (int l = 0; l < lanes; ++l) {
    const int e = b[l] - mul_sym(r_ii, symbols[l]);
    const int sq = (e * e) >> frac_bits;
    out[l] = static_cast<std::int16_t>(sat12(d_prev[l] + sq));
  }
}

void fx_de_lanes(const std::int16_t* b, std::int16_t r_ii, int lanes, std::int8_t* out) {
  static constexpr int kSymbols[4] = {-3, -1, 1, 3};
  for (int l = 0; l < lanes; ++l) {
    int best = kSymbols[0];
    int best_abs = std::abs(b[l] - mul_sym(r_ii, kSymbols[0]));
    for (int k = 1; k < 4; ++k) {
      const int a = std::abs(b[l] - mul_sym(r_ii, kSymbols[k]));
      if (a < best_abs) {
        best_abs = a;
        best = kSymbols[k];
      }
    }
    out[l] = static_cast<std::int8_t>(best);
  }
}

void fx_interference_lanes(std::int16_t y, const std::int16_t* r_row, const std::int8_t* symbols,
                           int terms, int lanes, std::int16_t* out) {
  for (int l = 0; l < lanes; ++l) {
    int acc = y;
    for (int t = 0; t < terms; ++t) {
      const int rv = r_row[t];
      const int s = symbols[t * lanes + l];
      const int mag = (s == 3 || s == -3) ? rv + (rv << 1) : rv;
      acc -= s < 0 ? -mag : mag;
    }
    out[l] = static_cast<std::int16_t>(sat12(acc));
  }
}

}  // namespace

const KernelTable kTable{Isa::kScalar, lattice_metrics, fx_ped_lanes, fx_de_lanes,
                         fx_interference_lanes};

}  // namespace fsd::kernels::scalar
