// AVX2 variants. Compiled with -mavx2 -mno-fma; keep standard-library headers
// out of this file so no AVX2-encoded inline function can leak into the rest
// of the program through the linker.

#include <immintrin.h>

#include "fsd/kernels/kernels.hpp"

namespace fsd::kernels::avx2 {
namespace {

inline int sat12(int v) { return v > 2047 ? 2047 : (v < -2048 ? -2048 : v); }

inline int mul_sym(int r, int s) {
  const int mag = (s == 3 || s == -3) ? r + (r << 1) : r;
  return sat12(s < 0 ? -mag : mag);
}

inline int iabs(int v) { return v < 0 ? -v : v; }

inline __m256i sat12_v(__m256i v) {
  return _mm256_min_epi32(_mm256_max_epi32(v, _mm256_set1_epi32(-2048)), _mm256_set1_epi32(2047));
}

// Wide r * s per lane without saturation.
inline __m256i mul_sym_wide_v(__m256i r, __m256i s) {
  const __m256i triple = _mm256_add_epi32(r, _mm256_slli_epi32(r, 1));
  const __m256i is3 = _mm256_cmpeq_epi32(_mm256_abs_epi32(s), _mm256_set1_epi32(3));
  return _mm256_sign_epi32(_mm256_blendv_epi8(r, triple, is3), s);
}

inline __m256i load_i16x8(const std::int16_t* p) {
  return _mm256_cvtepi16_epi32(_mm_loadu_si128(reinterpret_cast<const __m128i*>(p)));
}

inline __m256i load_i8x8(const std::int8_t* p) {
  return _mm256_cvtepi8_epi32(_mm_loadl_epi64(reinterpret_cast<const __m128i*>(p)));
}

inline void store_i16x8(std::int16_t* p, __m256i v) {
  const __m128i packed =
      _mm_packs_epi32(_mm256_castsi256_si128(v), _mm256_extracti128_si256(v, 1));
  _mm_storeu_si128(reinterpret_cast<__m128i*>(p), packed);
}

inline void store_i8x8(std::int8_t* p, __m256i v) {
  const __m128i w =
      _mm_packs_epi32(_mm256_castsi256_si128(v), _mm256_extracti128_si256(v, 1));
  _mm_storel_epi64(reinterpret_cast<__m128i*>(p), _mm_packs_epi16(w, w));
}

void lattice_metrics(const double* r, const double* y, int n, const double* symbols,
                     std::size_t count, double* out) {
  std::size_t p = 0;
  for (; p + 4 <= count; p += 4) {
    __m256d total = _mm256_setzero_pd();
    for (int i = n - 1; i >= 0; --i) {
      __m256d acc = _mm256_set1_pd(y[i]);
      for (int j = i; j < n; ++j) {
        const __m256d s = _mm256_loadu_pd(symbols + j * count + p);
        acc = _mm256_sub_pd(acc, _mm256_mul_pd(_mm256_set1_pd(r[i * n + j]), s));
      }
      total = _mm256_add_pd(total, _mm256_mul_pd(acc, acc));
    }
    _mm256_storeu_pd(out + p, total);
  }
  for (; p < count; ++p) {
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
  const __m256i r = _mm256_set1_epi32(r_ii);
  const __m128i shift = _mm_cvtsi32_si128(frac_bits);
  int l = 0;
  for (; l + 8 <= lanes; l += 8) {
    const __m256i prod = sat12_v(mul_sym_wide_v(r, load_i8x8(symbols + l)));
    const __m256i e = _mm256_sub_epi32(load_i16x8(b + l), prod);
    const __m256i sq = _mm256_sra_epi32(_mm256_mullo_epi32(e, e), shift);
    store_i16x8(out + l, sat12_v(_mm256_add_epi32(load_i16x8(d_prev + l), sq)));
  }
  for (; l < lanes; ++l) {
    const int e = b[l] - mul_sym(r_ii, symbols[l]);
    out[l] = static_cast<std::int16_t>(sat12(d_prev[l] + ((e * e) >> frac_bits)));
  }
}

void fx_de_lanes(const std::int16_t* b, std::int16_t r_ii, int lanes, std::int8_t* out) {
  static constexpr int kSymbols[4] = {-3, -1, 1, 3};
  int l = 0;
  for (; l + 8 <= lanes; l += 8) {
    const __m256i bv = load_i16x8(b + l);
    __m256i best_sym = _mm256_set1_epi32(kSymbols[0]);
    __m256i best_abs = _mm256_abs_epi32(_mm256_sub_epi32(bv, _mm256_set1_epi32(mul_sym(r_ii, kSymbols[0]))));
    for (int k = 1; k < 4; ++k) {
      const __m256i a =
          _mm256_abs_epi32(_mm256_sub_epi32(bv, _mm256_set1_epi32(mul_sym(r_ii, kSymbols[k]))));
      const __m256i better = _mm256_cmpgt_epi32(best_abs, a);
      best_abs = _mm256_blendv_epi8(best_abs, a, better);
      best_sym = _mm256_blendv_epi8(best_sym, _mm256_set1_epi32(kSymbols[k]), better);
    }
    store_i8x8(out + l, best_sym);
  }
  for (; l < lanes; ++l) {
    int best = kSymbols[0];
    int best_abs = iabs(b[l] - mul_sym(r_ii, kSymbols[0]));
    for (int k = 1; k < 4; ++k) {
      const int a = iabs(b[l] - mul_sym(r_ii, kSymbols[k]));
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
  int l = 0;
  for (; l + 8 <= lanes; l += 8) {
    __m256i acc = _mm256_set1_epi32(y);
    for (int t = 0; t < terms; ++t) {
      const __m256i s = load_i8x8(symbols + t * lanes + l);
      acc = _mm256_sub_epi32(acc, mul_sym_wide_v(_mm256_set1_epi32(r_row[t]), s));
    }
    store_i16x8(out + l, sat12_v(acc));
  }
  for (; l < lanes; ++l) {
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

const KernelTable kTable{Isa::kAvx2, lattice_metrics, fx_ped_lanes, fx_de_lanes,
                         fx_interference_lanes};

}  // namespace fsd::kernels::avx2
