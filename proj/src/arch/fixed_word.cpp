#include "fsd/arch/fixed_word.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "fsd/errors.hpp"

namespace fsd::arch {

double FixedWord::to_double() const { return std::ldexp(static_cast<double>(raw_), -frac_bits_); }

Quantized quantize(double value, int frac_bits) {
  if (frac_bits < 0 || frac_bits >= kWordBits) {
    throw ConfigError("frac_bits must lie in [0, " + std::to_string(kWordBits - 1) + "]");
  }
  const double scaled = std::nearbyint(std::ldexp(value, frac_bits));
  if (!std::isfinite(scaled)) throw ParameterError("cannot quantize a non-finite value");
  const bool saturated = scaled > kRawMax || scaled < kRawMin;
  return {FixedWord::saturate(static_cast<std::int64_t>(std::clamp(scaled, -1e9, 1e9)), frac_bits),
          saturated};
}

namespace {

std::int64_t shift_add(int r, int symbol) {
  switch (symbol) {
    case 3:
      return std::int64_t{r} + (std::int64_t{r} << 1);
    case 1:
      return r;
    case -1:
      return -std::int64_t{r};
    case -3:
      return -std::int64_t{r} - (std::int64_t{r} << 1);
    default:
      throw InputShapeError("symbol " + std::to_string(symbol) + " is not in {-3, -1, 1, 3}");
  }
}

}  // namespace

FixedWord fx_mul_sym(FixedWord r, int symbol) {
  return FixedWord::saturate(shift_add(r.raw(), symbol), r.frac_bits());
}

int fx_error(FixedWord b, FixedWord r_ii, int symbol) {
  return b.raw() - fx_mul_sym(r_ii, symbol).raw();
}

FixedWord fx_ped_step(FixedWord d_prev, FixedWord b, FixedWord r_ii, int symbol) {
  const std::int64_t e = fx_error(b, r_ii, symbol);
  const std::int64_t square = (e * e) >> d_prev.frac_bits();
  return FixedWord::saturate(d_prev.raw() + square, d_prev.frac_bits());
}

int fx_direct_enumerate(FixedWord b, FixedWord r_ii) {
  static constexpr int kSymbols[] = {-3, -1, 1, 3};
  int best = kSymbols[0];
  int best_abs = std::abs(fx_error(b, r_ii, best));
  for (int s : kSymbols) {
    const int a = std::abs(fx_error(b, r_ii, s));
    if (a < best_abs) {
      best_abs = a;
      best = s;
    }
  }
  return best;
}

FixedWord fx_interference(FixedWord y, std::span<const FixedWord> r, std::span<const int> symbols) {
  if (r.size() != symbols.size()) throw InputShapeError("fx_interference: operand count mismatch");
  std::int64_t acc = y.raw();
  for (std::size_t t = 0; t < r.size(); ++t) acc -= shift_add(r[t].raw(), symbols[t]);
  return FixedWord::saturate(acc, y.frac_bits());
}

}  // namespace fsd::arch
