#pragma once

#include <cstdint>
#include <span>

namespace fsd::arch {

inline constexpr int kWordBits = 12;
inline constexpr int kRawMax = (1 << (kWordBits - 1)) - 1;  // 2047
inline constexpr int kRawMin = -(1 << (kWordBits - 1));     // -2048
inline constexpr int kDefaultFracBits = 7;

// 12-bit two's-complement word with a binary point `frac_bits` from the right.
class FixedWord {
 public:
  constexpr FixedWord() = default;

  // Clamps `raw` into the 12-bit range.
  static constexpr FixedWord saturate(std::int64_t raw, int frac_bits = kDefaultFracBits) {
    const std::int64_t clamped = raw > kRawMax ? kRawMax : (raw < kRawMin ? kRawMin : raw);
    return FixedWord(static_cast<std::int16_t>(clamped), frac_bits);
  }
  static constexpr FixedWord max(int frac_bits = kDefaultFracBits) {
    return FixedWord(kRawMax, frac_bits);
  }

  constexpr int raw() const { return raw_; }
  constexpr int frac_bits() const { return frac_bits_; }
  double to_double() const;

  friend constexpr bool operator==(FixedWord a, FixedWord b) = default;

 private:
  constexpr FixedWord(std::int16_t raw, int frac_bits)
      : raw_(raw), frac_bits_(static_cast<std::int8_t>(frac_bits)) {}

  std::int16_t raw_ = 0;
  std::int8_t frac_bits_ = kDefaultFracBits;
};

struct Quantized {
  FixedWord word;
  bool saturated = false;
};

// Round to nearest, saturating.
Quantized quantize(double value, int frac_bits = kDefaultFracBits);

// r * s for s in {-3, -1, +1, +3} using only negation and shift-add
// (r + 2r, r, -r, -r - 2r), saturated to 12 bits.
FixedWord fx_mul_sym(FixedWord r, int symbol);

// e = b - fx_mul_sym(r_ii, s); needs 13 bits, returned unsaturated.
int fx_error(FixedWord b, FixedWord r_ii, int symbol);

// d_prev + e^2 (rescaled to the word's binary point), one saturation at the end.
FixedWord fx_ped_step(FixedWord d_prev, FixedWord b, FixedWord r_ii, int symbol);

// Child with the smallest |e|, ties to the smaller symbol.
int fx_direct_enumerate(FixedWord b, FixedWord r_ii);

// y - sum_t r[t] * s[t], every product formed by shift-add and summed at full
// width before the single output saturation.
FixedWord fx_interference(FixedWord y, std::span<const FixedWord> r, std::span<const int> symbols);

}  // namespace fsd::arch
