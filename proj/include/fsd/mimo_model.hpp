#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fsd/rng.hpp"

namespace fsd {

using Bits = std::vector<std::uint8_t>;
// Real-valued symbol vector; entry k is the symbol at tree level k.
using SymbolVector = std::vector<int>;

// Square QAM with independent Gray-labelled PAM per real dimension.
//
// For 16-QAM the real alphabet is {-3, -1, +1, +3} with labels
// 00, 01, 11, 10. The first M/2 bits of a complex symbol label the real part,
// the remaining M/2 bits the imaginary part, most significant bit first.
class Constellation {
 public:
  explicit Constellation(int bits_per_symbol = 4);

  static Constellation qam16() { return Constellation(4); }

  int bits_per_symbol() const { return bits_per_symbol_; }
  int bits_per_dimension() const { return bits_per_symbol_ / 2; }
  // Children per tree node (N_b).
  int branches() const { return static_cast<int>(alphabet_.size()); }
  // Points per complex symbol, 2^M.
  int size() const { return branches() * branches(); }

  // Ascending real alphabet.
  std::span<const int> alphabet() const { return alphabet_; }

  int value_of(unsigned label) const { return label_to_value_.at(label); }
  unsigned label_of(int value) const { return index_to_label_.at(index_of(value)); }
  int index_of(int value) const;
  bool contains(int value) const;

  // Mean complex-symbol energy with equiprobable points (10 for 16-QAM).
  double average_energy() const;

 private:
  int bits_per_symbol_;
  std::vector<int> alphabet_;
  std::vector<unsigned> index_to_label_;
  std::vector<int> label_to_value_;
};

struct ComplexChannel {
  Eigen::MatrixXcd h;  // n_rx x n_tx

  int n_tx() const { return static_cast<int>(h.cols()); }
  int n_rx() const { return static_cast<int>(h.rows()); }
};

struct TransmitFrame {
  Bits bits;                                // M * n_tx
  std::vector<std::complex<double>> symbols;  // n_tx
  SymbolVector real_symbols;                // [Re(s); Im(s)], 2 * n_tx
};

// Real-valued equivalent of the complex system.
struct RealSystem {
  Eigen::MatrixXd h;  // [[Re H, -Im H], [Im H, Re H]]
  Eigen::VectorXd y;  // [Re y; Im y]
  double noise_var = 0.0;  // per real dimension
};

TransmitFrame map_bits(std::span<const std::uint8_t> bits, const Constellation& c, int n_tx);

// Inverse of the real-symbol layout produced by map_bits.
Bits demap(std::span<const int> real_symbols, const Constellation& c);

Bits random_bits(Rng& rng, std::size_t count);

ComplexChannel generate_channel(std::uint64_t seed, int n_tx, int n_rx);
ComplexChannel generate_channel(Rng& rng, int n_tx, int n_rx);

// y = H s + n, with n having variance noise_var on each real dimension
// (complex variance 2 * noise_var). noise_var == 0 gives y = H s exactly.
Eigen::VectorXcd apply_channel(const ComplexChannel& ch, const TransmitFrame& frame,
                               double noise_var, Rng& rng);

// Same with an externally drawn unit-variance complex noise vector, so several
// SNR points can share one noise realization.
Eigen::VectorXcd apply_channel(const ComplexChannel& ch, const TransmitFrame& frame,
                               double noise_var, const Eigen::VectorXcd& unit_noise);

RealSystem realify(const ComplexChannel& ch, const Eigen::VectorXcd& y, double noise_var);

Eigen::VectorXd realify_vector(const Eigen::VectorXcd& v);

// Per-real-dimension noise variance for an SNR given as total received signal
// energy per receive antenna over N_0: n_tx * E_s / N_0, unit-variance channel.
double noise_variance_for_snr(double snr_db, const Constellation& c, int n_tx);

}  // namespace fsd
