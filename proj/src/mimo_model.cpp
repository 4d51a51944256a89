#include "fsd/mimo_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fsd/errors.hpp"

namespace fsd {

Constellation::Constellation(int bits_per_symbol) : bits_per_symbol_(bits_per_symbol) {
  if (bits_per_symbol < 2 || bits_per_symbol % 2 != 0 || bits_per_symbol > 12) {
    throw ConfigError("constellation needs an even number of bits per symbol in [2, 12], got " +
                      std::to_string(bits_per_symbol));
  }
  const int levels = 1 << (bits_per_symbol / 2);
  alphabet_.resize(levels);
  index_to_label_.resize(levels);
  label_to_value_.resize(levels);
  for (int i = 0; i < levels; ++i) {
    alphabet_[i] = 2 * i - (levels - 1);
    const unsigned gray = static_cast<unsigned>(i) ^ (static_cast<unsigned>(i) >> 1);
    index_to_label_[i] = gray;
    label_to_value_[gray] = alphabet_[i];
  }
}

int Constellation::index_of(int value) const {
  const int levels = branches();
  if ((value + levels - 1) % 2 != 0 || value < -(levels - 1) || value > levels - 1) {
    throw InputShapeError("symbol " + std::to_string(value) + " is not in the real alphabet");
  }
  return (value + levels - 1) / 2;
}

bool Constellation::contains(int value) const {
  return std::find(alphabet_.begin(), alphabet_.end(), value) != alphabet_.end();
}

double Constellation::average_energy() const {
  double sum = 0.0;
  for (int a : alphabet_) sum += static_cast<double>(a) * a;
  return 2.0 * sum / static_cast<double>(alphabet_.size());
}

TransmitFrame map_bits(std::span<const std::uint8_t> bits, const Constellation& c, int n_tx) {
  const int m = c.bits_per_symbol();
  const int half = c.bits_per_dimension();
  if (n_tx < 1 || bits.size() != static_cast<std::size_t>(m) * n_tx) {
    throw InputShapeError("map_bits expects " + std::to_string(m * std::max(n_tx, 0)) +
                          " bits, got " + std::to_string(bits.size()));
  }
  TransmitFrame frame;
  frame.bits.assign(bits.begin(), bits.end());
  frame.symbols.resize(n_tx);
  frame.real_symbols.resize(2 * n_tx);
  auto label_at = [&](std::size_t offset) {
    unsigned label = 0;
    for (int b = 0; b < half; ++b) {
      if (bits[offset + b] > 1) throw InputShapeError("bits must be 0 or 1");
      label = (label << 1) | bits[offset + b];
    }
    return label;
  };
  for (int t = 0; t < n_tx; ++t) {
    const std::size_t base = static_cast<std::size_t>(t) * m;
    const int re = c.value_of(label_at(base));
    const int im = c.value_of(label_at(base + half));
    frame.symbols[t] = {static_cast<double>(re), static_cast<double>(im)};
    frame.real_symbols[t] = re;
    frame.real_symbols[t + n_tx] = im;
  }
  return frame;
}

Bits demap(std::span<const int> real_symbols, const Constellation& c) {
  if (real_symbols.size() % 2 != 0) throw InputShapeError("real symbol vector must have even length");
  const int n_tx = static_cast<int>(real_symbols.size() / 2);
  const int half = c.bits_per_dimension();
  Bits bits(static_cast<std::size_t>(c.bits_per_symbol()) * n_tx);
  auto put = [&](std::size_t offset, unsigned label) {
    for (int b = 0; b < half; ++b) {
      bits[offset + b] = static_cast<std::uint8_t>((label >> (half - 1 - b)) & 1U);
    }
  };
  for (int t = 0; t < n_tx; ++t) {
    const std::size_t base = static_cast<std::size_t>(t) * c.bits_per_symbol();
    put(base, c.label_of(real_symbols[t]));
    put(base + half, c.label_of(real_symbols[t + n_tx]));
  }
  return bits;
}

Bits random_bits(Rng& rng, std::size_t count) {
  Bits bits(count);
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng.bit());
  return bits;
}

ComplexChannel generate_channel(std::uint64_t seed, int n_tx, int n_rx) {
  Rng rng(seed);
  return generate_channel(rng, n_tx, n_rx);
}

ComplexChannel generate_channel(Rng& rng, int n_tx, int n_rx) {
  if (n_tx < 1 || n_rx < 1) throw InputShapeError("antenna counts must be positive");
  ComplexChannel ch{Eigen::MatrixXcd(n_rx, n_tx)};
  const double scale = std::sqrt(0.5);
  for (int r = 0; r < n_rx; ++r) {
    for (int t = 0; t < n_tx; ++t) {
      const double re = rng.gaussian() * scale;
      const double im = rng.gaussian() * scale;
      ch.h(r, t) = {re, im};
    }
  }
  return ch;
}

namespace {

Eigen::VectorXcd noiseless(const ComplexChannel& ch, const TransmitFrame& frame) {
  if (static_cast<int>(frame.symbols.size()) != ch.n_tx()) {
    throw InputShapeError("frame has " + std::to_string(frame.symbols.size()) +
                          " symbols but channel has " + std::to_string(ch.n_tx()) + " inputs");
  }
  const Eigen::Map<const Eigen::VectorXcd> s(frame.symbols.data(),
                                             static_cast<Eigen::Index>(frame.symbols.size()));
  return ch.h * s;
}

}  // namespace

Eigen::VectorXcd apply_channel(const ComplexChannel& ch, const TransmitFrame& frame,
                               double noise_var, Rng& rng) {
  if (!(noise_var >= 0.0)) throw ParameterError("noise variance must be >= 0");
  Eigen::VectorXcd unit(ch.n_rx());
  const double scale = std::sqrt(0.5);
  for (Eigen::Index r = 0; r < unit.size(); ++r) {
    const double re = rng.gaussian() * scale;
    const double im = rng.gaussian() * scale;
    unit(r) = {re, im};
  }
  return apply_channel(ch, frame, noise_var, unit);
}

Eigen::VectorXcd apply_channel(const ComplexChannel& ch, const TransmitFrame& frame,
                               double noise_var, const Eigen::VectorXcd& unit_noise) {
  if (!(noise_var >= 0.0)) throw ParameterError("noise variance must be >= 0");
  if (unit_noise.size() != ch.n_rx()) throw InputShapeError("noise vector length != n_rx");
  Eigen::VectorXcd y = noiseless(ch, frame);
  if (noise_var > 0.0) y += std::sqrt(2.0 * noise_var) * unit_noise;
  return y;
}

Eigen::VectorXd realify_vector(const Eigen::VectorXcd& v) {
  Eigen::VectorXd out(2 * v.size());
  out.head(v.size()) = v.real();
  out.tail(v.size()) = v.imag();
  return out;
}

RealSystem realify(const ComplexChannel& ch, const Eigen::VectorXcd& y, double noise_var) {
  if (y.size() != ch.n_rx()) throw InputShapeError("received vector length != n_rx");
  const Eigen::Index nr = ch.n_rx();
  const Eigen::Index nt = ch.n_tx();
  RealSystem sys;
  sys.h.resize(2 * nr, 2 * nt);
  sys.h.topLeftCorner(nr, nt) = ch.h.real();
  sys.h.topRightCorner(nr, nt) = -ch.h.imag();
  sys.h.bottomLeftCorner(nr, nt) = ch.h.imag();
  sys.h.bottomRightCorner(nr, nt) = ch.h.real();
  sys.y = realify_vector(y);
  sys.noise_var = noise_var;
  return sys;
}

double noise_variance_for_snr(double snr_db, const Constellation& c, int n_tx) {
  const double snr = std::pow(10.0, snr_db / 10.0);
  return n_tx * c.average_energy() / (2.0 * snr);
}

}  // namespace fsd
