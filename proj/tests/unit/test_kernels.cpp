#include <doctest.h>

#include <array>
#include <cstring>
#include <vector>

#include "fsd/arch/fixed_word.hpp"
#include "fsd/kernels/kernels.hpp"
#include "fsd/rng.hpp"

using namespace fsd;
using namespace fsd::kernels;

namespace {

std::vector<const KernelTable*> tables() {
  std::vector<const KernelTable*> out{table_for(Isa::kScalar)};
  if (const KernelTable* avx2 = table_for(Isa::kAvx2)) out.push_back(avx2);
  return out;
}

int random_raw(Rng& rng) { return static_cast<int>(rng.next_u64() % 4096) - 2048; }
int random_symbol(Rng& rng) { return std::array{-3, -1, 1, 3}[rng.next_u64() % 4]; }

arch::FixedWord word(int raw, int frac = 7) { return arch::FixedWord::saturate(raw, frac); }

}  // namespace

TEST_CASE("dispatch") {
  REQUIRE(table_for(Isa::kScalar) != nullptr);
  CHECK(table_for(Isa::kScalar)->isa == Isa::kScalar);
  MESSAGE("active kernels: " << to_string(active().isa));
  if (table_for(Isa::kAvx2) == nullptr) MESSAGE("AVX2 variant unavailable; comparing scalar only");
}

TEST_CASE("PED lanes equal the FixedWord reference for every r and symbol") {
  for (const KernelTable* k : tables()) {
    CAPTURE(to_string(k->isa));
    std::vector<std::int16_t> d(4096), b(4096), out(4096);
    std::vector<std::int8_t> s(4096);
    Rng rng(1);
    for (int lane = 0; lane < 4096; ++lane) {
      d[lane] = static_cast<std::int16_t>(rng.next_u64() % 2048);
      b[lane] = static_cast<std::int16_t>(random_raw(rng));
    }
    int mismatches = 0;
    for (int r = -2048; r <= 2047; ++r) {
      for (int sym : {-3, -1, 1, 3}) {
        std::memset(s.data(), sym, s.size());
        k->fx_ped_lanes(d.data(), b.data(), static_cast<std::int16_t>(r), s.data(), 4096, 7, out.data());
        // Spot-check a rotating subset of lanes against the scalar word ops.
        for (int lane = (r + 2048) % 64; lane < 4096; lane += 64) {
          const auto ref = arch::fx_ped_step(word(d[lane]), word(b[lane]), word(r), sym);
          mismatches += out[lane] != ref.raw();
        }
      }
    }
    CHECK(mismatches == 0);
  }
}

TEST_CASE("DE lanes equal the FixedWord reference") {
  for (const KernelTable* k : tables()) {
    CAPTURE(to_string(k->isa));
    std::vector<std::int16_t> b(4096);
    std::vector<std::int8_t> out(4096);
    for (int lane = 0; lane < 4096; ++lane) b[lane] = static_cast<std::int16_t>(lane - 2048);
    int mismatches = 0;
    for (int r = 0; r <= 2047; r += 3) {
      k->fx_de_lanes(b.data(), static_cast<std::int16_t>(r), 4096, out.data());
      for (int lane = 0; lane < 4096; ++lane) {
        mismatches += out[lane] != arch::fx_direct_enumerate(word(b[lane]), word(r));
      }
    }
    CHECK(mismatches == 0);
  }
}

TEST_CASE("interference lanes equal the FixedWord reference") {
  for (const KernelTable* k : tables()) {
    CAPTURE(to_string(k->isa));
    Rng rng(2);
    int mismatches = 0;
    for (int trial = 0; trial < 3000; ++trial) {
      const int terms = static_cast<int>(rng.next_u64() % 8);
      const int lanes = 1 + static_cast<int>(rng.next_u64() % 19);
      const std::int16_t y = static_cast<std::int16_t>(random_raw(rng));
      std::vector<std::int16_t> r_row(terms), out(lanes);
      std::vector<std::int8_t> sym(static_cast<std::size_t>(terms) * lanes);
      for (auto& v : r_row) v = static_cast<std::int16_t>(random_raw(rng));
      for (auto& v : sym) v = static_cast<std::int8_t>(random_symbol(rng));
      k->fx_interference_lanes(y, r_row.data(), sym.data(), terms, lanes, out.data());
      for (int l = 0; l < lanes; ++l) {
        std::vector<arch::FixedWord> rw;
        std::vector<int> sv;
        for (int t = 0; t < terms; ++t) {
          rw.push_back(word(r_row[t]));
          sv.push_back(sym[t * lanes + l]);
        }
        mismatches += out[l] != arch::fx_interference(word(y), rw, sv).raw();
      }
    }
    CHECK(mismatches == 0);
  }
}

TEST_CASE("variants are bit-identical to scalar") {
  const KernelTable* ref = table_for(Isa::kScalar);
  const KernelTable* simd = table_for(Isa::kAvx2);
  if (simd == nullptr) return;
  Rng rng(3);

  SUBCASE("lattice metrics") {
    for (int trial = 0; trial < 200; ++trial) {
      const int n = 1 + static_cast<int>(rng.next_u64() % 10);
      const std::size_t count = 1 + rng.next_u64() % 300;
      std::vector<double> r(static_cast<std::size_t>(n) * n, 0.0), y(n), s(n * count);
      for (int i = 0; i < n; ++i) {
        y[i] = rng.gaussian() * 5.0;
        for (int j = i; j < n; ++j) r[i * n + j] = rng.gaussian();
      }
      for (auto& v : s) v = random_symbol(rng);
      std::vector<double> a(count), b(count);
      ref->lattice_metrics(r.data(), y.data(), n, s.data(), count, a.data());
      simd->lattice_metrics(r.data(), y.data(), n, s.data(), count, b.data());
      REQUIRE(std::memcmp(a.data(), b.data(), count * sizeof(double)) == 0);
    }
  }
  SUBCASE("fixed-point lanes, random sizes and extremes") {
    for (int trial = 0; trial < 5000; ++trial) {
      const int lanes = 1 + static_cast<int>(rng.next_u64() % 33);
      const int frac = static_cast<int>(rng.next_u64() % 12);
      std::vector<std::int16_t> d(lanes), b(lanes), o1(lanes), o2(lanes);
      std::vector<std::int8_t> s(lanes), e1(lanes), e2(lanes);
      for (int l = 0; l < lanes; ++l) {
        d[l] = static_cast<std::int16_t>(trial % 7 == 0 ? 2047 : rng.next_u64() % 2048);
        b[l] = static_cast<std::int16_t>(trial % 5 == 0 ? (l % 2 ? 2047 : -2048) : random_raw(rng));
        s[l] = static_cast<std::int8_t>(random_symbol(rng));
      }
      const std::int16_t r = static_cast<std::int16_t>(trial % 3 == 0 ? -2048 : random_raw(rng));
      ref->fx_ped_lanes(d.data(), b.data(), r, s.data(), lanes, frac, o1.data());
      simd->fx_ped_lanes(d.data(), b.data(), r, s.data(), lanes, frac, o2.data());
      REQUIRE(o1 == o2);
      const std::int16_t rp = static_cast<std::int16_t>(rng.next_u64() % 2048);
      ref->fx_de_lanes(b.data(), rp, lanes, e1.data());
      simd->fx_de_lanes(b.data(), rp, lanes, e2.data());
      REQUIRE(e1 == e2);
    }
  }
}
