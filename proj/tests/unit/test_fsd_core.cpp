#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <set>

#include "fsd/errors.hpp"
#include "fsd/fsd_core.hpp"
#include "fsd/oracle.hpp"
#include "support/oracles.hpp"

using namespace fsd;

namespace {
const Constellation kQam = Constellation::qam16();
const NodeDistribution kStd = NodeDistribution::standard(8, 4);
}  // namespace

TEST_CASE("node distribution parsing and counts") {
  const NodeDistribution a = NodeDistribution::parse("1,1,1,1,1,1,4,4", 4);
  const NodeDistribution b = NodeDistribution::parse("11111144", 4);
  CHECK(a == b);
  CHECK(a == kStd);
  CHECK(a.levels() == 8);
  CHECK(a.is_full(7));
  CHECK(a.is_full(6));
  CHECK_FALSE(a.is_full(5));
  CHECK(a.list_size() == 16);
  CHECK(a.visited_nodes() == 4 + 16 * 7);
  CHECK(a.to_string() == "1,1,1,1,1,1,4,4");
  CHECK(NodeDistribution::parse(a.to_string(), 4) == a);

  CHECK_THROWS_AS(NodeDistribution::parse("1,1,2,1", 4), ConfigError);
  CHECK_THROWS_AS(NodeDistribution::parse("1,x", 4), ConfigError);
  CHECK_THROWS_AS(NodeDistribution::parse("", 4), ConfigError);
  CHECK_THROWS_AS(NodeDistribution({1, 1, 3}, 4), ConfigError);
}

TEST_CASE("compute_b") {
  Eigen::VectorXd y(8);
  y << 0.5, -1.0, 2.0, 3.5, -0.25, 1.0, 4.0, -2.0;
  const SymbolVector path{1, -1, 3, -3, 1, 1, -1, 3};
  CHECK(compute_b(Eigen::MatrixXd::Identity(8, 8), y, path, 7) == y(7));
  for (int i = 0; i < 8; ++i) CHECK(compute_b(Eigen::MatrixXd::Identity(8, 8), y, path, i) == y(i));

  for (int trial = 0; trial < 200; ++trial) {
    const testing::Instance in = testing::random_instance(1000 + trial, 10.0);
    CHECK(compute_b(in.qrd.r, in.y_zf, path, 7) == in.y_zf(7));
    for (int i = 0; i < 8; ++i) {
      const double dot = in.qrd.r.row(i).segment(i + 1, 7 - i).dot(
          testing::as_vector(path).segment(i + 1, 7 - i));
      CHECK(compute_b(in.qrd.r, in.y_zf, path, i) == doctest::Approx(in.y_zf(i) - dot).epsilon(1e-12));
    }
  }
}

TEST_CASE("direct enumeration picks the nearest symbol, ties to the smaller") {
  CHECK(direct_enumerate(0.0, 1.0, kQam) == -1);
  CHECK(direct_enumerate(3.2, 1.0, kQam) == 3);
  CHECK(direct_enumerate(-2.0, 1.0, kQam) == -3);
  CHECK(direct_enumerate(2.0, 1.0, kQam) == 1);
  CHECK(direct_enumerate(100.0, 0.5, kQam) == 3);
  CHECK(direct_enumerate(-100.0, 0.5, kQam) == -3);

  Rng rng(8);
  for (int trial = 0; trial < 10000; ++trial) {
    const double b = (rng.uniform() - 0.5) * 20.0;
    const double r = 0.05 + rng.uniform() * 4.0;
    int brute = 0;
    double best = 1e300;
    for (int s : {-3, -1, 1, 3}) {
      if (std::abs(b - r * s) < best) {
        best = std::abs(b - r * s);
        brute = s;
      }
    }
    CHECK(direct_enumerate(b, r, kQam) == brute);
  }
}

TEST_CASE("accumulate_ped") {
  CHECK(accumulate_ped(1.5, 2.0, 2.0, 1) == 1.5);
  CHECK(accumulate_ped(1.0, 2.0, 1.0, 1) == 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const testing::Instance in = testing::random_instance(2000 + trial, 5.0);
    const SymbolVector& s = in.true_path;
    double d = 0.0;
    for (int i = 7; i >= 0; --i) {
      const double next = accumulate_ped(d, compute_b(in.qrd.r, in.y_zf, s, i), in.qrd.r(i, i), s[i]);
      CHECK(next >= d);
      d = next;
      CHECK(d == doctest::Approx(testing::dense_partial(in.qrd.r, in.y_zf, s, i)).epsilon(1e-9));
    }
    CHECK(d == doctest::Approx(testing::dense_metric(in.qrd.r, in.y_zf, s)).epsilon(1e-9));
  }
}

TEST_CASE("fsd_search: sizes, order and per-candidate invariants") {
  for (int trial = 0; trial < 300; ++trial) {
    const testing::Instance in = testing::random_instance(3000 + trial, 2.0 * (trial % 11));
    const FsdResult res = fsd_search(in.qrd.r, in.y_zf, kStd, kQam);
    REQUIRE(res.candidates.size() == 16);
    CHECK(res.visited_nodes == 116);

    std::set<SymbolVector> unique;
    for (std::size_t p = 0; p < 16; ++p) {
      const Candidate& cand = res.candidates[p];
      unique.insert(cand.path);
      // Zig-zag column order: column from the top-level symbol, row from level 6.
      CHECK(cand.path[7] == kQam.alphabet()[p / 4]);
      CHECK(cand.path[6] == kQam.alphabet()[p % 4]);
      CHECK(cand.ped >= 0.0);
      CHECK(cand.ped == doctest::Approx(testing::dense_metric(in.qrd.r, in.y_zf, cand.path)).epsilon(1e-9));
      for (int i = 0; i + 1 < 8; ++i) CHECK(cand.level_peds[i] >= cand.level_peds[i + 1]);
      CHECK(cand.level_peds[0] == cand.ped);
    }
    CHECK(unique.size() == 16);
  }
}

TEST_CASE("fsd_search equals the naive per-path enumeration") {
  const NodeDistribution odd({1, 4, 1, 1, 4, 1, 1, 4}, 4);
  for (int trial = 0; trial < 300; ++trial) {
    const testing::Instance in = testing::random_instance(4000 + trial, 3.0 * (trial % 8));
    for (const NodeDistribution& dist : {kStd, odd}) {
      const FsdResult res = fsd_search(in.qrd.r, in.y_zf, dist, kQam);
      const auto naive = testing::naive_fsd(in.qrd.r, in.y_zf, dist, kQam);
      REQUIRE(res.candidates.size() == naive.size());
      CHECK(res.visited_nodes == dist.visited_nodes());
      for (std::size_t p = 0; p < naive.size(); ++p) {
        CHECK(res.candidates[p].path == naive[p].path);
        CHECK(std::abs(res.candidates[p].ped - naive[p].ped) < 1e-9);
      }
    }
  }
}

TEST_CASE("visited nodes never depend on the realization") {
  std::set<std::size_t> visited;
  for (int trial = 0; trial < 300; ++trial) {
    const testing::Instance in = testing::random_instance(5000 + trial, (trial % 3) * 10.0);
    visited.insert(fsd_search(in.qrd.r, in.y_zf, kStd, kQam).visited_nodes);
  }
  CHECK(visited == std::set<std::size_t>{116});
}

TEST_CASE("noise-free input: the transmitted path is the zero-PED list minimum") {
  for (int trial = 0; trial < 200; ++trial) {
    const testing::Instance in = testing::random_instance(6000 + trial, 300.0);
    const FsdResult res = fsd_search(in.qrd.r, in.y_zf, kStd, kQam);
    const std::size_t best = best_candidate(res.candidates);
    CHECK(res.candidates[best].path == in.true_path);
    CHECK(res.candidates[best].ped < 1e-20);
    CHECK(hard_decision(res.candidates, in.qrd.perm, kQam) == in.tx.bits);
  }
}

TEST_CASE("list minimum is never better than ML and equals it when ML is listed") {
  for (int trial = 0; trial < 100; ++trial) {
    const testing::Instance in = testing::random_instance(7000 + trial, 4.0 + (trial % 5) * 4.0);
    const FsdResult res = fsd_search(in.qrd.r, in.y_zf, kStd, kQam);
    const MlSolution ml = exhaustive_ml(in.qrd.r, in.y_zf, kQam);
    const Candidate& best = res.candidates[best_candidate(res.candidates)];
    // Incremental PEDs and dense lattice metrics differ only by summation order.
    const double tol = 1e-12 * (1.0 + ml.ped);
    CHECK(best.ped >= ml.ped - tol);
    const bool listed = std::any_of(res.candidates.begin(), res.candidates.end(),
                                    [&](const Candidate& c) { return c.path == ml.path; });
    CHECK(listed == (best.path == ml.path));
    if (listed) CHECK(std::abs(best.ped - ml.ped) <= tol);
  }
}

TEST_CASE("all-full distribution on a 2x2 system is exhaustive enumeration") {
  const NodeDistribution full({4, 4, 4, 4}, 4);
  for (int trial = 0; trial < 100; ++trial) {
    const testing::Instance in = testing::random_instance(8000 + trial, 10.0, QrdMode::kSorted, 2, 2);
    const FsdResult res = fsd_search(in.qrd.r, in.y_zf, full, kQam);
    REQUIRE(res.candidates.size() == 256);
    const std::vector<double> metrics = lattice_metrics(in.qrd.r, in.y_zf, kQam);
    for (std::size_t idx = 0; idx < 256; ++idx) {
      CHECK(res.candidates[idx].path == lattice_point(idx, 4, kQam));
      CHECK(std::abs(res.candidates[idx].ped - metrics[idx]) < 1e-9);
    }
    const MlSolution ml = exhaustive_ml(in.qrd.r, in.y_zf, kQam);
    CHECK(res.candidates[best_candidate(res.candidates)].path == ml.path);
  }
}

TEST_CASE("hard decision") {
  CandidateList single(1);
  single[0].path = {1, -1, 3, -3, 1, 1, -1, 3};
  const std::vector<int> identity{0, 1, 2, 3, 4, 5, 6, 7};
  CHECK(hard_decision(single, identity, kQam) == demap(single[0].path, kQam));

  CandidateList tie(2);
  tie[0].path = {1, 1, 1, 1, 1, 1, 1, 1};
  tie[1].path = {3, 3, 3, 3, 3, 3, 3, 3};
  tie[0].ped = tie[1].ped = 2.0;
  CHECK(best_candidate(tie) == 0);
  CHECK_THROWS_AS(best_candidate(CandidateList{}), InputShapeError);

  for (int trial = 0; trial < 1000; ++trial) {
    const testing::Instance in = testing::random_instance(9000 + trial, 12.0);
    const FsdResult res = fsd_search(in.qrd.r, in.y_zf, kStd, kQam);
    std::size_t oracle = 0;
    double best = 1e300;
    for (std::size_t p = 0; p < res.candidates.size(); ++p) {
      const double m = testing::channel_metric(in.sys, unpermute_symbols(in.qrd.perm, res.candidates[p].path));
      if (m < best - 1e-9) {
        best = m;
        oracle = p;
      }
    }
    CHECK(hard_decision(res.candidates, in.qrd.perm, kQam) ==
          testing::path_bits(res.candidates[oracle].path, in.qrd.perm, kQam));
  }
}

TEST_CASE("fsd_search rejects mismatched shapes") {
  const testing::Instance in = testing::random_instance(1, 10.0);
  CHECK_THROWS_AS(fsd_search(in.qrd.r, in.y_zf.head(7), kStd, kQam), InputShapeError);
  CHECK_THROWS_AS(fsd_search(in.qrd.r, in.y_zf, NodeDistribution::standard(6, 4), kQam),
                  InputShapeError);
}
