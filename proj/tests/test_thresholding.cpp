#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "seba/thresholding.hpp"
#include "support/oracles.hpp"

using seba::DenseMatrix;

namespace {

// SparseBasis-shaped random fixture: entries in [-0.4, 1], every column
// rescaled so its maximum is exactly 1.
DenseMatrix random_sparse_fixture(std::size_t p, std::size_t r, seba::SplitMix64& rng) {
  DenseMatrix s(p, r);
  for (auto& v : s.data()) {
    v = rng.uniform(-0.4, 1.0);
    if (rng.uniform() < 0.4) v = 0.0;
  }
  for (std::size_t j = 0; j < r; ++j) {
    double* c = s.col(j);
    double mx = c[0];
    for (std::size_t i = 1; i < p; ++i) mx = std::max(mx, c[i]);
    if (mx <= 0.1) {
      c[rng.below(p)] = 0.5;
      mx = 0.5;
    }
    for (std::size_t i = 0; i < p; ++i) c[i] /= mx;
  }
  return s;
}

}  // namespace

TEST_CASE("hard threshold boundary is strict") {
  CHECK(seba::hard_threshold(0.5, 0.5) == 0.0);
  CHECK(seba::hard_threshold(0.6, 0.5) == 0.6);
  CHECK(seba::hard_threshold(-0.1, 0.0) == -0.1);
}

TEST_CASE("partition of unity with no excess row leaves the matrix alone") {
  const auto s = DenseMatrix::from_rows({{0.5, 0.2}, {0.0, 0.9}, {-0.3, 0.4}});
  const auto fa = seba::partition_unity(s);
  CHECK(fa.tau == 0.0);
  CHECK(fa.thresholded_S(2, 0) == 0.0);  // clamped negative
  CHECK(fa.thresholded_S(2, 1) == 0.4);
  CHECK(fa.a == std::vector<int>{1, 2, 2});
}

TEST_CASE("partition of unity single row trace") {
  const auto s = DenseMatrix::from_rows({{0.7, 0.6}});
  const auto fa = seba::partition_unity(s);
  CHECK(fa.tau == Catch::Approx(0.6));
  CHECK(fa.thresholded_S(0, 0) == Catch::Approx(0.7));
  CHECK(fa.thresholded_S(0, 1) == 0.0);
  CHECK(fa.a == std::vector<int>{1});
}

TEST_CASE("overlapping bumps shrink only where the overlap exceeds one") {
  // synthetic three-bump fixture: s1 + s2 > 1 on a central window
  const std::size_t p = 400;
  DenseMatrix s(p, 3);
  for (std::size_t i = 0; i < p; ++i) {
    const double x = (double(i) + 0.5) / p;
    s(i, 0) = std::exp(-80.0 * (x - 0.35) * (x - 0.35));
    s(i, 1) = std::exp(-80.0 * (x - 0.5) * (x - 0.5));
    s(i, 2) = std::exp(-80.0 * (x - 0.8) * (x - 0.8));
  }
  const auto fa = seba::partition_unity(s);
  CHECK(fa.tau == Catch::Approx(oracles::brute_force_tau_pu(s)));
  for (std::size_t i = 0; i < p; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < 3; ++j) sum += fa.thresholded_S(i, j);
    CHECK(sum <= 1.0 + 1e-12);
  }
  // supports only shrink
  for (std::size_t k = 0; k < s.data().size(); ++k)
    if (fa.thresholded_S.data()[k] != 0.0)
      CHECK(fa.thresholded_S.data()[k] == Catch::Approx(s.data()[k]));
}

TEST_CASE("disjoint support leaves already-disjoint columns alone") {
  const auto s = DenseMatrix::from_rows({{1.0, 0.0}, {0.0, 0.6}, {0.0, 1.0}});
  const auto fa = seba::disjoint_support(s);
  CHECK(fa.tau == 0.0);
  CHECK(seba::max_abs_diff(fa.thresholded_S, s) == 0.0);
  CHECK(fa.a == std::vector<int>{1, 2, 2});
}

TEST_CASE("disjoint support single row trace") {
  const auto s = DenseMatrix::from_rows({{0.7, 0.6}});
  const auto fa = seba::disjoint_support(s);
  CHECK(fa.tau == Catch::Approx(0.6));
  CHECK(fa.thresholded_S(0, 0) == Catch::Approx(0.7));
  CHECK(fa.thresholded_S(0, 1) == 0.0);
  // at most one positive entry per row afterwards
  const auto big = seba::disjoint_support(
      DenseMatrix::from_rows({{0.7, 0.65, 0.2}, {0.5, 0.72, 0.71}, {0.9, 0.1, 0.0}}));
  for (std::size_t i = 0; i < 3; ++i) {
    int positives = 0;
    for (std::size_t j = 0; j < 3; ++j)
      if (big.thresholded_S(i, j) > 0.0) ++positives;
    CHECK(positives <= 1);
  }
}

TEST_CASE("threshold order theorem on random fixtures") {
  seba::SplitMix64 rng(77);
  for (int t = 0; t < 200; ++t) {
    const auto s = random_sparse_fixture(3 + rng.below(40), 1 + rng.below(5), rng);
    const double tau_pu = seba::partition_unity(s).tau;
    const double tau_dp = seba::disjoint_support(s).tau;
    CHECK(tau_dp >= tau_pu - 1e-12);
    if (tau_dp >= 0.5) CHECK(tau_dp == Catch::Approx(tau_pu).margin(1e-12));
  }
}

TEST_CASE("max likelihood") {
  const auto s = DenseMatrix::from_rows({{0.2, 0.9}, {-0.5, -0.1}, {0.3, 0.3}});
  const auto fa = seba::max_likelihood(s);
  CHECK(fa.a == std::vector<int>{2, 0, 1});  // ties to the smaller index
  // support of a equals the rows with a positive maximum
  for (std::size_t i = 0; i < 3; ++i) {
    double mx = std::max(s(i, 0), s(i, 1));
    CHECK((fa.a[i] != 0) == (mx > 0.0));
  }
}

TEST_CASE("max likelihood ignores monotone rescaling of a row") {
  const auto a = seba::max_likelihood(DenseMatrix::from_rows({{0.2, 0.5, 0.4}}));
  const auto b = seba::max_likelihood(DenseMatrix::from_rows({{0.04, 0.25, 0.16}}));
  CHECK(a.a == b.a);
}

TEST_CASE("superposition") {
  const auto s = DenseMatrix::from_rows({{0.8, 0.8}, {-0.3, 0.4}, {1.0, 0.0}});
  const auto super = seba::superposition(s);
  CHECK(super[0] == 1.0);  // clipped
  CHECK(super[1] == Catch::Approx(0.4));
  CHECK(super[2] == 1.0);
  // disjoint nonnegative columns with max 1: superposition is the rowwise max
  const auto disj = DenseMatrix::from_rows({{1.0, 0.0}, {0.0, 0.3}, {0.0, 1.0}});
  const auto sd = seba::superposition(disj);
  CHECK(sd == std::vector<double>{1.0, 0.3, 1.0});
}

TEST_CASE("superposition after disjoint thresholding never grows") {
  seba::SplitMix64 rng(81);
  const auto s = random_sparse_fixture(30, 4, rng);
  const auto raw = seba::superposition(s);
  const auto thr = seba::superposition(seba::disjoint_support(s).thresholded_S);
  for (std::size_t i = 0; i < raw.size(); ++i) CHECK(thr[i] <= raw[i] + 1e-15);
}

TEST_CASE("manual threshold is a pass-through hard cut") {
  const auto s = DenseMatrix::from_rows({{0.8, 0.2}, {0.4, -0.5}});
  const auto fa = seba::manual_threshold(s, 0.3);
  CHECK(fa.thresholded_S(0, 0) == 0.8);
  CHECK(fa.thresholded_S(0, 1) == 0.0);
  CHECK(fa.thresholded_S(1, 0) == 0.4);
  CHECK(fa.thresholded_S(1, 1) == 0.0);
  CHECK(fa.a == std::vector<int>{1, 1});
}
