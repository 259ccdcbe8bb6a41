#include "gbench/majorization.hpp"

#include <gtest/gtest.h>

#include <random>

#include "gbench/multimode_optimizer.hpp"

using namespace gbench;

namespace {
using V = std::vector<double>;
}

TEST(majorization, majorized_by_examples) {
  EXPECT_TRUE(majorized_by(V{1, 2}, V{0.5, 2.5}));
  EXPECT_TRUE(majorized_by(V{1, 2}, V{1, 2}));
  EXPECT_FALSE(majorized_by(V{0.5, 2.5}, V{1, 2}));
  EXPECT_FALSE(majorized_by(V{1, 2}, V{0.5, 2.0}));  // totals differ
  EXPECT_THROW(majorized_by(V{1, 2}, V{1, 2, 3}), std::invalid_argument);
}

TEST(majorization, weak_examples) {
  EXPECT_TRUE(weakly_majorized_by(V{1, 2}, V{0.5, 2}));
  EXPECT_FALSE(weakly_majorized_by(V{0.4, 2}, V{0.5, 2.5}));
  EXPECT_TRUE(weakly_majorizes(SpectrumVector({0.5, 2.0}), SpectrumVector({1.0, 2.0})));
  EXPECT_TRUE(majorizes(SpectrumVector({2.5, 0.5}), SpectrumVector({2.0, 1.0})));
}

TEST(majorization, spectrum_vector_sorted) {
  const SpectrumVector v({3.0, 1.0, 2.0});
  EXPECT_EQ(v.values(), (V{1.0, 2.0, 3.0}));
  EXPECT_DOUBLE_EQ(v.sum(), 6.0);
  EXPECT_THROW(SpectrumVector({-1.0}), std::invalid_argument);
}

TEST(majorization, random_pairs_are_majorized) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t d = 1 + static_cast<std::size_t>(t % 8);
    const auto [x, y] = random_majorized_pair(d, rng);
    EXPECT_TRUE(majorized_by(x.values(), y.values()));
    EXPECT_TRUE(weakly_majorized_by(x.values(), y.values()));
  }
}

TEST(majorization, eigenvalue_sum_property) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  for (int t = 0; t < 1000; ++t) {
    const int n = 2 + t % 7;
    Matrix a(n, n), b(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        a(i, j) = g(rng);
        b(i, j) = g(rng);
      }
    }
    EXPECT_TRUE(eigenvalue_sum_majorized(a + a.transpose(), b + b.transpose()));
  }
}

TEST(majorization, eigenvalue_sum_detects_equality_case) {
  // Commuting diagonal matrices with co-sorted spectra give equality.
  Matrix a = Matrix::Zero(3, 3), b = Matrix::Zero(3, 3);
  a.diagonal() << 1, 2, 3;
  b.diagonal() << 0.5, 1, 4;
  EXPECT_TRUE(eigenvalue_sum_majorized(a, b));
}

TEST(majorization, schur_convexity) {
  for (std::size_t k = 2; k <= 8; ++k) EXPECT_LT(schur_convexity_check(k, 3.0, 2000, 100 + k), 1e-7);
}

TEST(majorization, objective_symmetry_and_monotonicity) {
  const V l{0.4, 0.9, 1.3};
  const V swapped{0.9, 0.4, 1.3};
  EXPECT_NEAR(waterfill_objective(l, 2.0), waterfill_objective(swapped, 2.0), 1e-12);
  const V bigger{0.4, 1.0, 1.3};
  EXPECT_LT(waterfill_objective(bigger, 2.0), waterfill_objective(l, 2.0));
}

TEST(majorization, two_coordinate_sign_algebra) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.05, 3.0);
  for (int t = 0; t < 1000; ++t) {
    double l1 = u(rng), l2 = u(rng);
    if (l1 > l2) std::swap(l1, l2);
    // df/dl_j = 1/2 (1/nu - 1/l_j) / ln 2, so the difference is
    // 1/2 (1/l1 - 1/l2) / ln 2 times (l2 - l1), never negative.
    const double h = 1e-6;
    const double budget = 2.0 + 3.0 * u(rng);
    const double d1 = (waterfill_objective(V{l1 + h, l2}, budget) - waterfill_objective(V{l1 - h, l2}, budget)) / (2 * h);
    const double d2 = (waterfill_objective(V{l1, l2 + h}, budget) - waterfill_objective(V{l1, l2 - h}, budget)) / (2 * h);
    EXPECT_GE((l2 - l1) * (d2 - d1), -1e-6);
    EXPECT_NEAR((l2 - l1) * (d2 - d1), (l2 - l1) * 0.5 * (1 / l1 - 1 / l2) / std::log(2.0), 1e-5);
  }
}

TEST(majorization, case_inequality_examples) {
  const SpectrumVector same({1.0, 2.0, 3.0});
  const auto eq = case_inequality_check(same, same, 1.0);
  EXPECT_TRUE(eq.holds);
  EXPECT_DOUBLE_EQ(eq.f_lambda, eq.f_mu);

  // With budget 0.5 only the smallest entry of mu is active, while both
  // 1.5 entries of lambda share the water.
  const auto r = case_inequality_check(SpectrumVector({1.5, 1.5, 3.0}), SpectrumVector({1.0, 2.0, 3.0}), 0.5);
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.active_case, ActiveCase::MuFewerActive);
  EXPECT_EQ(r.k_lambda, 2u);
  EXPECT_EQ(r.k_mu, 1u);

  EXPECT_THROW(case_inequality_check(SpectrumVector({1.0, 2.0}), SpectrumVector({1.5, 1.5}), 1.0),
               std::invalid_argument);
}

TEST(majorization, case_inequality_randomized) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t seen[3] = {0, 0, 0};
  for (int t = 0; t < 20000; ++t) {
    const std::size_t d = 2 + static_cast<std::size_t>(u(rng) * 7);
    const auto [lambda, mu] = random_majorized_pair(d, rng);
    const double budget = std::pow(10.0, -2.0 + 3.0 * u(rng));
    const auto r = case_inequality_check(lambda, mu, budget);
    EXPECT_TRUE(r.holds) << "f_lambda=" << r.f_lambda << " f_mu=" << r.f_mu;
    ++seen[static_cast<int>(r.active_case)];
  }
  EXPECT_GT(seen[0], 0u);
  EXPECT_GT(seen[1], 0u);
  EXPECT_GT(seen[2], 0u);
}
