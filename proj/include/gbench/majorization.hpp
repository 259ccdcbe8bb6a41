#pragma once

// Majorization predicates (ascending-order convention) and randomized checks of
// the inequalities behind the optimality of separable Gaussian encoding.

#include "gbench/gaussian_core.hpp"

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace gbench {

inline constexpr double kMajorizationTol = 1e-10;

/// Nonnegative spectrum stored in ascending order.
class SpectrumVector {
 public:
  explicit SpectrumVector(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }
  double sum() const;

 private:
  std::vector<double> values_;
};

/// x < y (y majorizes x): with both sorted ascending, every proper prefix sum
/// of x is >= that of y and the totals agree. Inputs are sorted internally and
/// may be any real values. Throws std::invalid_argument on length mismatch.
bool majorized_by(std::span<const double> x, std::span<const double> y, double tol = kMajorizationTol);
/// Weak form: prefix inequality for all prefixes including the full sum.
bool weakly_majorized_by(std::span<const double> x, std::span<const double> y,
                         double tol = kMajorizationTol);

/// True iff y majorizes x.
bool majorizes(const SpectrumVector& y, const SpectrumVector& x);
/// True iff y weakly majorizes x.
bool weakly_majorizes(const SpectrumVector& y, const SpectrumVector& x);

/// Random pair (x, y) with x < y: y has entries uniform in [lo, hi] and x is
/// y pushed through `transforms` random T-transforms
/// t I + (1 - t) P_ij, a doubly stochastic map.
std::pair<SpectrumVector, SpectrumVector> random_majorized_pair(std::size_t d, std::mt19937_64& rng,
                                                                double lo = 0.05, double hi = 5.0,
                                                                std::size_t transforms = 0);

/// The sorted eigenvalues of X + Y are majorized by sorted(eig X) +
/// sorted(eig Y) for symmetric X, Y.
bool eigenvalue_sum_majorized(const Matrix& x, const Matrix& y);

/// Worst signed violation of Schur-convexity (and of monotone decrease) of
/// the water-filling objective f(lambda_1..lambda_k) on random ascending
/// arguments lying below the water level. Two tests per sample:
///   * analytic: (l_j - l_i)(df/dl_j - df/dl_i) >= 0 and df/dl_j <= 0;
///   * transfer: spreading eps from a smaller to a larger coordinate must not
///     decrease f.
/// Returns max(0, largest violation); expected <= 1e-7.
double schur_convexity_check(std::size_t k, double budget, std::size_t trials, std::uint64_t seed);

enum class ActiveCase {
  Equal,          ///< k_mu == k_lambda
  MuMoreActive,   ///< k_mu > k_lambda
  MuFewerActive,  ///< k_mu < k_lambda
};

const char* to_string(ActiveCase c);

struct CaseCheckResult {
  bool holds = false;
  ActiveCase active_case = ActiveCase::Equal;
  std::size_t k_lambda = 0;
  std::size_t k_mu = 0;
  double f_lambda = 0.0;
  double f_mu = 0.0;
};

/// Water-fills lambda and mu with the same budget and checks
/// f(lambda) <= f(mu) + 1e-9. Throws std::invalid_argument unless lambda < mu
/// and the dimensions agree.
CaseCheckResult case_inequality_check(const SpectrumVector& lambda, const SpectrumVector& mu, double budget);

}  // namespace gbench
