#include "gbench/majorization.hpp"

#include "gbench/multimode_optimizer.hpp"
#include "gbench/seeding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gbench {

namespace {

std::vector<double> sorted_copy(std::span<const double> v) {
  std::vector<double> s(v.begin(), v.end());
  std::sort(s.begin(), s.end());
  return s;
}

// Prefix comparison of ascending vectors; `weak` extends the inequality to the
// full sum instead of requiring equality there.
bool prefix_dominated(std::span<const double> x, std::span<const double> y, double tol, bool weak) {
  if (x.size() != y.size()) throw std::invalid_argument("majorization: length mismatch");
  if (x.empty()) throw std::invalid_argument("majorization: empty vectors");
  const auto xs = sorted_copy(x);
  const auto ys = sorted_copy(y);
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t j = 0; j + 1 < xs.size(); ++j) {
    sx += xs[j];
    sy += ys[j];
    if (sx < sy - tol) return false;
  }
  sx += xs.back();
  sy += ys.back();
  return weak ? sx >= sy - tol : std::abs(sx - sy) <= tol;
}

}  // namespace

SpectrumVector::SpectrumVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("SpectrumVector: empty");
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("SpectrumVector: entries must be finite and >= 0");
  }
  std::sort(values_.begin(), values_.end());
}

double SpectrumVector::sum() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

bool majorized_by(std::span<const double> x, std::span<const double> y, double tol) {
  return prefix_dominated(x, y, tol, false);
}

bool weakly_majorized_by(std::span<const double> x, std::span<const double> y, double tol) {
  return prefix_dominated(x, y, tol, true);
}

bool majorizes(const SpectrumVector& y, const SpectrumVector& x) { return majorized_by(x.values(), y.values()); }

bool weakly_majorizes(const SpectrumVector& y, const SpectrumVector& x) {
  return weakly_majorized_by(x.values(), y.values());
}

std::pair<SpectrumVector, SpectrumVector> random_majorized_pair(std::size_t d, std::mt19937_64& rng, double lo,
                                                                double hi, std::size_t transforms) {
  if (d == 0) throw std::invalid_argument("random_majorized_pair: d must be >= 1");
  std::uniform_real_distribution<double> entry(lo, hi);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> y(d);
  for (auto& v : y) v = entry(rng);
  std::vector<double> x = y;
  if (d > 1) {
    std::uniform_int_distribution<std::size_t> index(0, d - 1);
    const std::size_t count = transforms == 0 ? 2 * d : transforms;
    for (std::size_t t = 0; t < count; ++t) {
      const std::size_t i = index(rng);
      std::size_t j = index(rng);
      while (j == i) j = index(rng);
      const double w = unit(rng);
      const double xi = x[i];
      const double xj = x[j];
      x[i] = w * xi + (1.0 - w) * xj;
      x[j] = w * xj + (1.0 - w) * xi;
    }
  }
  return {SpectrumVector(std::move(x)), SpectrumVector(std::move(y))};
}

bool eigenvalue_sum_majorized(const Matrix& x, const Matrix& y) {
  if (x.rows() != x.cols() || x.rows() != y.rows() || y.rows() != y.cols()) {
    throw std::invalid_argument("eigenvalue_sum_majorized: expected square matrices of equal size");
  }
  const Matrix xs = 0.5 * (x + x.transpose());
  const Matrix ys = 0.5 * (y + y.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> ex(xs, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Matrix> ey(ys, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Matrix> exy(xs + ys, Eigen::EigenvaluesOnly);
  // Eigen returns ascending eigenvalues, so the elementwise sum pairs like with like.
  const Vector summed = ex.eigenvalues() + ey.eigenvalues();
  const Vector& joint = exy.eigenvalues();
  const double tol = kMajorizationTol * std::max(1.0, summed.cwiseAbs().sum());
  return majorized_by(std::span(joint.data(), static_cast<std::size_t>(joint.size())),
                      std::span(summed.data(), static_cast<std::size_t>(summed.size())), tol);
}

double schur_convexity_check(std::size_t k, double budget, std::size_t trials, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("schur_convexity_check: k must be >= 2");
  if (!(budget > 0.0)) throw std::invalid_argument("schur_convexity_check: budget must be > 0");

  std::vector<double> worst(trials, 0.0);
  const auto total = static_cast<long long>(trials);
#pragma omp parallel for schedule(static)
  for (long long t = 0; t < total; ++t) {
    std::mt19937_64 rng(derive_seed(seed, {static_cast<std::uint64_t>(t)}));
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // Ascending lambda with sum_j (lambda_k - lambda_j) < budget, which is
    // exactly lambda_k < nu.
    std::vector<double> lam(k);
    lam[0] = 0.05 + 5.0 * unit(rng);
    std::vector<double> steps(k - 1);
    for (auto& s : steps) s = unit(rng);
    double spread = 0.0;
    for (std::size_t j = 1; j < k; ++j) {
      lam[j] = lam[j - 1] + steps[j - 1];
    }
    for (std::size_t j = 0; j < k; ++j) spread += lam[k - 1] - lam[j];
    if (spread > 0.0) {
      const double target = budget * (0.02 + 0.97 * unit(rng));
      const double scale = std::min(1.0, target / spread);
      for (std::size_t j = 1; j < k; ++j) lam[j] = lam[0] + (lam[j] - lam[0]) * scale;
    }
    const double nu = (budget + std::accumulate(lam.begin(), lam.end(), 0.0)) / static_cast<double>(k);

    double v = 0.0;
    const auto grad = [&](std::size_t j) { return 0.5 * (1.0 / nu - 1.0 / lam[j]) / std::log(2.0); };
    for (std::size_t j = 0; j < k; ++j) {
      v = std::max(v, grad(j));
      for (std::size_t i = 0; i < j; ++i) v = std::max(v, -(lam[j] - lam[i]) * (grad(j) - grad(i)));
    }

    // Transfer test on a random pair (i < j, so lam[i] <= lam[j]).
    std::uniform_int_distribution<std::size_t> index(0, k - 1);
    std::size_t i = index(rng);
    std::size_t j = index(rng);
    while (j == i) j = index(rng);
    if (i > j) std::swap(i, j);
    const double room = std::min(lam[i], nu - lam[j]);
    if (room > 0.0) {
      const double eps = room * (0.01 + 0.5 * unit(rng));
      std::vector<double> spread_out = lam;
      spread_out[i] -= eps;
      spread_out[j] += eps;
      std::sort(spread_out.begin(), spread_out.end());
      const double before = waterfill_objective(lam, budget);
      const double after = waterfill_objective(spread_out, budget);
      v = std::max(v, (before - after) / std::max(1.0, std::abs(before)));
    }
    worst[static_cast<std::size_t>(t)] = v;
  }
  return worst.empty() ? 0.0 : *std::max_element(worst.begin(), worst.end());
}

const char* to_string(ActiveCase c) {
  switch (c) {
    case ActiveCase::Equal: return "k_mu=k_lambda";
    case ActiveCase::MuMoreActive: return "k_mu>k_lambda";
    case ActiveCase::MuFewerActive: return "k_mu<k_lambda";
  }
  return "?";
}

CaseCheckResult case_inequality_check(const SpectrumVector& lambda, const SpectrumVector& mu, double budget) {
  if (lambda.size() != mu.size()) throw std::invalid_argument("case_inequality_check: dimension mismatch");
  const double tol = kMajorizationTol * std::max(1.0, mu.sum());
  if (!majorized_by(lambda.values(), mu.values(), tol)) {
    throw std::invalid_argument("case_inequality_check: lambda is not majorized by mu");
  }
  const auto wl = waterfill(lambda.values(), budget);
  const auto wm = waterfill(mu.values(), budget);
  CaseCheckResult res;
  res.k_lambda = wl.k_active;
  res.k_mu = wm.k_active;
  res.f_lambda = wl.mutual_info_bits;
  res.f_mu = wm.mutual_info_bits;
  res.active_case = res.k_mu == res.k_lambda ? ActiveCase::Equal
                    : res.k_mu > res.k_lambda ? ActiveCase::MuMoreActive
                                              : ActiveCase::MuFewerActive;
  res.holds = res.f_lambda <= res.f_mu + 1e-9;
  return res;
}

}  // namespace gbench
