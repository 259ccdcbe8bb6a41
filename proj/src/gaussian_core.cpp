#include "gbench/gaussian_core.hpp"

#include "gbench/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace gbench {

namespace {

constexpr double kPhysicalTol = 1e-9;
constexpr double kPassiveTol = 1e-10;
constexpr double kPairTol = 1e-8;

void require_even_square(const Matrix& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols() || m.rows() % 2 != 0) {
    throw std::invalid_argument(std::string(what) + ": expected a non-empty 2N x 2N matrix");
  }
}

}  // namespace

CovMatrix::CovMatrix(const Matrix& data) {
  require_even_square(data, "CovMatrix");
  if (!data.allFinite()) throw std::invalid_argument("CovMatrix: non-finite entry");
  data_ = 0.5 * (data + data.transpose());
  Eigen::LLT<Matrix> llt(data_);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("CovMatrix: matrix is not positive definite");
  }
  const auto nu = symplectic_eigenvalues(data_);
  if (nu.front() < 0.5 - kPhysicalTol) {
    throw std::invalid_argument("CovMatrix: symplectic eigenvalue " + std::to_string(nu.front()) +
                                " below 1/2 (unphysical)");
  }
}

Vector CovMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(data_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

CovMatrix operator+(const CovMatrix& a, const CovMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("CovMatrix sum: dimension mismatch");
  // A sum of physical covariances is physical.
  return CovMatrix(a.data_ + b.data_, CovMatrix::Unchecked{});
}

SqueezingSpectrum::SqueezingSpectrum(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("SqueezingSpectrum: empty");
  for (double r : values_) {
    if (!std::isfinite(r) || r < 0.0) {
      throw std::invalid_argument("SqueezingSpectrum: squeezing parameters must be finite and >= 0");
    }
  }
  std::sort(values_.begin(), values_.end(), std::greater<>());
}

SqueezingSpectrum SqueezingSpectrum::zeros(std::size_t n_modes) {
  return SqueezingSpectrum(std::vector<double>(n_modes, 0.0));
}

PassiveSymplectic::PassiveSymplectic(Matrix data) : data_(std::move(data)) {
  require_even_square(data_, "PassiveSymplectic");
  const auto n = static_cast<std::size_t>(data_.rows() / 2);
  const Matrix id = Matrix::Identity(data_.rows(), data_.cols());
  const Matrix omega = symplectic_form(n);
  const double orth = (data_.transpose() * data_ - id).cwiseAbs().maxCoeff();
  const double sympl = (data_ * omega * data_.transpose() - omega).cwiseAbs().maxCoeff();
  if (orth > kPassiveTol || sympl > kPassiveTol) {
    throw std::invalid_argument("PassiveSymplectic: matrix is not orthogonal-symplectic");
  }
}

PassiveSymplectic PassiveSymplectic::identity(std::size_t n_modes) {
  if (n_modes == 0) throw std::invalid_argument("PassiveSymplectic: n_modes must be >= 1");
  return PassiveSymplectic(Matrix::Identity(2 * n_modes, 2 * n_modes));
}

PassiveSymplectic PassiveSymplectic::from_unitary(const Eigen::MatrixXcd& u) {
  if (u.rows() == 0 || u.rows() != u.cols()) {
    throw std::invalid_argument("from_unitary: expected a square matrix");
  }
  const auto n = static_cast<std::size_t>(u.rows());
  // x' + i p' = (A + iB)(x + ip)  =>  x' = A x - B p,  p' = B x + A p.
  Matrix block(2 * n, 2 * n);
  const Matrix a = u.real();
  const Matrix b = u.imag();
  const auto ni = static_cast<Eigen::Index>(n);
  block.topLeftCorner(ni, ni) = a;
  block.topRightCorner(ni, ni) = -b;
  block.bottomLeftCorner(ni, ni) = b;
  block.bottomRightCorner(ni, ni) = a;
  const Matrix p = interleaved_to_block(n);
  return PassiveSymplectic(p.transpose() * block * p);
}

MeanVector::MeanVector(Vector data) : data_(std::move(data)) {
  if (data_.size() == 0 || data_.size() % 2 != 0) {
    throw std::invalid_argument("MeanVector: length must be 2N with N >= 1");
  }
}

MeanVector MeanVector::from_amplitudes(std::span<const std::complex<double>> alphas) {
  Vector d(2 * static_cast<Eigen::Index>(alphas.size()));
  for (std::size_t j = 0; j < alphas.size(); ++j) {
    d(2 * j) = std::sqrt(2.0) * alphas[j].real();
    d(2 * j + 1) = std::sqrt(2.0) * alphas[j].imag();
  }
  return MeanVector(std::move(d));
}

Matrix symplectic_form(std::size_t n_modes) {
  const auto n = static_cast<Eigen::Index>(n_modes);
  Matrix omega = Matrix::Zero(2 * n, 2 * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    omega(2 * j, 2 * j + 1) = 1.0;
    omega(2 * j + 1, 2 * j) = -1.0;
  }
  return omega;
}

Matrix interleaved_to_block(std::size_t n_modes) {
  const auto n = static_cast<Eigen::Index>(n_modes);
  Matrix p = Matrix::Zero(2 * n, 2 * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    p(j, 2 * j) = 1.0;
    p(n + j, 2 * j + 1) = 1.0;
  }
  return p;
}

CovMatrix vacuum_cm(std::size_t n_modes) { return thermal_cm(n_modes, 0.0); }

CovMatrix thermal_cm(std::size_t n_modes, double n_th) {
  if (n_modes == 0) throw std::invalid_argument("vacuum_cm: n_modes must be >= 1");
  if (!(n_th >= 0.0)) throw std::invalid_argument("thermal_cm: n_th must be >= 0");
  const auto d = static_cast<Eigen::Index>(2 * n_modes);
  return CovMatrix((n_th + 0.5) * Matrix::Identity(d, d));
}

CovMatrix squeezed_diag_cm(const SqueezingSpectrum& spectrum) {
  const auto n = static_cast<Eigen::Index>(spectrum.size());
  Matrix g = Matrix::Zero(2 * n, 2 * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double r = spectrum[static_cast<std::size_t>(j)];
    g(2 * j, 2 * j) = 0.5 * std::exp(-2.0 * r);
    g(2 * j + 1, 2 * j + 1) = 0.5 * std::exp(2.0 * r);
  }
  return CovMatrix(g);
}

CovMatrix apply_passive(const CovMatrix& cm, const PassiveSymplectic& s) {
  if (cm.n_modes() != s.n_modes()) throw std::invalid_argument("apply_passive: dimension mismatch");
  return CovMatrix(s.data() * cm.data() * s.data().transpose());
}

Eigen::MatrixXcd random_unitary(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("random_unitary: n must be >= 1");
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto ni = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd z(ni, ni);
  for (Eigen::Index i = 0; i < ni; ++i) {
    for (Eigen::Index j = 0; j < ni; ++j) {
      const double re = normal(gen);
      const double im = normal(gen);
      z(i, j) = {re, im};
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Q diag(R_jj / |R_jj|) is Haar distributed.
  for (Eigen::Index j = 0; j < ni; ++j) {
    const std::complex<double> d = r(j, j);
    const double mag = std::abs(d);
    q.col(j) *= (mag > 0.0 ? d / mag : std::complex<double>(1.0, 0.0));
  }
  return q;
}

PassiveSymplectic random_passive_symplectic(std::size_t n_modes, std::uint64_t seed) {
  return PassiveSymplectic::from_unitary(random_unitary(n_modes, seed));
}

std::vector<double> symplectic_eigenvalues(const Matrix& cm) {
  require_even_square(cm, "symplectic_eigenvalues");
  Eigen::LLT<Matrix> llt(cm);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("symplectic_eigenvalues: matrix is not positive definite");
  }
  const auto n = static_cast<std::size_t>(cm.rows() / 2);
  Eigen::EigenSolver<Matrix> es(symplectic_form(n) * cm, false);
  if (es.info() != Eigen::Success) throw NumericalError("symplectic_eigenvalues: eigensolver failed");

  std::vector<double> mags;
  mags.reserve(2 * n);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) mags.push_back(std::abs(es.eigenvalues()(i)));
  std::sort(mags.begin(), mags.end());

  std::vector<double> nu(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double a = mags[2 * k];
    const double b = mags[2 * k + 1];
    if (std::abs(a - b) > kPairTol * std::max(1.0, b)) {
      throw NumericalError("symplectic_eigenvalues: unpaired spectrum of Omega*gamma");
    }
    nu[k] = 0.5 * (a + b);
  }
  return nu;
}

double input_photon_number(const CovMatrix& cm) {
  return 0.5 * (cm.data().trace() - static_cast<double>(cm.n_modes()));
}

}  // namespace gbench
