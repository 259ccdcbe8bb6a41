#pragma once

// Covariance-matrix formalism for N-mode Gaussian states.
//
// Conventions used throughout the library:
//   * quadratures are interleaved, (x1, p1, x2, p2, ..., xN, pN);
//   * the vacuum has covariance I/2;
//   * a displacement alpha has mean vector d = sqrt(2) (Re alpha, Im alpha),
//     so its photon number is |d|^2 / 2.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace gbench {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Symmetric, positive-definite, physical 2N x 2N covariance matrix.
class CovMatrix {
 public:
  /// Symmetrizes `data` and validates it. Throws std::invalid_argument when the
  /// matrix is not square with even dimension, not positive definite, or
  /// violates the uncertainty principle (a symplectic eigenvalue below 1/2).
  explicit CovMatrix(const Matrix& data);

  std::size_t n_modes() const { return static_cast<std::size_t>(data_.rows() / 2); }
  std::size_t dim() const { return static_cast<std::size_t>(data_.rows()); }
  const Matrix& data() const { return data_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return data_(i, j); }

  /// Eigenvalues (ordinary, not symplectic), ascending.
  Vector eigenvalues() const;

  friend CovMatrix operator+(const CovMatrix& a, const CovMatrix& b);

 private:
  struct Unchecked {};
  CovMatrix(Matrix data, Unchecked) : data_(std::move(data)) {}

  Matrix data_;
};

/// Single-mode squeezing parameters r_1 >= r_2 >= ... >= r_N >= 0.
class SqueezingSpectrum {
 public:
  /// Sorts descending. Throws std::invalid_argument on an empty list or a
  /// negative / non-finite entry.
  explicit SqueezingSpectrum(std::vector<double> values);

  static SqueezingSpectrum zeros(std::size_t n_modes);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t j) const { return values_[j]; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

/// Orthogonal symplectic matrix of a passive (energy-conserving) linear-optics
/// network, in interleaved quadrature order.
class PassiveSymplectic {
 public:
  /// Validates S^T S = I and S Omega S^T = Omega to within 1e-10.
  explicit PassiveSymplectic(Matrix data);

  static PassiveSymplectic identity(std::size_t n_modes);

  /// Real representation of an N x N unitary acting on the annihilation
  /// operators, a -> U a.
  static PassiveSymplectic from_unitary(const Eigen::MatrixXcd& u);

  std::size_t n_modes() const { return static_cast<std::size_t>(data_.rows() / 2); }
  const Matrix& data() const { return data_; }

 private:
  Matrix data_;
};

/// First moments d = sqrt(2) (Re a_1, Im a_1, ..., Re a_N, Im a_N).
class MeanVector {
 public:
  explicit MeanVector(Vector data);
  static MeanVector from_amplitudes(std::span<const std::complex<double>> alphas);

  std::size_t n_modes() const { return static_cast<std::size_t>(data_.size() / 2); }
  const Vector& data() const { return data_; }
  double photon_number() const { return 0.5 * data_.squaredNorm(); }

 private:
  Vector data_;
};

/// Interleaved symplectic form, a direct sum of [[0, 1], [-1, 0]].
Matrix symplectic_form(std::size_t n_modes);

/// Permutation P with P * (interleaved vector) = (x1..xN, p1..pN).
Matrix interleaved_to_block(std::size_t n_modes);

CovMatrix vacuum_cm(std::size_t n_modes);

/// (n_th + 1/2) I, the covariance of N identical thermal modes.
CovMatrix thermal_cm(std::size_t n_modes, double n_th);

/// Block-diagonal diag(e^{-2 r_j} / 2, e^{2 r_j} / 2) over the spectrum.
CovMatrix squeezed_diag_cm(const SqueezingSpectrum& spectrum);

/// S gamma S^T.
CovMatrix apply_passive(const CovMatrix& cm, const PassiveSymplectic& s);

/// Haar-distributed passive symplectic drawn from a complex Ginibre matrix via
/// QR with phase correction of R's diagonal. Deterministic in `seed`.
PassiveSymplectic random_passive_symplectic(std::size_t n_modes, std::uint64_t seed);

/// Haar-random N x N unitary (same construction as above, complex form).
Eigen::MatrixXcd random_unitary(std::size_t n, std::uint64_t seed);

/// Symplectic eigenvalues, ascending. Computed from the spectrum of Omega
/// gamma, whose eigenvalues come in pairs +-i nu_k.
std::vector<double> symplectic_eigenvalues(const Matrix& cm);
inline std::vector<double> symplectic_eigenvalues(const CovMatrix& cm) {
  return symplectic_eigenvalues(cm.data());
}

/// n_0 = (tr gamma - N) / 2.
double input_photon_number(const CovMatrix& cm);

}  // namespace gbench
