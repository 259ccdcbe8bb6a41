#include "gbench/qam_heterodyne.hpp"

#include "gbench/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gbench {

namespace {

struct GaussLegendre {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix.
GaussLegendre gauss_legendre(int n) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    j(k, k - 1) = b;
    j(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  GaussLegendre gl;
  for (int k = 0; k < n; ++k) {
    gl.nodes.push_back(es.eigenvalues()(k));
    const double v0 = es.eigenvectors()(0, k);
    gl.weights.push_back(2.0 * v0 * v0);
  }
  return gl;
}

struct Axis {
  std::vector<double> x;
  std::vector<double> w;
};

Axis composite_axis(double lo, double hi, double panel, const GaussLegendre& gl) {
  const auto panels = static_cast<std::size_t>(std::ceil((hi - lo) / panel));
  const double h = (hi - lo) / static_cast<double>(panels);
  Axis a;
  a.x.reserve(panels * gl.nodes.size());
  a.w.reserve(panels * gl.nodes.size());
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = lo + (static_cast<double>(p) + 0.5) * h;
    for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
      a.x.push_back(mid + 0.5 * h * gl.nodes[k]);
      a.w.push_back(0.5 * h * gl.weights[k]);
    }
  }
  return a;
}

// Entropy (bits) of sum_i p_i N(mu_i, v I) on a tensor grid. Densities are
// assembled row by row from per-axis Gaussian factors.
double mixture_entropy(const std::vector<double>& mx, const std::vector<double>& my, const std::vector<double>& prior,
                       double v, const Axis& ax, const Axis& ay, double* mass_out) {
  const std::size_t m = prior.size();
  const auto nx = static_cast<Eigen::Index>(ax.x.size());
  const auto ny = static_cast<Eigen::Index>(ay.x.size());
  const double norm1 = 1.0 / std::sqrt(2.0 * std::numbers::pi * v);

  Eigen::MatrixXd ex(static_cast<Eigen::Index>(m), nx);
  Eigen::MatrixXd ey(static_cast<Eigen::Index>(m), ny);
  for (std::size_t i = 0; i < m; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    for (Eigen::Index a = 0; a < nx; ++a) {
      const double d = ax.x[static_cast<std::size_t>(a)] - mx[i];
      ex(ii, a) = prior[i] * norm1 * std::exp(-0.5 * d * d / v);
    }
    for (Eigen::Index b = 0; b < ny; ++b) {
      const double d = ay.x[static_cast<std::size_t>(b)] - my[i];
      ey(ii, b) = norm1 * std::exp(-0.5 * d * d / v);
    }
  }
  const Eigen::Map<const Eigen::VectorXd> wy(ay.w.data(), ny);

  double entropy = 0.0;
  double mass = 0.0;
#pragma omp parallel for reduction(+ : entropy, mass) schedule(static)
  for (Eigen::Index a = 0; a < nx; ++a) {
    const Eigen::VectorXd row = ey.transpose() * ex.col(a);
    double h_row = 0.0;
    double m_row = 0.0;
    for (Eigen::Index b = 0; b < ny; ++b) {
      const double p = row(b);
      if (p > 0.0) h_row -= wy(b) * p * std::log2(p);
      m_row += wy(b) * p;
    }
    entropy += ax.w[static_cast<std::size_t>(a)] * h_row;
    mass += ax.w[static_cast<std::size_t>(a)] * m_row;
  }
  if (mass_out != nullptr) *mass_out = mass;
  return entropy;
}

}  // namespace

void HeterodyneModel::validate() const {
  received.validate();
  if (!(variance >= 1.0 - 1e-12) || !std::isfinite(variance)) {
    throw std::invalid_argument("HeterodyneModel: output variance must be >= 1");
  }
}

HeterodyneResult heterodyne_mi(const HeterodyneModel& model, const QuadratureOptions& opts) {
  model.validate();
  const double v = model.variance;
  const double sd = std::sqrt(v);

  // Components with zero prior do not contribute to the mixture.
  std::vector<double> mx, my, prior;
  for (std::size_t i = 0; i < model.received.size(); ++i) {
    if (model.received.prior[i] <= 0.0) continue;
    mx.push_back(std::sqrt(2.0) * model.received.points[i].real());
    my.push_back(std::sqrt(2.0) * model.received.points[i].imag());
    prior.push_back(model.received.prior[i]);
  }
  const double conditional = std::log2(2.0 * std::numbers::pi * std::numbers::e * v);

  HeterodyneResult res;
  if (prior.size() == 1) {
    res.output_entropy_bits = conditional;
    return res;
  }

  const double margin = opts.box_sigmas * sd;
  const double x_lo = *std::min_element(mx.begin(), mx.end()) - margin;
  const double x_hi = *std::max_element(mx.begin(), mx.end()) + margin;
  const double y_lo = *std::min_element(my.begin(), my.end()) - margin;
  const double y_hi = *std::max_element(my.begin(), my.end()) + margin;
  const GaussLegendre gl = gauss_legendre(opts.gl_order);

  double panel = opts.initial_panel * sd;
  double mass = 0.0;
  double prev = mixture_entropy(mx, my, prior, v, composite_axis(x_lo, x_hi, panel, gl),
                                composite_axis(y_lo, y_hi, panel, gl), &mass);
  for (int r = 0; r < opts.max_refinements; ++r) {
    panel *= 0.5;
    const double cur = mixture_entropy(mx, my, prior, v, composite_axis(x_lo, x_hi, panel, gl),
                                       composite_axis(y_lo, y_hi, panel, gl), &mass);
    const double change = std::abs(cur - prev);
    if (change <= opts.rel_tol * std::max(1.0, std::abs(cur))) {
      if (std::abs(mass - 1.0) > 1e-8) {
        throw NumericalError("heterodyne_mi: integration box misses probability mass");
      }
      res.output_entropy_bits = cur;
      res.bits = std::max(0.0, cur - conditional);
      res.refinement_change_bits = change;
      res.panel_width = panel;
      return res;
    }
    prev = cur;
  }
  throw NumericalError("heterodyne_mi: quadrature did not converge");
}

HeterodyneSweep heterodyne_curve(int order, double eta, const std::vector<double>& sigmas,
                                 const std::vector<double>& n_bars, const QuadratureOptions& opts) {
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("heterodyne_curve: eta must lie in (0, 1]");
  HeterodyneSweep sweep;
  for (double sigma : sigmas) {
    if (std::isfinite(sigma)) sweep.knees.emplace_back(sigma, sigma * sigma);
    for (double n_bar : n_bars) {
      HeterodyneRow row;
      row.order = order;
      row.eta = eta;
      row.sigma = sigma;
      row.n_bar = n_bar;
      row.c_coh_bits = std::log2(1.0 + eta * n_bar);
      if (n_bar > 0.0) {
        row.delta = solve_delta_for_energy(order, sigma, n_bar);
        const auto received = propagate(build_qam(order, row.delta, sigma), eta);
        row.bits = heterodyne_mi({received.symbols, 1.0}, opts).bits;
      }
      sweep.rows.push_back(row);
    }
  }
  return sweep;
}

}  // namespace gbench
