#include "qfc/schmidt.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/SVD>

namespace qfc {

namespace {

constexpr double kDegeneracyTol = 1e-10;
constexpr double kNormTol = 1e-8;

// Orthogonal projector onto DFT bins with |omega| <= fraction * omega_Nyquist.
MatrixXcd band_projector(const TimeGrid& grid, double fraction) {
  const auto n = static_cast<Eigen::Index>(grid.n_time);
  const double cutoff = fraction * grid.nyquist_omega() * (1.0 + 1e-12);
  MatrixXcd dft(n, n);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index j = 0; j < n; ++j)
      dft(k, j) = std::polar(1.0 / std::sqrt(static_cast<double>(n)),
                             -2.0 * std::numbers::pi * static_cast<double>((k * j) % n) /
                                 static_cast<double>(n));
  Eigen::VectorXd mask(n);
  for (Eigen::Index k = 0; k < n; ++k)
    mask[k] = std::abs(grid.omega(static_cast<std::size_t>(k))) <= cutoff ? 1.0 : 0.0;
  return dft.adjoint() * mask.asDiagonal() * dft;
}

void require_normalized(const ComplexField& u) {
  const double n2 = inner_product(u, u).real();
  if (std::abs(n2 - 1.0) > kNormTol)
    throw std::invalid_argument("input mode is not normalized (<u,u> = " + std::to_string(n2) +
                                ")");
}

}  // namespace

MatrixXcd conversion_matrix(const ScatteringKernel& kernel, const DecomposeOptions& options) {
  if (!(options.band_fraction > 0.0) || options.band_fraction > 1.0)
    throw std::invalid_argument("band_fraction must lie in (0, 1]");
  if (options.band_fraction == 1.0) return kernel.ba;
  const MatrixXcd p = band_projector(kernel.grid, options.band_fraction);
  return p * kernel.ba * p;
}

SchmidtDecomposition decompose(const ScatteringKernel& kernel, std::size_t truncation,
                               const DecomposeOptions& options) {
  if (truncation < 1) throw std::invalid_argument("truncation must be >= 1");
  SchmidtDecomposition dec;
  dec.grid = kernel.grid;
  const std::size_t n = kernel.grid.n_time;
  if (truncation > n) {
    dec.warnings.push_back("truncation " + std::to_string(truncation) + " clamped to n_time " +
                           std::to_string(n));
    truncation = n;
  }
  dec.truncation_count = truncation;

  const MatrixXcd m = conversion_matrix(kernel, options);
  Eigen::BDCSVD<MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const MatrixXcd& u = svd.matrixU();
  const MatrixXcd& v = svd.matrixV();
  dec.total_efficiency = sv.squaredNorm();

  const double inv_sqrt_dt = 1.0 / std::sqrt(kernel.grid.dt_ps());
  for (std::size_t i = 0; i < truncation; ++i) {
    const auto c = static_cast<Eigen::Index>(i);
    Eigen::Index peak = 0;
    v.col(c).cwiseAbs().maxCoeff(&peak);
    const cplx fix = std::polar(1.0, -std::arg(v(peak, c)));
    dec.lambdas.push_back(sv[c]);
    dec.input_modes.emplace_back(kernel.grid, VectorXcd(v.col(c) * fix * inv_sqrt_dt));
    dec.output_modes.emplace_back(kernel.grid, VectorXcd(u.col(c) * fix * inv_sqrt_dt));
    const bool degenerate =
        c + 1 < sv.size() && std::abs(sv[c] - sv[c + 1]) < kDegeneracyTol;
    dec.degenerate_with_next.push_back(degenerate);
  }
  return dec;
}

std::vector<double> conversion_efficiencies(const SchmidtDecomposition& dec) {
  std::vector<double> eff;
  eff.reserve(dec.lambdas.size());
  for (double l : dec.lambdas) eff.push_back(l * l);
  return eff;
}

MatrixXcd reconstruct(const SchmidtDecomposition& dec) {
  const auto n = static_cast<Eigen::Index>(dec.grid.n_time);
  MatrixXcd m = MatrixXcd::Zero(n, n);
  for (std::size_t i = 0; i < dec.lambdas.size(); ++i)
    m += dec.lambdas[i] * dec.output_modes[i].samples() * dec.input_modes[i].samples().adjoint();
  return m * dec.grid.dt_ps();
}

double convert_probability(const SchmidtDecomposition& dec, const ComplexField& u) {
  require_normalized(u);
  double p = 0.0;
  for (std::size_t i = 0; i < dec.lambdas.size(); ++i)
    p += dec.lambdas[i] * dec.lambdas[i] * std::norm(inner_product(dec.input_modes[i], u));
  return p;
}

double convert_probability(const ScatteringKernel& kernel, const ComplexField& u) {
  require_normalized(u);
  if (!(u.grid() == kernel.grid)) throw std::invalid_argument("field grid differs from kernel");
  return (kernel.ba * u.samples()).squaredNorm() * kernel.grid.dt_ps();
}

double fundamental_overlap(const SchmidtDecomposition& a, const SchmidtDecomposition& b) {
  if (a.input_modes.empty() || b.input_modes.empty())
    throw std::invalid_argument("fundamental_overlap: empty decomposition");
  return std::norm(inner_product(a.input_modes.front(), b.input_modes.front()));
}

double single_mode_figure(const WaveguideParams& wg, const PumpShape& pump) {
  const double dv = std::abs(wg.mu_ps_per_cm - wg.nu_ps_per_cm);
  if (dv == 0.0)
    throw std::invalid_argument("single-mode figure undefined for equal signal and SF slowness");
  const double bandwidth = 1.0 / (dv * wg.length_cm);
  return bandwidth * intensity_fwhm_ps(pump);
}

}  // namespace qfc
