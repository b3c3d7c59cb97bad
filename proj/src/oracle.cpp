#include <cmath>
#include <numbers>

#include "qfc/propagator.hpp"
#include "qfc/validation.hpp"

namespace qfc {

// The pump does not depend on z, so the system d/dz (a; b) = K (a; b) has a
// constant generator and one RK4 step is the fixed matrix
// P = I + hK + (hK)^2/2 + (hK)^3/6 + (hK)^4/24. Applying RK4 n times is P^n,
// evaluated here by repeated squaring.
ScatteringKernel oracle_fine_ode(const WaveguideParams& wg, const PumpShape& pump,
                                 const TimeGrid& tg, const ZGrid& zg_fine) {
  require_valid(wg, tg, zg_fine, pump);
  const auto n = static_cast<Eigen::Index>(tg.n_time);
  const cplx i{0.0, 1.0};

  // Spectral derivative D = F^-1 diag(i omega) F on the periodic grid.
  MatrixXcd dft(n, n);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index j = 0; j < n; ++j)
      dft(k, j) = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>((k * j) % n) /
                                      static_cast<double>(n));
  VectorXcd iw(n);
  for (Eigen::Index k = 0; k < n; ++k) iw[k] = i * tg.omega(static_cast<std::size_t>(k));
  const MatrixXcd deriv = dft.adjoint() * iw.asDiagonal() * dft / static_cast<double>(n);

  const ComplexField f = evaluate(pump, tg);
  const cplx eta = wg.eta();
  MatrixXcd gen = MatrixXcd::Zero(2 * n, 2 * n);
  gen.topLeftCorner(n, n) = -wg.mu_ps_per_cm * deriv;
  gen.bottomRightCorner(n, n) = -wg.nu_ps_per_cm * deriv;
  for (Eigen::Index j = 0; j < n; ++j) {
    const cplx g = eta * f[static_cast<std::size_t>(j)];
    gen(j, n + j) = i * g;
    gen(n + j, j) = i * std::conj(g);
  }

  const double h = zg_fine.dz_cm(wg.length_cm);
  const MatrixXcd hk = h * gen;
  const MatrixXcd id = MatrixXcd::Identity(2 * n, 2 * n);
  // Horner form of the degree-4 Taylor polynomial.
  const MatrixXcd step = id + hk * (id + hk * (id + hk * (id + hk / 4.0) / 3.0) / 2.0);

  MatrixXcd result = id, power = step;
  for (std::size_t e = zg_fine.n_z; e > 0; e >>= 1) {
    if (e & 1u) result = power * result;
    if (e > 1) power = power * power;
  }

  return ScatteringKernel{tg, result.topLeftCorner(n, n), result.topRightCorner(n, n),
                          result.bottomLeftCorner(n, n), result.bottomRightCorner(n, n)};
}

}  // namespace qfc
