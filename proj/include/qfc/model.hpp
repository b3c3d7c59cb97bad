#pragma once

// Shared domain types for the frequency-conversion model.
//
// Units are fixed throughout the project: time in ps, length in cm,
// slowness in ps/cm and coupling in 1/cm.

#include <complex>
#include <cstddef>
#include <numbers>

#include <Eigen/Dense>

namespace qfc {

using cplx = std::complex<double>;
using VectorXcd = Eigen::VectorXcd;
using MatrixXcd = Eigen::MatrixXcd;

/// Uniform periodic time grid centred on t = 0 in the pump frame.
/// Sample j sits at t_j = -window/2 + j*dt.
struct TimeGrid {
  std::size_t n_time = 512;
  double window_ps = 20.0;

  double dt_ps() const { return window_ps / static_cast<double>(n_time); }
  double time(std::size_t j) const {
    return -0.5 * window_ps + static_cast<double>(j) * dt_ps();
  }
  /// Angular frequency of DFT bin k in rad/ps, in FFT order (the Nyquist
  /// bin carries the negative frequency).
  double omega(std::size_t k) const {
    const auto n = static_cast<long>(n_time);
    long m = static_cast<long>(k);
    if (m >= n / 2) m -= n;
    return 2.0 * std::numbers::pi * static_cast<double>(m) / window_ps;
  }
  double nyquist_omega() const { return std::numbers::pi / dt_ps(); }

  bool operator==(const TimeGrid&) const = default;
};

struct ZGrid {
  std::size_t n_z = 400;

  double dz_cm(double length_cm) const { return length_cm / static_cast<double>(n_z); }
  bool operator==(const ZGrid&) const = default;
};

struct WaveguideParams {
  double eta_mag = 0.5 * std::numbers::pi;  // |eta|, 1/cm
  double eta_phase = 0.0;                   // arg(eta), rad
  double mu_ps_per_cm = 1.0;                // signal slowness relative to pump
  double nu_ps_per_cm = -1.0;               // sum-frequency slowness relative to pump
  double length_cm = 1.0;

  cplx eta() const { return std::polar(eta_mag, eta_phase); }
  bool operator==(const WaveguideParams&) const = default;
};

/// Complex envelope sampled on a TimeGrid.
class ComplexField {
 public:
  explicit ComplexField(TimeGrid grid);
  ComplexField(TimeGrid grid, VectorXcd samples);

  const TimeGrid& grid() const { return grid_; }
  const VectorXcd& samples() const { return samples_; }
  std::size_t size() const { return static_cast<std::size_t>(samples_.size()); }
  cplx operator[](std::size_t j) const { return samples_[static_cast<Eigen::Index>(j)]; }

  /// Sqrt of the quadrature-weighted energy sum |u_j|^2 dt.
  double norm() const;
  ComplexField normalized() const;
  ComplexField scaled(cplx factor) const;

 private:
  TimeGrid grid_;
  VectorXcd samples_;
};

/// Quadrature-weighted inner product sum_j conj(u_j) v_j dt.
/// Conjugate-linear in the first argument. Throws on grid mismatch.
cplx inner_product(const ComplexField& u, const ComplexField& v);

ComplexField operator+(const ComplexField& u, const ComplexField& v);

}  // namespace qfc
