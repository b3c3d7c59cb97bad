#pragma once

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "qfc/cascade.hpp"
#include "qfc/model.hpp"
#include "qfc/propagator.hpp"
#include "qfc/pump.hpp"

namespace qfc::testing {

inline constexpr double kEtaHalfPi = 0.5 * std::numbers::pi;

inline WaveguideParams counter_walkoff() { return {kEtaHalfPi, 0.0, 1.0, -1.0, 1.0}; }
inline WaveguideParams co_walkoff() { return {kEtaHalfPi, 0.0, 3.0, 1.0, 1.0}; }
inline WaveguideParams harmonic_waveguide() { return {kEtaHalfPi, 0.0, 0.0, 3.0, 1.0}; }

inline TimeGrid reference_grid() { return {512, 20.0}; }
inline ZGrid reference_z() { return {400}; }
// Coarser setting used where the reference resolution would make unit
// tests slow; same window, so the physics is unchanged.
inline TimeGrid coarse_grid() { return {256, 20.0}; }
inline ZGrid coarse_z() { return {200}; }

inline GaussianPump gaussian(double sigma, double delay = 0.0) { return {sigma, delay, 1.0, 0.0}; }

inline ComplexField gaussian_field(const TimeGrid& grid, double sigma, double centre = 0.0) {
  return evaluate(GaussianPump{sigma, centre, 1.0, 0.0}, grid);
}

inline ComplexField random_normalized(const TimeGrid& grid, std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  VectorXcd v(static_cast<Eigen::Index>(grid.n_time));
  for (auto& x : v) x = {n01(rng), n01(rng)};
  return ComplexField(grid, v).normalized();
}

/// Stage whose kernel is sqrt(q) * I into the SF port and sqrt(1-q) * I on
/// the signal, so every input converts with probability q.
inline Stage uniform_stage(const TimeGrid& grid, double q, DetectorModel det = {}) {
  const auto n = static_cast<Eigen::Index>(grid.n_time);
  auto k = std::make_shared<ScatteringKernel>();
  k->grid = grid;
  k->aa = std::sqrt(1.0 - q) * MatrixXcd::Identity(n, n);
  k->ba = cplx(0.0, std::sqrt(q)) * MatrixXcd::Identity(n, n);
  return Stage{GaussianPump{}, det, k};
}

}  // namespace qfc::testing
