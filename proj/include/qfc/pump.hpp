#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qfc/model.hpp"

namespace qfc {

/// A * exp(-(t - delay)^2 / 2 sigma^2) * exp(i chirp (t - delay)^2)
struct GaussianPump {
  double sigma_p_ps = 0.8;
  double delay_ps = 0.0;
  double amplitude = 1.0;
  double chirp_per_ps2 = 0.0;
  bool operator==(const GaussianPump&) const = default;
};

enum class Harmonic { Cos, Sin };

/// A * exp(-t^2 / 2 sigma^2) * {cos|sin}(k t / sigma)
struct HarmonicGaussianPump {
  double sigma_p_ps = 0.8;
  double amplitude = 1.0;
  Harmonic harmonic = Harmonic::Cos;
  double rate_k = 2.0;
  bool operator==(const HarmonicGaussianPump&) const = default;
};

/// Samples on their own grid. Evaluation on a different grid uses
/// trigonometric (band-limited) interpolation over the source window and
/// zero outside it.
struct TabulatedPump {
  TimeGrid grid;
  std::vector<cplx> samples;
  bool operator==(const TabulatedPump&) const = default;
};

using PumpShape = std::variant<GaussianPump, HarmonicGaussianPump, TabulatedPump>;

/// Structural problems with a pump shape; empty when valid.
std::vector<std::string> pump_errors(const PumpShape& pump);

/// Samples f(t_j). Throws std::invalid_argument for an invalid shape.
ComplexField evaluate(const PumpShape& pump, const TimeGrid& grid);

/// Pump pair producing two nearly orthogonal fundamental modes by amplitude
/// modulation: cos(2t/sigma) and 1.3*sin(2t/sigma) on a 0.8 ps Gaussian.
std::pair<PumpShape, PumpShape> pump_pair_harmonic();

/// Intensity full width at half maximum of |f|^2 in ps.
double intensity_fwhm_ps(const PumpShape& pump);

std::string pump_kind(const PumpShape& pump);

}  // namespace qfc
