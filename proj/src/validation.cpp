#include "qfc/validation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

namespace qfc {

namespace {

constexpr double kLeakageThreshold = 1e-6;
constexpr double kCentralFraction = 0.8;
constexpr double kWalkoffFraction = 0.25;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

ValidationReport validate_config(const WaveguideParams& wg, const TimeGrid& tg, const ZGrid& zg,
                                 const PumpShape& pump) {
  ValidationReport report;
  auto& errors = report.errors;

  if (tg.n_time < 8 || !std::has_single_bit(tg.n_time))
    errors.push_back("grid.n_time must be a power of two >= 8 (got " +
                     std::to_string(tg.n_time) + ")");
  if (!(tg.window_ps > 0.0) || !std::isfinite(tg.window_ps))
    errors.push_back("grid.window_ps must be positive");
  if (zg.n_z < 1) errors.push_back("grid.n_z must be >= 1");
  if (!(wg.length_cm > 0.0) || !std::isfinite(wg.length_cm))
    errors.push_back("waveguide.length_cm must be positive");
  if (!(wg.eta_mag >= 0.0) || !std::isfinite(wg.eta_mag))
    errors.push_back("waveguide.eta_mag must be nonnegative");
  if (!std::isfinite(wg.eta_phase) || !std::isfinite(wg.mu_ps_per_cm) ||
      !std::isfinite(wg.nu_ps_per_cm))
    errors.push_back("waveguide parameters must be finite");
  for (auto& e : pump_errors(pump)) errors.push_back(std::move(e));
  if (!report.ok()) return report;

  // (a) pump energy outside the central part of the window
  const ComplexField f = evaluate(pump, tg);
  double total = 0.0, outside = 0.0;
  const double edge = 0.5 * kCentralFraction * tg.window_ps;
  for (std::size_t j = 0; j < tg.n_time; ++j) {
    const double w = std::norm(f[j]);
    total += w;
    if (std::abs(tg.time(j)) > edge) outside += w;
  }
  if (total > 0.0 && outside > kLeakageThreshold * total)
    report.warnings.push_back("pump energy fraction " + fmt(outside / total) +
                              " lies outside the central 80% of the time window");

  // (b) walk-off against the periodic window
  const double slowness = std::max(std::abs(wg.mu_ps_per_cm), std::abs(wg.nu_ps_per_cm));
  const double walkoff = slowness * wg.length_cm;
  if (walkoff > kWalkoffFraction * tg.window_ps)
    report.warnings.push_back("walk-off " + fmt(walkoff) + " ps exceeds 25% of the " +
                              fmt(tg.window_ps) + " ps window (periodic wrap risk)");

  // (c) advection phase per half step at Nyquist
  const double half_step_phase = tg.nyquist_omega() * slowness * 0.5 * zg.dz_cm(wg.length_cm);
  if (half_step_phase > std::numbers::pi)
    report.warnings.push_back("advection phase " + fmt(half_step_phase) +
                              " rad per half step exceeds pi at the Nyquist frequency");
  return report;
}

std::vector<std::string> require_valid(const WaveguideParams& wg, const TimeGrid& tg,
                                       const ZGrid& zg, const PumpShape& pump) {
  auto report = validate_config(wg, tg, zg, pump);
  if (!report.ok()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : report.errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  return std::move(report.warnings);
}

}  // namespace qfc
