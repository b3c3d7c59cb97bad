#pragma once

#include <random>
#include <string>
#include <vector>

namespace qfc {

enum class DetectorKind {
  APD,  // threshold: reports 0 (no click) or 1 (click)
  PNR,  // photon-number resolving
};

struct DetectorModel {
  DetectorKind kind = DetectorKind::PNR;
  double efficiency = 1.0;       // in [0, 1]
  double dark_count_mean = 0.0;  // Poisson mean per detection window

  bool operator==(const DetectorModel&) const = default;
};

std::vector<std::string> detector_errors(const DetectorModel& det);

/// Binomial(trials, p) pmf indexed by the number of successes.
std::vector<double> binomial_pmf(int trials, double p);

/// Poisson pmf truncated once the remaining tail mass is below tail_tol.
std::vector<double> poisson_pmf(double mean, double tail_tol);

/// Distribution of the reported value when `incident` photons reach the
/// detector: binomial loss, then additive Poisson dark counts (PNR), or
/// click / no-click (APD). Indexed by the reported value.
std::vector<double> detector_response(const DetectorModel& det, int incident,
                                      double tail_tol = 1e-13);

/// APD click probability for a given incident photon-number distribution:
/// 1 - exp(-dark) * E[(1 - efficiency)^k].
double click_probability(const DetectorModel& det, const std::vector<double>& incident_pmf);

int sample_detector(const DetectorModel& det, int incident, std::mt19937_64& rng);

}  // namespace qfc
