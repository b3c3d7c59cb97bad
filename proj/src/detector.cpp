#include "qfc/detector.hpp"

#include <cmath>
#include <stdexcept>

namespace qfc {

std::vector<std::string> detector_errors(const DetectorModel& det) {
  std::vector<std::string> errors;
  if (!(det.efficiency >= 0.0 && det.efficiency <= 1.0))
    errors.emplace_back("detector.efficiency must lie in [0, 1]");
  if (!(det.dark_count_mean >= 0.0) || !std::isfinite(det.dark_count_mean))
    errors.emplace_back("detector.dark_count_mean must be nonnegative");
  return errors;
}

std::vector<double> poisson_pmf(double mean, double tail_tol) {
  if (!(mean >= 0.0)) throw std::invalid_argument("poisson_pmf: negative mean");
  std::vector<double> pmf{std::exp(-mean)};
  double cumulative = pmf.back();
  // The upper bound guards against underflow of exp(-mean) for huge means.
  while (1.0 - cumulative > tail_tol && pmf.size() < 100000) {
    const double next = pmf.back() * mean / static_cast<double>(pmf.size());
    pmf.push_back(next);
    cumulative += next;
    if (next == 0.0 && static_cast<double>(pmf.size()) > mean) break;
  }
  return pmf;
}

std::vector<double> binomial_pmf(int trials, double p) {
  if (trials < 0) throw std::invalid_argument("binomial_pmf: negative trial count");
  std::vector<double> pmf(static_cast<std::size_t>(trials) + 1, 0.0);
  if (p <= 0.0) {
    pmf.front() = 1.0;
    return pmf;
  }
  if (p >= 1.0) {
    pmf.back() = 1.0;
    return pmf;
  }
  double coeff = 1.0;  // C(trials, k), exact in double for trials <= 1029
  for (int k = 0; k <= trials; ++k) {
    if (k > 0) coeff = coeff * (trials - k + 1) / k;
    pmf[static_cast<std::size_t>(k)] = coeff * std::pow(p, k) * std::pow(1.0 - p, trials - k);
  }
  return pmf;
}

std::vector<double> detector_response(const DetectorModel& det, int incident, double tail_tol) {
  if (incident < 0) throw std::invalid_argument("detector_response: negative photon number");
  if (auto errors = detector_errors(det); !errors.empty())
    throw std::invalid_argument(errors.front());

  if (det.kind == DetectorKind::APD) {
    const double miss = std::exp(-det.dark_count_mean) * std::pow(1.0 - det.efficiency, incident);
    return {miss, 1.0 - miss};
  }

  std::vector<double> detected = binomial_pmf(incident, det.efficiency);
  if (det.dark_count_mean == 0.0) return detected;

  const std::vector<double> dark = poisson_pmf(det.dark_count_mean, tail_tol);
  std::vector<double> out(detected.size() + dark.size() - 1, 0.0);
  for (std::size_t i = 0; i < detected.size(); ++i)
    for (std::size_t j = 0; j < dark.size(); ++j) out[i + j] += detected[i] * dark[j];
  return out;
}

double click_probability(const DetectorModel& det, const std::vector<double>& incident_pmf) {
  double no_signal_click = 0.0;
  for (std::size_t k = 0; k < incident_pmf.size(); ++k)
    no_signal_click += incident_pmf[k] * std::pow(1.0 - det.efficiency, static_cast<double>(k));
  return 1.0 - std::exp(-det.dark_count_mean) * no_signal_click;
}

int sample_detector(const DetectorModel& det, int incident, std::mt19937_64& rng) {
  int detected = incident;
  if (det.efficiency < 1.0 && incident > 0)
    detected = std::binomial_distribution<int>(incident, det.efficiency)(rng);
  int dark = 0;
  if (det.dark_count_mean > 0.0) dark = std::poisson_distribution<int>(det.dark_count_mean)(rng);
  if (det.kind == DetectorKind::APD) return detected + dark > 0 ? 1 : 0;
  return detected + dark;
}

}  // namespace qfc
