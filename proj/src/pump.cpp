#include "qfc/pump.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qfc {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool finite(double x) { return std::isfinite(x); }

// Trigonometric interpolant of periodic samples, evaluated at arbitrary t.
// The Nyquist coefficient is split symmetrically so real data stays real.
class TrigInterpolant {
 public:
  explicit TrigInterpolant(const TabulatedPump& tab)
      : grid_(tab.grid), coeff_(tab.samples.size()) {
    const std::size_t n = tab.samples.size();
    for (std::size_t k = 0; k < n; ++k) {
      cplx acc{0.0, 0.0};
      for (std::size_t j = 0; j < n; ++j) {
        const double phase = -2.0 * std::numbers::pi * static_cast<double>(k * j % n) /
                             static_cast<double>(n);
        acc += tab.samples[j] * std::polar(1.0, phase);
      }
      coeff_[k] = acc / static_cast<double>(n);
    }
  }

  cplx operator()(double t) const {
    const double start = grid_.time(0);
    const double tau = t - start;
    if (tau < 0.0 || tau >= grid_.window_ps) return {0.0, 0.0};
    const std::size_t n = coeff_.size();
    cplx acc{0.0, 0.0};
    for (std::size_t k = 0; k < n; ++k) {
      if (n % 2 == 0 && k == n / 2) {
        acc += coeff_[k] * std::cos(grid_.nyquist_omega() * tau);
      } else {
        acc += coeff_[k] * std::polar(1.0, grid_.omega(k) * tau);
      }
    }
    return acc;
  }

 private:
  TimeGrid grid_;
  std::vector<cplx> coeff_;
};

double numeric_fwhm(const std::vector<double>& t, const std::vector<double>& intensity) {
  const auto peak_it = std::max_element(intensity.begin(), intensity.end());
  if (peak_it == intensity.end() || *peak_it <= 0.0)
    throw std::invalid_argument("FWHM of an all-zero pump is undefined");
  const double half = 0.5 * *peak_it;
  std::size_t first = 0;
  while (intensity[first] < half) ++first;
  std::size_t last = intensity.size() - 1;
  while (intensity[last] < half) --last;

  auto crossing = [&](std::size_t below, std::size_t above) {
    const double y0 = intensity[below], y1 = intensity[above];
    return t[below] + (half - y0) / (y1 - y0) * (t[above] - t[below]);
  };
  const double left = first == 0 ? t.front() : crossing(first - 1, first);
  const double right = last + 1 == t.size() ? t.back() : crossing(last + 1, last);
  return right - left;
}

}  // namespace

std::vector<std::string> pump_errors(const PumpShape& pump) {
  std::vector<std::string> errors;
  std::visit(overloaded{
                 [&](const GaussianPump& g) {
                   if (!(g.sigma_p_ps > 0.0) || !finite(g.sigma_p_ps))
                     errors.emplace_back("pump.sigma_p_ps must be positive");
                   if (!(g.amplitude >= 0.0) || !finite(g.amplitude))
                     errors.emplace_back("pump.amplitude must be nonnegative");
                   if (!finite(g.delay_ps)) errors.emplace_back("pump.delay_ps must be finite");
                   if (!finite(g.chirp_per_ps2))
                     errors.emplace_back("pump.chirp_per_ps2 must be finite");
                 },
                 [&](const HarmonicGaussianPump& h) {
                   if (!(h.sigma_p_ps > 0.0) || !finite(h.sigma_p_ps))
                     errors.emplace_back("pump.sigma_p_ps must be positive");
                   if (!(h.amplitude >= 0.0) || !finite(h.amplitude))
                     errors.emplace_back("pump.amplitude must be nonnegative");
                   if (!finite(h.rate_k)) errors.emplace_back("pump.rate_k must be finite");
                 },
                 [&](const TabulatedPump& tab) {
                   if (tab.grid.n_time == 0 || !(tab.grid.window_ps > 0.0))
                     errors.emplace_back("tabulated pump grid must be nonempty");
                   if (tab.samples.size() != tab.grid.n_time)
                     errors.emplace_back("tabulated pump has " +
                                         std::to_string(tab.samples.size()) +
                                         " samples but its grid declares " +
                                         std::to_string(tab.grid.n_time));
                 },
             },
             pump);
  return errors;
}

ComplexField evaluate(const PumpShape& pump, const TimeGrid& grid) {
  if (auto errors = pump_errors(pump); !errors.empty())
    throw std::invalid_argument("invalid pump: " + errors.front());

  VectorXcd out(static_cast<Eigen::Index>(grid.n_time));
  std::visit(overloaded{
                 [&](const GaussianPump& g) {
                   for (std::size_t j = 0; j < grid.n_time; ++j) {
                     const double s = grid.time(j) - g.delay_ps;
                     const double env =
                         g.amplitude * std::exp(-s * s / (2.0 * g.sigma_p_ps * g.sigma_p_ps));
                     out[static_cast<Eigen::Index>(j)] = std::polar(env, g.chirp_per_ps2 * s * s);
                   }
                 },
                 [&](const HarmonicGaussianPump& h) {
                   for (std::size_t j = 0; j < grid.n_time; ++j) {
                     const double t = grid.time(j);
                     const double x = h.rate_k * t / h.sigma_p_ps;
                     const double carrier = h.harmonic == Harmonic::Cos ? std::cos(x) : std::sin(x);
                     out[static_cast<Eigen::Index>(j)] =
                         h.amplitude * std::exp(-t * t / (2.0 * h.sigma_p_ps * h.sigma_p_ps)) *
                         carrier;
                   }
                 },
                 [&](const TabulatedPump& tab) {
                   if (tab.grid == grid) {
                     for (std::size_t j = 0; j < grid.n_time; ++j)
                       out[static_cast<Eigen::Index>(j)] = tab.samples[j];
                     return;
                   }
                   const TrigInterpolant interp(tab);
                   for (std::size_t j = 0; j < grid.n_time; ++j)
                     out[static_cast<Eigen::Index>(j)] = interp(grid.time(j));
                 },
             },
             pump);
  return ComplexField(grid, std::move(out));
}

std::pair<PumpShape, PumpShape> pump_pair_harmonic() {
  return {HarmonicGaussianPump{0.8, 1.0, Harmonic::Cos, 2.0},
          HarmonicGaussianPump{0.8, 1.3, Harmonic::Sin, 2.0}};
}

double intensity_fwhm_ps(const PumpShape& pump) {
  if (const auto* g = std::get_if<GaussianPump>(&pump))
    return 2.0 * g->sigma_p_ps * std::sqrt(std::log(2.0));

  TimeGrid fine;
  if (const auto* h = std::get_if<HarmonicGaussianPump>(&pump)) {
    fine = TimeGrid{8192, 24.0 * h->sigma_p_ps};
  } else {
    const auto& tab = std::get<TabulatedPump>(pump);
    fine = TimeGrid{std::max<std::size_t>(4096, tab.grid.n_time), tab.grid.window_ps};
  }
  const ComplexField f = evaluate(pump, fine);
  std::vector<double> t(fine.n_time), intensity(fine.n_time);
  for (std::size_t j = 0; j < fine.n_time; ++j) {
    t[j] = fine.time(j);
    intensity[j] = std::norm(f[j]);
  }
  return numeric_fwhm(t, intensity);
}

std::string pump_kind(const PumpShape& pump) {
  return std::visit(overloaded{
                        [](const GaussianPump&) { return std::string("gaussian"); },
                        [](const HarmonicGaussianPump&) { return std::string("harmonic_gaussian"); },
                        [](const TabulatedPump&) { return std::string("tabulated"); },
                    },
                    pump);
}

}  // namespace qfc
