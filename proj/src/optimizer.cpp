#include "qfc/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "qfc/propagator.hpp"

namespace qfc {

namespace {

constexpr int kMaxHermiteOrder = 6;

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double uniform01(std::uint64_t& state) {
  return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

// Evaluation cache and budget accounting shared by all restarts.
class Evaluator {
 public:
  explicit Evaluator(const OptimizationProblem& p) : problem_(p) {}

  bool exhausted() const { return trace_.size() >= problem_.budget; }

  std::vector<double> to_params(const std::vector<double>& unit) const {
    std::vector<double> params(unit.size());
    for (std::size_t i = 0; i < unit.size(); ++i) {
      const auto [lo, hi] = problem_.bounds[i];
      params[i] = std::clamp(lo + std::clamp(unit[i], 0.0, 1.0) * (hi - lo), lo, hi);
    }
    return params;
  }

  // Objective to maximize at a bounds-normalized point (clamped into the box).
  double operator()(const std::vector<double>& unit) {
    const auto params = to_params(unit);
    if (const auto it = cache_.find(params); it != cache_.end()) return it->second;
    if (exhausted()) throw std::length_error("evaluation budget exhausted");
    const double value = evaluate_objective(problem_, params);
    cache_.emplace(params, value);
    trace_.push_back({params, value});
    return value;
  }

  std::vector<TraceEntry>& trace() { return trace_; }

 private:
  const OptimizationProblem& problem_;
  std::map<std::vector<double>, double> cache_;
  std::vector<TraceEntry> trace_;
};

double diameter(const std::vector<std::vector<double>>& simplex) {
  double d = 0.0;
  for (std::size_t i = 0; i < simplex.size(); ++i)
    for (std::size_t j = i + 1; j < simplex.size(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < simplex[i].size(); ++k) {
        const double diff = simplex[i][k] - simplex[j][k];
        s += diff * diff;
      }
      d = std::max(d, std::sqrt(s));
    }
  return d;
}

std::vector<double> clamp_unit(std::vector<double> x) {
  for (double& v : x) v = std::clamp(v, 0.0, 1.0);
  return x;
}

// One Nelder-Mead run maximizing `eval` from `start`. Returns when the
// simplex diameter drops below tol; budget exhaustion escapes as
// std::length_error from the evaluator.
void nelder_mead(Evaluator& eval, std::vector<double> start, double tol) {
  const std::size_t d = start.size();
  constexpr double kStep = 0.1;
  std::vector<std::vector<double>> simplex{start};
  for (std::size_t i = 0; i < d; ++i) {
    auto v = start;
    v[i] = v[i] + kStep <= 1.0 ? v[i] + kStep : v[i] - kStep;
    simplex.push_back(v);
  }
  // Values are negated objectives: the simplex minimizes.
  std::vector<double> f;
  for (const auto& v : simplex) f.push_back(-eval(v));

  auto point = [&](const std::vector<double>& centroid, const std::vector<double>& worst,
                   double coeff) {
    std::vector<double> p(d);
    for (std::size_t k = 0; k < d; ++k) p[k] = centroid[k] + coeff * (worst[k] - centroid[k]);
    return clamp_unit(p);
  };

  while (diameter(simplex) >= tol) {
    std::vector<std::size_t> order(simplex.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return f[a] < f[b]; });
    std::vector<std::vector<double>> s2;
    std::vector<double> f2;
    for (auto i : order) {
      s2.push_back(simplex[i]);
      f2.push_back(f[i]);
    }
    simplex = std::move(s2);
    f = std::move(f2);

    std::vector<double> centroid(d, 0.0);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t k = 0; k < d; ++k) centroid[k] += simplex[i][k] / static_cast<double>(d);

    const auto& worst = simplex[d];
    const auto reflected = point(centroid, worst, -1.0);
    const double fr = -eval(reflected);
    if (fr < f[0]) {
      const auto expanded = point(centroid, worst, -2.0);
      const double fe = -eval(expanded);
      if (fe < fr) {
        simplex[d] = expanded;
        f[d] = fe;
      } else {
        simplex[d] = reflected;
        f[d] = fr;
      }
      continue;
    }
    if (fr < f[d - 1]) {
      simplex[d] = reflected;
      f[d] = fr;
      continue;
    }
    const bool outside = fr < f[d];
    const auto contracted = point(centroid, worst, outside ? -0.5 : 0.5);
    const double fc = -eval(contracted);
    if (fc < (outside ? fr : f[d])) {
      simplex[d] = contracted;
      f[d] = fc;
      continue;
    }
    for (std::size_t i = 1; i <= d; ++i) {
      for (std::size_t k = 0; k < d; ++k)
        simplex[i][k] = simplex[0][k] + 0.5 * (simplex[i][k] - simplex[0][k]);
      f[i] = -eval(simplex[i]);
    }
  }
}

}  // namespace

std::string to_string(GaussianParam p) {
  switch (p) {
    case GaussianParam::SigmaP: return "sigma_p_ps";
    case GaussianParam::Amplitude: return "amplitude";
    case GaussianParam::Chirp: return "chirp_per_ps2";
    case GaussianParam::Delay: return "delay_ps";
  }
  return "?";
}

GaussianParam gaussian_param_from_string(const std::string& name) {
  for (auto p : {GaussianParam::SigmaP, GaussianParam::Amplitude, GaussianParam::Chirp,
                 GaussianParam::Delay})
    if (to_string(p) == name) return p;
  throw std::invalid_argument("unknown Gaussian parameter '" + name +
                              "' (valid: sigma_p_ps, amplitude, chirp_per_ps2, delay_ps)");
}

std::size_t PumpFamily::dimension() const {
  return kind == Kind::Gaussian ? free.size() : static_cast<std::size_t>(hermite_order) + 1;
}

PumpShape PumpFamily::make_pump(const std::vector<double>& params, const TimeGrid& grid) const {
  if (params.size() != dimension())
    throw std::invalid_argument("pump family expects " + std::to_string(dimension()) +
                                " parameters, got " + std::to_string(params.size()));
  if (kind == Kind::Gaussian) {
    GaussianPump g = carrier;
    for (std::size_t i = 0; i < free.size(); ++i) {
      switch (free[i]) {
        case GaussianParam::SigmaP: g.sigma_p_ps = params[i]; break;
        case GaussianParam::Amplitude: g.amplitude = params[i]; break;
        case GaussianParam::Chirp: g.chirp_per_ps2 = params[i]; break;
        case GaussianParam::Delay: g.delay_ps = params[i]; break;
      }
    }
    return g;
  }

  // Hermite-Gauss functions normalized so that the zeroth has unit peak.
  TabulatedPump tab{grid, std::vector<cplx>(grid.n_time)};
  const double sigma = carrier.sigma_p_ps;
  for (std::size_t j = 0; j < grid.n_time; ++j) {
    const double s = grid.time(j) - carrier.delay_ps;
    const double x = s / sigma;
    double prev = 0.0;
    double cur = std::exp(-0.5 * x * x);
    double sum = params[0] * cur;
    for (int k = 0; k < hermite_order; ++k) {
      const double next = std::sqrt(2.0 / (k + 1.0)) * x * cur - std::sqrt(k / (k + 1.0)) * prev;
      prev = cur;
      cur = next;
      sum += params[static_cast<std::size_t>(k) + 1] * cur;
    }
    tab.samples[j] = std::polar(carrier.amplitude, carrier.chirp_per_ps2 * s * s) * sum;
  }
  return tab;
}

void check_problem(const OptimizationProblem& problem) {
  const auto& fam = problem.family;
  if (fam.kind == PumpFamily::Kind::Hermite &&
      (fam.hermite_order < 0 || fam.hermite_order > kMaxHermiteOrder))
    throw std::invalid_argument("Hermite order must lie in [0, 6]");
  if (fam.kind == PumpFamily::Kind::Gaussian && fam.free.empty())
    throw std::invalid_argument("Gaussian family needs at least one free parameter");
  if (problem.bounds.size() != fam.dimension())
    throw std::invalid_argument("bounds: expected " + std::to_string(fam.dimension()) +
                                " intervals, got " + std::to_string(problem.bounds.size()));
  for (const auto& [lo, hi] : problem.bounds)
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo <= hi))
      throw std::invalid_argument("bounds must be finite with lower <= upper");
  if (problem.budget < 1) throw std::invalid_argument("budget must be >= 1");
  if (problem.restarts < 1) throw std::invalid_argument("restarts must be >= 1");
}

double evaluate_objective(const OptimizationProblem& problem, const std::vector<double>& params) {
  check_problem(problem);
  if (params.size() != problem.bounds.size())
    throw std::invalid_argument("parameter vector has the wrong dimension");
  for (std::size_t i = 0; i < params.size(); ++i)
    if (!(params[i] >= problem.bounds[i].first && params[i] <= problem.bounds[i].second))
      throw std::out_of_range("parameter " + std::to_string(i) + " outside its bounds");

  const PumpShape pump = problem.family.make_pump(params, problem.tg);
  const auto kernel = build_kernel(problem.wg, pump, problem.tg, problem.zg, KernelPorts::SignalOnly);
  const auto eff = conversion_efficiencies(decompose(kernel, 2, problem.decompose));
  const double l0 = eff.at(0), l1 = eff.size() > 1 ? eff[1] : 0.0;
  if (problem.objective.kind == Objective::Kind::Selectivity) return l0 - l1;
  return l0 - kEfficiencyFloorPenalty * std::max(0.0, l1 - problem.objective.epsilon);
}

OptimizationResult optimize(const OptimizationProblem& problem, std::uint64_t seed) {
  check_problem(problem);
  const std::size_t d = problem.family.dimension();
  Evaluator eval(problem);
  std::uint64_t rng = seed;

  OptimizationResult result;
  for (std::size_t r = 0; r < problem.restarts && !eval.exhausted(); ++r) {
    std::vector<double> start(d);
    for (double& x : start) x = uniform01(rng);
    try {
      nelder_mead(eval, start, problem.tolerance);
    } catch (const std::length_error&) {
      if (r == 0 && eval.trace().size() < d + 1) result.budget_exhausted_early = true;
      break;
    }
  }

  result.trace = std::move(eval.trace());
  result.evaluations_used = result.trace.size();
  // First maximum wins, so ties resolve toward earlier restarts.
  const auto best = std::max_element(
      result.trace.begin(), result.trace.end(),
      [](const TraceEntry& a, const TraceEntry& b) { return a.objective < b.objective; });
  result.best_params = best->params;
  result.best_objective = best->objective;
  result.best_pump = problem.family.make_pump(best->params, problem.tg);
  return result;
}

}  // namespace qfc
