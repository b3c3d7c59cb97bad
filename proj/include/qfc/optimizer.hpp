#pragma once

// Derivative-free search over parametric pump shapes for single-mode
// conversion. The objective passes through an SVD and is not smooth at
// singular-value crossings, hence Nelder-Mead with random restarts.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qfc/model.hpp"
#include "qfc/pump.hpp"
#include "qfc/schmidt.hpp"

namespace qfc {

enum class GaussianParam { SigmaP, Amplitude, Chirp, Delay };

std::string to_string(GaussianParam p);
GaussianParam gaussian_param_from_string(const std::string& name);

/// Maps a parameter vector to a pump.
///  - Gaussian: the listed free parameters overwrite those of `carrier`.
///  - Hermite: parameters are coefficients c_0..c_m (m <= 6) of normalized
///    Hermite-Gauss functions on the carrier's width, delay and chirp,
///    scaled by the carrier amplitude. Produces a tabulated pump.
struct PumpFamily {
  enum class Kind { Gaussian, Hermite };
  Kind kind = Kind::Gaussian;
  GaussianPump carrier;
  std::vector<GaussianParam> free;  // Gaussian only
  int hermite_order = 0;            // Hermite only

  std::size_t dimension() const;
  PumpShape make_pump(const std::vector<double>& params, const TimeGrid& grid) const;
};

struct Objective {
  enum class Kind {
    Selectivity,      // lambda_0^2 - lambda_1^2
    EfficiencyFloor,  // lambda_0^2 - 10 * max(0, lambda_1^2 - epsilon)
  };
  Kind kind = Kind::Selectivity;
  double epsilon = 0.05;
};

inline constexpr double kEfficiencyFloorPenalty = 10.0;

struct OptimizationProblem {
  WaveguideParams wg;
  TimeGrid tg;
  ZGrid zg;
  PumpFamily family;
  Objective objective;
  std::vector<std::pair<double, double>> bounds;
  std::size_t budget = 100;  // kernel evaluations
  std::size_t restarts = 5;
  double tolerance = 1e-4;   // simplex diameter, in bounds-normalized units
  DecomposeOptions decompose;
};

struct TraceEntry {
  std::vector<double> params;
  double objective = 0.0;
};

struct OptimizationResult {
  std::vector<double> best_params;
  PumpShape best_pump;
  double best_objective = 0.0;
  std::vector<TraceEntry> trace;
  std::size_t evaluations_used = 0;
  bool budget_exhausted_early = false;  // budget ran out before the first simplex was built
};

/// Throws std::invalid_argument for a malformed problem (bad bounds,
/// dimension mismatch, zero budget).
void check_problem(const OptimizationProblem& problem);

/// Builds the kernel for family(params), decomposes it and scores it.
/// Throws std::out_of_range for params outside the bounds.
double evaluate_objective(const OptimizationProblem& problem, const std::vector<double>& params);

/// Nelder-Mead with seeded random restarts inside the bounds. Restarts run
/// in order and share the evaluation budget; the result is a deterministic
/// function of (problem, seed).
OptimizationResult optimize(const OptimizationProblem& problem, std::uint64_t seed);

}  // namespace qfc
