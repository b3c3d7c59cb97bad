#pragma once

// Mode-resolved photon counting by a sequence of conversion stages. Each
// stage converts part of the incoming signal into its sum-frequency port,
// which is counted by that stage's detector; the unconverted remainder
// feeds the next stage. A recirculating loop with retimed pumps is the same
// stage sequence.

#include <cstdint>
#include <map>
#include <memory>
#include <variant>
#include <vector>

#include "qfc/detector.hpp"
#include "qfc/model.hpp"
#include "qfc/propagator.hpp"
#include "qfc/pump.hpp"

namespace qfc {

struct Stage {
  PumpShape pump;
  DetectorModel detector;
  std::shared_ptr<const ScatteringKernel> kernel;  // AA and BA are used
};

/// Builds the stage kernel (signal port only) from the shared waveguide.
Stage make_stage(const WaveguideParams& wg, const TimeGrid& tg, const ZGrid& zg,
                 const PumpShape& pump, const DetectorModel& detector);

struct Fock {
  int n = 1;
};
struct Coherent {
  cplx alpha{1.0, 0.0};
};

struct InputState {
  ComplexField mode;  // normalized
  std::variant<Fock, Coherent> statistics;
};

struct CascadeAmplitudes {
  std::vector<ComplexField> converted;  // sum-frequency field leaving stage k
  ComplexField residual;                // signal field after the last stage

  std::vector<double> stage_probabilities() const;
  double survival() const;
};

struct CountRecord {
  std::vector<int> per_stage_counts;
  double residual_prob = 0.0;
};

/// Joint law of the reported per-stage counts.
struct CountDistribution {
  std::map<std::vector<int>, double> outcomes;
  std::vector<double> stage_probabilities;  // single-photon p_k (first input)
  double residual_prob = 0.0;               // photon-weighted unconverted fraction

  double total() const;
  double probability(const std::vector<int>& counts) const;
  std::vector<double> mean_counts() const;
};

/// Propagates a normalized single-photon mode through the stages.
CascadeAmplitudes run_cascade_amplitudes(const std::vector<Stage>& stages, const ComplexField& u);

inline constexpr int kMaxExactPhotons = 30;

/// Exact count distribution. Several inputs must occupy mutually orthogonal
/// modes; their pre-detector counts add. Throws std::domain_error for Fock
/// inputs above kMaxExactPhotons.
CountDistribution exact_count_distribution(const std::vector<Stage>& stages,
                                           const std::vector<InputState>& inputs);
CountDistribution exact_count_distribution(const std::vector<Stage>& stages,
                                           const InputState& input);

/// Monte Carlo draws from the same law. Shots are split into fixed-size
/// chunks seeded from (seed, chunk index), so output depends only on the
/// seed and never on the worker count.
std::vector<CountRecord> sample_counts(const std::vector<Stage>& stages,
                                       const std::vector<InputState>& inputs, std::size_t shots,
                                       std::uint64_t seed);
std::vector<CountRecord> sample_counts(const std::vector<Stage>& stages, const InputState& input,
                                       std::size_t shots, std::uint64_t seed);

}  // namespace qfc
