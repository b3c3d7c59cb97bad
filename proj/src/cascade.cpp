#include "qfc/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "qfc/parallel.hpp"

namespace qfc {

namespace {

constexpr double kNormTol = 1e-8;
constexpr double kOrthogonalityTol = 1e-6;
constexpr double kPoissonTail = 1e-12;
constexpr std::size_t kChunkShots = 1024;

using Dist = std::map<std::vector<int>, double>;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

void check_stages(const std::vector<Stage>& stages) {
  if (stages.empty()) throw std::invalid_argument("cascade needs at least one stage");
  for (std::size_t k = 0; k < stages.size(); ++k) {
    if (!stages[k].kernel) throw std::invalid_argument("stage " + std::to_string(k) + " has no kernel");
    if (!(stages[k].kernel->grid == stages.front().kernel->grid))
      throw std::invalid_argument("stage kernels use different grids");
    if (auto errors = detector_errors(stages[k].detector); !errors.empty())
      throw std::invalid_argument("stage " + std::to_string(k) + ": " + errors.front());
  }
}

// Stage probabilities followed by the residual, renormalized to sum to one.
std::vector<double> allocation_probabilities(const CascadeAmplitudes& amp) {
  std::vector<double> p = amp.stage_probabilities();
  p.push_back(amp.survival());
  double sum = 0.0;
  for (double& x : p) {
    x = std::clamp(x, 0.0, 1.0);
    sum += x;
  }
  for (double& x : p) x /= sum;
  return p;
}

// Conditional probability of landing in stage k given the photon was not
// taken by an earlier stage.
std::vector<double> conditional_probabilities(const std::vector<double>& alloc) {
  std::vector<double> q(alloc.size() - 1);
  double remaining = 1.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    q[k] = remaining > 0.0 ? std::clamp(alloc[k] / remaining, 0.0, 1.0) : 0.0;
    remaining -= alloc[k];
  }
  return q;
}

void fock_allocations(const std::vector<double>& q, std::size_t stage, int remaining,
                      double prob, std::vector<int>& counts, Dist& out) {
  if (prob == 0.0) return;
  if (stage == q.size()) {
    out[counts] += prob;
    return;
  }
  const std::vector<double> pmf = binomial_pmf(remaining, q[stage]);
  for (int k = 0; k <= remaining; ++k) {
    counts[stage] = k;
    fock_allocations(q, stage + 1, remaining - k, prob * pmf[static_cast<std::size_t>(k)], counts,
                     out);
  }
  counts[stage] = 0;
}

Dist pre_detector_distribution(const InputState& input, const std::vector<double>& alloc) {
  const std::size_t stages = alloc.size() - 1;
  Dist out;
  std::visit(overloaded{
                 [&](const Fock& f) {
                   std::vector<int> counts(stages, 0);
                   fock_allocations(conditional_probabilities(alloc), 0, f.n, 1.0, counts, out);
                 },
                 [&](const Coherent& c) {
                   out[std::vector<int>(stages, 0)] = 1.0;
                   const double photons = std::norm(c.alpha);
                   for (std::size_t k = 0; k < stages; ++k) {
                     const auto pmf = poisson_pmf(photons * alloc[k], kPoissonTail);
                     Dist next;
                     for (const auto& [counts, p] : out)
                       for (std::size_t m = 0; m < pmf.size(); ++m) {
                         auto c2 = counts;
                         c2[k] = static_cast<int>(m);
                         next[c2] += p * pmf[m];
                       }
                     out = std::move(next);
                   }
                 },
             },
             input.statistics);
  return out;
}

Dist convolve(const Dist& x, const Dist& y) {
  Dist out;
  for (const auto& [cx, px] : x)
    for (const auto& [cy, py] : y) {
      auto c = cx;
      for (std::size_t k = 0; k < c.size(); ++k) c[k] += cy[k];
      out[c] += px * py;
    }
  return out;
}

Dist apply_detectors(const std::vector<Stage>& stages, Dist dist) {
  for (std::size_t k = 0; k < stages.size(); ++k) {
    Dist next;
    for (const auto& [counts, p] : dist) {
      const auto response = detector_response(stages[k].detector, counts[k], kPoissonTail);
      for (std::size_t m = 0; m < response.size(); ++m) {
        if (response[m] == 0.0) continue;
        auto c = counts;
        c[k] = static_cast<int>(m);
        next[c] += p * response[m];
      }
    }
    dist = std::move(next);
  }
  return dist;
}

void check_inputs(const std::vector<InputState>& inputs) {
  if (inputs.empty()) throw std::invalid_argument("cascade needs at least one input state");
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (std::abs(inner_product(inputs[i].mode, inputs[i].mode).real() - 1.0) > kNormTol)
      throw std::invalid_argument("input mode " + std::to_string(i) + " is not normalized");
    if (const auto* f = std::get_if<Fock>(&inputs[i].statistics); f && f->n < 0)
      throw std::invalid_argument("Fock photon number must be nonnegative");
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(inner_product(inputs[j].mode, inputs[i].mode)) > kOrthogonalityTol)
        throw std::invalid_argument("input modes " + std::to_string(j) + " and " +
                                    std::to_string(i) + " are not orthogonal");
  }
}

double mean_photons(const InputState& input) {
  return std::visit(overloaded{
                        [](const Fock& f) { return static_cast<double>(f.n); },
                        [](const Coherent& c) { return std::norm(c.alpha); },
                    },
                    input.statistics);
}

struct PreparedInputs {
  std::vector<std::vector<double>> alloc;
  std::vector<double> first_stage_probs;
  double residual = 0.0;
};

PreparedInputs prepare(const std::vector<Stage>& stages, const std::vector<InputState>& inputs) {
  check_stages(stages);
  check_inputs(inputs);
  PreparedInputs prep;
  double photons = 0.0, unconverted = 0.0, first_survival = 0.0;
  for (const auto& in : inputs) {
    const auto amp = run_cascade_amplitudes(stages, in.mode);
    prep.alloc.push_back(allocation_probabilities(amp));
    if (prep.first_stage_probs.empty()) {
      prep.first_stage_probs = amp.stage_probabilities();
      first_survival = amp.survival();
    }
    photons += mean_photons(in);
    unconverted += mean_photons(in) * amp.survival();
  }
  prep.residual = photons > 0.0 ? unconverted / photons : first_survival;
  return prep;
}

}  // namespace

Stage make_stage(const WaveguideParams& wg, const TimeGrid& tg, const ZGrid& zg,
                 const PumpShape& pump, const DetectorModel& detector) {
  if (auto errors = detector_errors(detector); !errors.empty())
    throw std::invalid_argument(errors.front());
  return Stage{pump, detector,
               std::make_shared<const ScatteringKernel>(
                   build_kernel(wg, pump, tg, zg, KernelPorts::SignalOnly))};
}

std::vector<double> CascadeAmplitudes::stage_probabilities() const {
  std::vector<double> p;
  p.reserve(converted.size());
  for (const auto& c : converted) p.push_back(c.norm() * c.norm());
  return p;
}

double CascadeAmplitudes::survival() const { return residual.norm() * residual.norm(); }

double CountDistribution::total() const {
  double sum = 0.0;
  for (const auto& [c, p] : outcomes) sum += p;
  return sum;
}

double CountDistribution::probability(const std::vector<int>& counts) const {
  const auto it = outcomes.find(counts);
  return it == outcomes.end() ? 0.0 : it->second;
}

std::vector<double> CountDistribution::mean_counts() const {
  std::vector<double> mean(stage_probabilities.size(), 0.0);
  for (const auto& [c, p] : outcomes)
    for (std::size_t k = 0; k < c.size(); ++k) mean[k] += p * c[k];
  return mean;
}

CascadeAmplitudes run_cascade_amplitudes(const std::vector<Stage>& stages, const ComplexField& u) {
  check_stages(stages);
  const TimeGrid& grid = stages.front().kernel->grid;
  if (!(u.grid() == grid)) throw std::invalid_argument("input mode grid differs from the stages");
  if (std::abs(inner_product(u, u).real() - 1.0) > kNormTol)
    throw std::invalid_argument("input mode is not normalized");

  CascadeAmplitudes out{{}, ComplexField(grid)};
  VectorXcd field = u.samples();
  for (const auto& stage : stages) {
    out.converted.emplace_back(grid, VectorXcd(stage.kernel->ba * field));
    field = stage.kernel->aa * field;
  }
  out.residual = ComplexField(grid, std::move(field));
  return out;
}

CountDistribution exact_count_distribution(const std::vector<Stage>& stages,
                                           const std::vector<InputState>& inputs) {
  for (const auto& in : inputs)
    if (const auto* f = std::get_if<Fock>(&in.statistics); f && f->n > kMaxExactPhotons)
      throw std::domain_error("Fock input with " + std::to_string(f->n) +
                              " photons exceeds the exact limit of " +
                              std::to_string(kMaxExactPhotons) + "; use Monte Carlo sampling");
  const PreparedInputs prep = prepare(stages, inputs);

  Dist pre{{std::vector<int>(stages.size(), 0), 1.0}};
  for (std::size_t i = 0; i < inputs.size(); ++i)
    pre = convolve(pre, pre_detector_distribution(inputs[i], prep.alloc[i]));

  CountDistribution dist;
  dist.outcomes = apply_detectors(stages, std::move(pre));
  dist.stage_probabilities = prep.first_stage_probs;
  dist.residual_prob = prep.residual;
  return dist;
}

CountDistribution exact_count_distribution(const std::vector<Stage>& stages,
                                           const InputState& input) {
  return exact_count_distribution(stages, std::vector<InputState>{input});
}

std::vector<CountRecord> sample_counts(const std::vector<Stage>& stages,
                                       const std::vector<InputState>& inputs, std::size_t shots,
                                       std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("shots must be >= 1");
  const PreparedInputs prep = prepare(stages, inputs);
  std::vector<std::vector<double>> cond;
  for (const auto& a : prep.alloc) cond.push_back(conditional_probabilities(a));

  const std::size_t n_stages = stages.size();
  std::vector<CountRecord> records(shots);
  const std::size_t chunks = (shots + kChunkShots - 1) / kChunkShots;
  parallel_for(chunks, [&](std::size_t chunk) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(chunk)));
    const std::size_t begin = chunk * kChunkShots;
    const std::size_t end = std::min(shots, begin + kChunkShots);
    std::vector<int> pre(n_stages);
    for (std::size_t s = begin; s < end; ++s) {
      std::fill(pre.begin(), pre.end(), 0);
      for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (const auto* f = std::get_if<Fock>(&inputs[i].statistics)) {
          int remaining = f->n;
          for (std::size_t k = 0; k < n_stages && remaining > 0; ++k) {
            const int taken = std::binomial_distribution<int>(remaining, cond[i][k])(rng);
            pre[k] += taken;
            remaining -= taken;
          }
        } else {
          const double photons = std::norm(std::get<Coherent>(inputs[i].statistics).alpha);
          for (std::size_t k = 0; k < n_stages; ++k) {
            const double mean = photons * prep.alloc[i][k];
            if (mean > 0.0) pre[k] += std::poisson_distribution<int>(mean)(rng);
          }
        }
      }
      CountRecord& rec = records[s];
      rec.per_stage_counts.resize(n_stages);
      for (std::size_t k = 0; k < n_stages; ++k)
        rec.per_stage_counts[k] = sample_detector(stages[k].detector, pre[k], rng);
      rec.residual_prob = prep.residual;
    }
  });
  return records;
}

std::vector<CountRecord> sample_counts(const std::vector<Stage>& stages, const InputState& input,
                                       std::size_t shots, std::uint64_t seed) {
  return sample_counts(stages, std::vector<InputState>{input}, shots, seed);
}

}  // namespace qfc
