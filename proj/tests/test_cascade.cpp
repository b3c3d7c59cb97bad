#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "qfc/cascade.hpp"
#include "qfc/detector.hpp"
#include "qfc/schmidt.hpp"
#include "test_support.hpp"

namespace qfc {
namespace {

using testing::uniform_stage;

double factorial(int n) { return std::tgamma(n + 1.0); }

const TimeGrid kSmall{16, 4.0};

ComplexField flat_mode(const TimeGrid& g) {
  return ComplexField(g, VectorXcd::Ones(static_cast<Eigen::Index>(g.n_time))).normalized();
}

TEST(Detector, BinomialAndPoissonPmfs) {
  const auto b = binomial_pmf(4, 0.3);
  ASSERT_EQ(b.size(), 5u);
  for (int k = 0; k <= 4; ++k)
    EXPECT_NEAR(b[k], factorial(4) / (factorial(k) * factorial(4 - k)) * std::pow(0.3, k) * std::pow(0.7, 4 - k), 1e-15);
  EXPECT_EQ(binomial_pmf(3, 0.0), (std::vector<double>{1, 0, 0, 0}));
  EXPECT_EQ(binomial_pmf(3, 1.0), (std::vector<double>{0, 0, 0, 1}));

  const auto p = poisson_pmf(2.5, 1e-14);
  EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-13);
  EXPECT_NEAR(p[3], std::exp(-2.5) * std::pow(2.5, 3) / 6.0, 1e-15);
  EXPECT_EQ(poisson_pmf(0.0, 1e-12), std::vector<double>{1.0});
}

TEST(Detector, LossAndDarkCounts) {
  const DetectorModel pnr{DetectorKind::PNR, 0.8, 0.1};
  const auto r = detector_response(pnr, 3);
  // Reporting zero needs all three photons lost and no dark count.
  EXPECT_NEAR(r[0], std::pow(0.2, 3) * std::exp(-0.1), 1e-15);
  EXPECT_NEAR(std::accumulate(r.begin(), r.end(), 0.0), 1.0, 1e-12);

  const DetectorModel apd{DetectorKind::APD, 0.6, 0.05};
  const auto a = detector_response(apd, 2);
  ASSERT_EQ(a.size(), 2u);
  EXPECT_NEAR(a[0], std::exp(-0.05) * 0.16, 1e-15);
  EXPECT_NEAR(click_probability(apd, {0.5, 0.5}), 1.0 - std::exp(-0.05) * (0.5 + 0.5 * 0.4), 1e-15);
  EXPECT_FALSE(detector_errors(DetectorModel{DetectorKind::PNR, 1.5, 0.0}).empty());
  EXPECT_FALSE(detector_errors(DetectorModel{DetectorKind::PNR, 0.5, -1.0}).empty());
}

TEST(Detector, ClickProbabilityIsMonotone) {
  const std::vector<double> incident{0.2, 0.5, 0.3};
  double prev = -1.0;
  for (double eff = 0.0; eff <= 1.0; eff += 0.05) {
    const double c = click_probability({DetectorKind::APD, eff, 0.01}, incident);
    EXPECT_GE(c, prev);
    prev = c;
  }
  prev = -1.0;
  for (double dark = 0.0; dark <= 2.0; dark += 0.1) {
    const double c = click_probability({DetectorKind::APD, 0.5, dark}, incident);
    EXPECT_GE(c, prev);
    prev = c;
  }
}

TEST(Cascade, FockTwoOnBalancedStage) {
  const auto dist = exact_count_distribution({uniform_stage(kSmall, 0.5)}, InputState{flat_mode(kSmall), Fock{2}});
  EXPECT_NEAR(dist.probability({0}), 0.25, 1e-12);
  EXPECT_NEAR(dist.probability({1}), 0.5, 1e-12);
  EXPECT_NEAR(dist.probability({2}), 0.25, 1e-12);
}

TEST(Cascade, FockTwoSplitsMultinomially) {
  const std::vector<Stage> stages{uniform_stage(kSmall, 0.3), uniform_stage(kSmall, 0.5)};
  const double p1 = 0.3, p2 = 0.7 * 0.5, r = 1.0 - p1 - p2;
  const auto dist = exact_count_distribution(stages, InputState{flat_mode(kSmall), Fock{2}});
  EXPECT_NEAR(dist.probability({2, 0}), p1 * p1, 1e-12);
  EXPECT_NEAR(dist.probability({1, 1}), 2 * p1 * p2, 1e-12);
  EXPECT_NEAR(dist.probability({0, 2}), p2 * p2, 1e-12);
  EXPECT_NEAR(dist.probability({1, 0}), 2 * p1 * r, 1e-12);
  EXPECT_NEAR(dist.probability({0, 1}), 2 * p2 * r, 1e-12);
  EXPECT_NEAR(dist.probability({0, 0}), r * r, 1e-12);
  EXPECT_NEAR(dist.residual_prob, r, 1e-12);
}

TEST(Cascade, CoherentInputIsPoissonPerStage) {
  const auto dist = exact_count_distribution({uniform_stage(kSmall, 0.6)},
                                             InputState{flat_mode(kSmall), Coherent{{1.0, 0.0}}});
  EXPECT_NEAR(dist.probability({0}), std::exp(-0.6), 1e-12);
  EXPECT_NEAR(dist.probability({1}), 0.6 * std::exp(-0.6), 1e-12);

  const cplx alpha(1.2, -0.9);  // |alpha|^2 = 2.25
  const std::vector<Stage> two{uniform_stage(kSmall, 0.2), uniform_stage(kSmall, 0.5)};
  const auto d2 = exact_count_distribution(two, InputState{flat_mode(kSmall), Coherent{alpha}});
  const double m1 = 2.25 * 0.2, m2 = 2.25 * 0.4;
  EXPECT_NEAR(d2.probability({2, 1}), std::exp(-m1) * m1 * m1 / 2 * std::exp(-m2) * m2, 1e-12);
  const auto means = d2.mean_counts();
  EXPECT_NEAR(means[0], m1, 1e-10);
  EXPECT_NEAR(means[1], m2, 1e-10);
}

TEST(Cascade, DistributionsAreNormalized) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u01;
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Stage> stages;
    for (int k = 0; k < 3; ++k) {
      const DetectorModel det{trial % 2 ? DetectorKind::APD : DetectorKind::PNR, u01(rng), 0.3 * u01(rng)};
      stages.push_back(uniform_stage(kSmall, u01(rng), det));
    }
    const InputState in = trial % 3 ? InputState{flat_mode(kSmall), Fock{1 + trial % 7}}
                                    : InputState{flat_mode(kSmall), Coherent{{1.5 * u01(rng), u01(rng)}}};
    EXPECT_NEAR(exact_count_distribution(stages, in).total(), 1.0, 1e-9);
  }
}

TEST(Cascade, RefusesLargeFockStates) {
  const std::vector<Stage> stages{uniform_stage(kSmall, 0.5)};
  EXPECT_NO_THROW(exact_count_distribution(stages, InputState{flat_mode(kSmall), Fock{kMaxExactPhotons}}));
  EXPECT_THROW(exact_count_distribution(stages, InputState{flat_mode(kSmall), Fock{kMaxExactPhotons + 1}}),
               std::domain_error);
  // Sampling has no such limit.
  EXPECT_NO_THROW(sample_counts(stages, InputState{flat_mode(kSmall), Fock{100}}, 10, 1));
}

TEST(Cascade, RejectsNonOrthogonalInputs) {
  const std::vector<Stage> stages{uniform_stage(kSmall, 0.5)};
  const auto u = flat_mode(kSmall);
  EXPECT_THROW(exact_count_distribution(stages, {InputState{u, Fock{1}}, InputState{u, Fock{1}}}),
               std::invalid_argument);
  EXPECT_THROW(exact_count_distribution(stages, InputState{u.scaled(2.0), Fock{1}}), std::invalid_argument);
}

TEST(Cascade, OrthogonalInputsAddCounts) {
  const std::vector<Stage> stages{uniform_stage(kSmall, 0.5)};
  VectorXcd alt(16);
  for (int j = 0; j < 16; ++j) alt[j] = j % 2 ? 1.0 : -1.0;
  const InputState a{flat_mode(kSmall), Fock{1}};
  const InputState b{ComplexField(kSmall, alt).normalized(), Fock{1}};
  const auto dist = exact_count_distribution(stages, {a, b});
  EXPECT_NEAR(dist.probability({0}), 0.25, 1e-12);
  EXPECT_NEAR(dist.probability({1}), 0.5, 1e-12);
  EXPECT_NEAR(dist.probability({2}), 0.25, 1e-12);
}

TEST(Cascade, SamplingIsSeededAndMatchesExact) {
  const std::vector<Stage> stages{uniform_stage(kSmall, 0.4, {DetectorKind::PNR, 0.9, 0.05}),
                                  uniform_stage(kSmall, 0.5, {DetectorKind::APD, 0.7, 0.02})};
  const InputState in{flat_mode(kSmall), Fock{3}};
  const auto s1 = sample_counts(stages, in, 20000, 42);
  const auto s2 = sample_counts(stages, in, 20000, 42);
  ASSERT_EQ(s1.size(), 20000u);
  bool same = true;
  for (std::size_t i = 0; i < s1.size(); ++i) same = same && s1[i].per_stage_counts == s2[i].per_stage_counts;
  EXPECT_TRUE(same);

  setenv("QFC_THREADS", "3", 1);
  const auto s3 = sample_counts(stages, in, 20000, 42);
  unsetenv("QFC_THREADS");
  for (std::size_t i = 0; i < s1.size(); ++i) same = same && s1[i].per_stage_counts == s3[i].per_stage_counts;
  EXPECT_TRUE(same);

  const auto exact = exact_count_distribution(stages, in);
  std::map<std::vector<int>, double> freq;
  for (const auto& rec : s1) freq[rec.per_stage_counts] += 1.0 / 20000.0;
  for (const auto& [counts, p] : exact.outcomes) {
    if (p < 1e-3) continue;
    EXPECT_NEAR(freq[counts], p, 4.0 * std::sqrt(p * (1 - p) / 20000.0));
  }
}

TEST(Cascade, ApdDarkClickRate) {
  const DetectorModel apd{DetectorKind::APD, 0.5, 0.2};
  const std::vector<Stage> stages{uniform_stage(kSmall, 0.0, apd)};
  const auto shots = sample_counts(stages, InputState{flat_mode(kSmall), Fock{0}}, 50000, 7);
  double clicks = 0.0;
  for (const auto& r : shots) clicks += r.per_stage_counts[0];
  const double p = 1.0 - std::exp(-0.2);
  EXPECT_NEAR(clicks / 50000.0, p, 4.0 * std::sqrt(p * (1 - p) / 50000.0));
}

// Cascades over real stage kernels.

class DelayedPair : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    const auto wg = testing::counter_walkoff();
    const TimeGrid g{128, 20.0};
    stages_ = new std::vector<Stage>{make_stage(wg, g, ZGrid{100}, testing::gaussian(0.8), {}),
                                     make_stage(wg, g, ZGrid{100}, testing::gaussian(0.8, 3.0), {})};
  }
  static void TearDownTestSuite() { delete stages_; }
  static std::vector<Stage>* stages_;
};
std::vector<Stage>* DelayedPair::stages_ = nullptr;

TEST_F(DelayedPair, StageProbabilitiesFromMatrices) {
  const auto& s = *stages_;
  const auto first = decompose(*s[0].kernel, 2);
  const auto& u = first.input_modes[0];
  const double dt = u.grid().dt_ps();
  const double p1 = (s[0].kernel->ba * u.samples()).squaredNorm() * dt;
  const double p2 = (s[1].kernel->ba * (s[0].kernel->aa * u.samples())).squaredNorm() * dt;
  EXPECT_NEAR(p1, first.lambdas[0] * first.lambdas[0], 1e-8);

  const auto amp = run_cascade_amplitudes(s, u);
  const auto probs = amp.stage_probabilities();
  EXPECT_NEAR(probs[0], p1, 1e-12);
  EXPECT_NEAR(probs[1], p2, 1e-12);

  const auto dist = exact_count_distribution(s, InputState{u, Fock{1}});
  EXPECT_NEAR(dist.probability({1, 0}), p1, 1e-10);
  EXPECT_NEAR(dist.probability({0, 1}), p2, 1e-10);
  EXPECT_NEAR(dist.probability({0, 0}), 1.0 - p1 - p2, 1e-10);
}

TEST_F(DelayedPair, ConservesProbabilityForRandomInputs) {
  std::mt19937_64 rng(99);
  auto three = *stages_;
  three.push_back(three[0]);
  for (int trial = 0; trial < 100; ++trial) {
    const auto amp = run_cascade_amplitudes(three, testing::random_normalized(three[0].kernel->grid, rng));
    const auto p = amp.stage_probabilities();
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0) + amp.survival(), 1.0, 1e-6);
  }
}

TEST_F(DelayedPair, ConvertsTheMatchingModeLater) {
  // The fundamental mode of the delayed stage passes the first stage mostly
  // unconverted and is picked up by the second.
  const auto second = decompose(*(*stages_)[1].kernel, 1);
  const auto p = run_cascade_amplitudes(*stages_, second.input_modes[0]).stage_probabilities();
  EXPECT_LT(p[0], p[1]);
  EXPECT_LT(p[0], 0.05);
}

}  // namespace
}  // namespace qfc
