#include <cmath>

#include <gtest/gtest.h>

#include "qfc/pump.hpp"
#include "test_support.hpp"

namespace qfc {
namespace {

TEST(GaussianPump, ClosedFormSamples) {
  const TimeGrid g{64, 8.0};
  const GaussianPump p{0.7, 0.5, 1.2, 0.3};
  const auto f = evaluate(p, g);
  for (std::size_t j = 0; j < g.n_time; ++j) {
    const double s = g.time(j) - 0.5;
    const cplx expect = 1.2 * std::exp(-s * s / (2 * 0.49)) * std::polar(1.0, 0.3 * s * s);
    EXPECT_NEAR(std::abs(f[j] - expect), 0.0, 1e-14);
  }
}

TEST(GaussianPump, DelayTranslatesSamples) {
  const TimeGrid g = testing::reference_grid();
  const auto f0 = evaluate(testing::gaussian(0.8), g);
  // 3 ps is not a whole number of cells, so compare against the shifted
  // continuous function by index offset on a grid where it is.
  const TimeGrid g2{512, 25.6};  // dt = 0.05, 3 ps = 60 cells
  const auto a = evaluate(testing::gaussian(0.8), g2);
  const auto b = evaluate(testing::gaussian(0.8, 3.0), g2);
  for (std::size_t j = 60; j < g2.n_time; ++j) EXPECT_NEAR(std::abs(b[j] - a[j - 60]), 0.0, 1e-14);
  EXPECT_NEAR(f0.norm(), evaluate(testing::gaussian(0.8, 3.0), g).norm(), 1e-12);
}

TEST(GaussianPump, ChirpOnlyChangesPhase) {
  const TimeGrid g = testing::reference_grid();
  const auto plain = evaluate(GaussianPump{0.8, 0.0, 1.0, 0.0}, g);
  const auto chirped = evaluate(GaussianPump{0.8, 0.0, 1.0, 2.5}, g);
  for (std::size_t j = 0; j < g.n_time; ++j)
    EXPECT_NEAR(std::abs(chirped[j]), std::abs(plain[j]), 1e-15);
  EXPECT_GT((chirped.samples() - plain.samples()).norm(), 0.1);
}

TEST(HarmonicPump, ParityAndOrthogonality) {
  const TimeGrid g = testing::reference_grid();
  const auto [cos_shape, sin_shape] = pump_pair_harmonic();
  const auto fc = evaluate(cos_shape, g);
  const auto fs = evaluate(sin_shape, g);
  // t_j and t_{N-j} are mirror images for j >= 1.
  for (std::size_t j = 1; j < g.n_time; ++j) {
    EXPECT_NEAR(std::abs(fc[j] - fc[g.n_time - j]), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(fs[j] + fs[g.n_time - j]), 0.0, 1e-14);
  }
  EXPECT_NEAR(std::abs(inner_product(fc, fs)), 0.0, 1e-12);
}

TEST(HarmonicPump, ReferencePairParameters) {
  const auto [c, s] = pump_pair_harmonic();
  const auto& hc = std::get<HarmonicGaussianPump>(c);
  const auto& hs = std::get<HarmonicGaussianPump>(s);
  EXPECT_EQ(hc.harmonic, Harmonic::Cos);
  EXPECT_EQ(hs.harmonic, Harmonic::Sin);
  EXPECT_DOUBLE_EQ(hc.amplitude, 1.0);
  EXPECT_DOUBLE_EQ(hs.amplitude, 1.3);
  EXPECT_DOUBLE_EQ(hc.sigma_p_ps, 0.8);
  EXPECT_DOUBLE_EQ(hs.sigma_p_ps, 0.8);
  EXPECT_DOUBLE_EQ(hc.rate_k, 2.0);

  const TimeGrid g{8, 8.0};
  const auto fs = evaluate(s, g);
  const double t = g.time(5);
  EXPECT_NEAR(fs[5].real(), 1.3 * std::exp(-t * t / (2 * 0.64)) * std::sin(2.0 * t / 0.8), 1e-15);
}

TEST(TabulatedPump, SameGridReturnsSamples) {
  const TimeGrid g{16, 4.0};
  std::vector<cplx> s(16);
  for (std::size_t j = 0; j < s.size(); ++j) s[j] = {double(j), -double(j) / 2};
  const auto f = evaluate(TabulatedPump{g, s}, g);
  for (std::size_t j = 0; j < s.size(); ++j) EXPECT_EQ(f[j], s[j]);
}

TEST(TabulatedPump, InterpolatesBandLimitedShape) {
  const TimeGrid coarse{128, 20.0}, fine{512, 20.0};
  const auto src = evaluate(testing::gaussian(0.8), coarse);
  const TabulatedPump tab{coarse, {src.samples().begin(), src.samples().end()}};
  const auto interp = evaluate(tab, fine);
  const auto exact = evaluate(testing::gaussian(0.8), fine);
  EXPECT_LT((interp.samples() - exact.samples()).cwiseAbs().maxCoeff(), 1e-10);
  // Zero outside the source window.
  const auto wider = evaluate(tab, TimeGrid{512, 40.0});
  EXPECT_EQ(wider[0], cplx(0.0, 0.0));
}

TEST(PumpErrors, RejectsBadShapes) {
  EXPECT_FALSE(pump_errors(GaussianPump{0.0, 0.0, 1.0, 0.0}).empty());
  EXPECT_FALSE(pump_errors(GaussianPump{0.8, 0.0, std::nan(""), 0.0}).empty());
  EXPECT_FALSE(pump_errors(HarmonicGaussianPump{-1.0, 1.0, Harmonic::Cos, 2.0}).empty());
  EXPECT_FALSE(pump_errors(TabulatedPump{TimeGrid{16, 4.0}, std::vector<cplx>(8)}).empty());
  EXPECT_TRUE(pump_errors(testing::gaussian(0.8)).empty());
  EXPECT_THROW(evaluate(GaussianPump{-0.1, 0.0, 1.0, 0.0}, TimeGrid{16, 4.0}), std::invalid_argument);
}

TEST(IntensityFwhm, GaussianAndNumericAgree) {
  // |f|^2 = exp(-t^2 / sigma^2): FWHM = 2 sigma sqrt(ln 2)
  EXPECT_NEAR(intensity_fwhm_ps(testing::gaussian(0.8)), 1.6 * std::sqrt(std::log(2.0)), 1e-12);
  const TimeGrid g{4096, 20.0};
  const auto src = evaluate(testing::gaussian(0.8), g);
  const TabulatedPump tab{g, {src.samples().begin(), src.samples().end()}};
  EXPECT_NEAR(intensity_fwhm_ps(tab), 1.6 * std::sqrt(std::log(2.0)), 1e-3);
}

}  // namespace
}  // namespace qfc
