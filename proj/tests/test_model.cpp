#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "qfc/model.hpp"
#include "qfc/validation.hpp"
#include "test_support.hpp"

namespace qfc {
namespace {

using testing::gaussian;
using testing::gaussian_field;

TEST(TimeGrid, SampleTimesAndFrequencies) {
  const TimeGrid g{8, 4.0};
  EXPECT_DOUBLE_EQ(g.dt_ps(), 0.5);
  EXPECT_DOUBLE_EQ(g.time(0), -2.0);
  EXPECT_DOUBLE_EQ(g.time(4), 0.0);
  EXPECT_DOUBLE_EQ(g.omega(1), 2.0 * std::numbers::pi / 4.0);
  EXPECT_DOUBLE_EQ(g.omega(4), -g.nyquist_omega());
  EXPECT_DOUBLE_EQ(g.omega(7), -2.0 * std::numbers::pi / 4.0);
}

TEST(ComplexField, RejectsLengthMismatch) {
  EXPECT_THROW(ComplexField(TimeGrid{16, 1.0}, VectorXcd::Zero(8)), std::invalid_argument);
}

TEST(InnerProduct, NormalizedFieldHasUnitNorm) {
  const auto u = gaussian_field(testing::reference_grid(), 0.8).normalized();
  EXPECT_NEAR(inner_product(u, u).real(), 1.0, 1e-12);
  EXPECT_NEAR(inner_product(u, u).imag(), 0.0, 1e-12);
}

TEST(InnerProduct, EvenAndOddFieldsAreOrthogonal) {
  const TimeGrid g = testing::reference_grid();
  const auto even = gaussian_field(g, 0.8);
  VectorXcd odd(static_cast<Eigen::Index>(g.n_time));
  for (std::size_t j = 0; j < g.n_time; ++j)
    odd[static_cast<Eigen::Index>(j)] = g.time(j) * even[j];
  // t_0 = -W/2 has no mirror partner on the grid, but the Gaussian is ~0 there.
  EXPECT_NEAR(std::abs(inner_product(even, ComplexField(g, odd))), 0.0, 1e-12);
}

TEST(InnerProduct, GaussianEnergyMatchesClosedForm) {
  // integral of exp(-t^2 / sigma^2) dt = sigma sqrt(pi)
  const double sigma = 0.8;
  const auto u = gaussian_field(testing::reference_grid(), sigma);
  EXPECT_NEAR(inner_product(u, u).real(), sigma * std::sqrt(std::numbers::pi), 1e-12);
}

TEST(InnerProduct, GridMismatchThrows) {
  const ComplexField a(TimeGrid{16, 1.0}), b(TimeGrid{16, 2.0});
  EXPECT_THROW(inner_product(a, b), std::invalid_argument);
}

TEST(InnerProduct, HermitianPositiveAndNormalizable) {
  std::mt19937_64 rng(7);
  const TimeGrid g{64, 10.0};
  for (int trial = 0; trial < 50; ++trial) {
    const auto u = testing::random_normalized(g, rng).scaled({1.7, -0.3});
    const auto v = testing::random_normalized(g, rng).scaled({0.2, 2.0});
    const cplx uv = inner_product(u, v), vu = inner_product(v, u);
    EXPECT_NEAR(std::abs(uv - std::conj(vu)), 0.0, 1e-12);
    EXPECT_GT(inner_product(u, u).real(), 0.0);
    EXPECT_NEAR(inner_product(u.normalized(), u.normalized()).real(), 1.0, 1e-12);
  }
  EXPECT_EQ(inner_product(ComplexField(g), ComplexField(g)), cplx(0.0, 0.0));
  EXPECT_THROW(ComplexField(g).normalized(), std::invalid_argument);
}

TEST(ValidateConfig, ReferenceConfigIsClean) {
  // Warning predicates evaluated by hand for n=512, W=20, L=1, |mu|=|nu|=1,
  // sigma=0.8, n_z=400:
  //  (a) leaked fraction ~ erfc(8 / 0.8) ~ 2e-45        < 1e-6
  //  (b) walk-off 1 ps                                  < 5 ps
  //  (c) (pi / dt) * 1 * dz / 2 = 80.4 * 0.00125 = 0.1  < pi
  const auto report = validate_config(testing::counter_walkoff(), testing::reference_grid(),
                                      testing::reference_z(), gaussian(0.8));
  EXPECT_TRUE(report.ok());
  EXPECT_TRUE(report.warnings.empty());
}

TEST(ValidateConfig, DegenerateSizesAreHardErrors) {
  const auto wg = testing::counter_walkoff();
  EXPECT_FALSE(validate_config(wg, TimeGrid{0, 20.0}, ZGrid{400}, gaussian(0.8)).ok());
  EXPECT_FALSE(validate_config(wg, TimeGrid{500, 20.0}, ZGrid{400}, gaussian(0.8)).ok());
  EXPECT_FALSE(validate_config(wg, TimeGrid{4, 20.0}, ZGrid{400}, gaussian(0.8)).ok());
  EXPECT_FALSE(validate_config(wg, TimeGrid{512, 0.0}, ZGrid{400}, gaussian(0.8)).ok());
  EXPECT_FALSE(validate_config(wg, TimeGrid{512, 20.0}, ZGrid{0}, gaussian(0.8)).ok());
  EXPECT_FALSE(validate_config(wg, TimeGrid{512, 20.0}, ZGrid{400}, gaussian(-1.0)).ok());
  auto bad = wg;
  bad.length_cm = 0.0;
  EXPECT_FALSE(validate_config(bad, TimeGrid{512, 20.0}, ZGrid{400}, gaussian(0.8)).ok());
  bad = wg;
  bad.eta_mag = -1.0;
  EXPECT_FALSE(validate_config(bad, TimeGrid{512, 20.0}, ZGrid{400}, gaussian(0.8)).ok());
  EXPECT_THROW(require_valid(wg, TimeGrid{0, 20.0}, ZGrid{400}, gaussian(0.8)), ConfigError);
}

TEST(ValidateConfig, NarrowWindowWarnsAboutPumpLeakage) {
  // Outside +-1.6 ps the |f|^2 tail holds erfc(1.6 / 0.8) = erfc(2) ~ 4.7e-3.
  ASSERT_GT(std::erfc(2.0), 1e-6);
  const auto report = validate_config(testing::counter_walkoff(), TimeGrid{512, 4.0},
                                      ZGrid{400}, gaussian(0.8));
  EXPECT_TRUE(report.ok());
  ASSERT_FALSE(report.warnings.empty());
  EXPECT_NE(report.warnings.front().find("central 80%"), std::string::npos);
}

TEST(ValidateConfig, WalkoffAndNyquistWarnings) {
  auto wg = testing::counter_walkoff();
  wg.mu_ps_per_cm = 6.0;  // 6 ps > 25% of 20 ps
  auto report = validate_config(wg, testing::reference_grid(), testing::reference_z(), gaussian(0.8));
  ASSERT_EQ(report.warnings.size(), 1u);
  EXPECT_NE(report.warnings[0].find("walk-off"), std::string::npos);

  // n_z = 1: (pi / dt) * 1 * 1 / 2 = 40 rad per half step
  report = validate_config(testing::counter_walkoff(), testing::reference_grid(), ZGrid{1}, gaussian(0.8));
  ASSERT_EQ(report.warnings.size(), 1u);
  EXPECT_NE(report.warnings[0].find("Nyquist"), std::string::npos);
}

}  // namespace
}  // namespace qfc
