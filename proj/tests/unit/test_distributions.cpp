#include <cmath>
#include <limits>
#include <string>

#include <gtest/gtest.h>

#include "agp/distributions.hpp"
#include "agp/errors.hpp"
#include "oracles.hpp"

using agp::Distribution;

TEST(Exponential, CdfMatchesClosedForm) {
  const auto d = Distribution::exponential(0.0055);
  EXPECT_NEAR(d.cdf(100.0), 0.423050189619513305, 1e-15);
  EXPECT_NEAR(d.cdf(110.0), 0.453925573360290587, 1e-15);
  EXPECT_EQ(d.cdf(0.0), 0.0);
  EXPECT_EQ(d.cdf(-3.0), 0.0);
  EXPECT_DOUBLE_EQ(d.mean(), 1.0 / 0.0055);
  EXPECT_DOUBLE_EQ(d.variance(), 1.0 / (0.0055 * 0.0055));
}

TEST(Weibull, MomentsAndCdf) {
  const auto d = Distribution::weibull(2.0, 100.0);
  EXPECT_NEAR(d.cdf(50.0), 0.221199216928595132, 1e-15);
  EXPECT_NEAR(d.mean(), 88.6226925452758014, 1e-11);
  EXPECT_NEAR(d.variance(), 2146.01836602551690, 1e-9);
  EXPECT_NEAR(d.limited_mean(80.0), 65.7669856328395635, 1e-10);
}

TEST(Gamma, MomentsAndCdf) {
  const auto d = Distribution::gamma(2.5, 40.0);
  EXPECT_NEAR(d.cdf(100.0), 0.584119813004492080, 1e-14);
  EXPECT_DOUBLE_EQ(d.mean(), 100.0);
  EXPECT_DOUBLE_EQ(d.variance(), 4000.0);
  EXPECT_NEAR(d.limited_mean(150.0), 90.0307844356087592, 1e-10);
  EXPECT_NEAR(d.sample(0.3), 59.998162655198126, 1e-8);
}

TEST(Lognormal, MomentsAndCdf) {
  const auto d = Distribution::lognormal(4.0, 0.5);
  EXPECT_NEAR(d.cdf(80.0), 0.777582250663149490, 1e-14);
  EXPECT_NEAR(d.cdf(std::exp(4.0)), 0.5, 1e-15);
  EXPECT_NEAR(d.mean(), 61.8678092503678865, 1e-11);
  EXPECT_NEAR(d.variance(), 1087.14301885922815, 1e-9);
  EXPECT_NEAR(d.limited_mean(60.0), 48.8826482807618224, 1e-10);
  EXPECT_NEAR(d.sample(0.9), 103.624706670872829, 1e-8);
}

class AllFamilies : public ::testing::TestWithParam<Distribution> {};

TEST_P(AllFamilies, CdfPlusSurvivalIsOne) {
  const auto& d = GetParam();
  for (double t : {0.0, 1e-3, 1.0, 17.0, 55.0, 100.0, 400.0, 5000.0}) {
    EXPECT_EQ(d.cdf(t) + d.survival(t), 1.0) << "t = " << t;
  }
}

TEST_P(AllFamilies, CdfIsMonotone) {
  const auto& d = GetParam();
  double prev = 0.0;
  for (double t = 0.0; t < 2000.0; t += 3.7) {
    const double f = d.cdf(t);
    EXPECT_GE(f, prev);
    EXPECT_LE(f, 1.0);
    prev = f;
  }
}

TEST_P(AllFamilies, SampleInvertsCdf) {
  const auto& d = GetParam();
  for (double u : {1e-9, 0.01, 0.25, 0.5, 0.75, 0.99, 1.0 - 1e-9}) {
    const double x = d.sample(u);
    EXPECT_NEAR(d.cdf(x), u, 1e-10) << "u = " << u;
  }
}

TEST_P(AllFamilies, LimitedMeanIsIntegratedSurvival) {
  const auto& d = GetParam();
  for (double w : {0.5, 30.0, 120.0}) {
    // t = w s^4 smooths the t^shape behaviour of shapes below one at the origin.
    const double ref = oracle::simpson(
        [&](double s) { return d.survival(w * s * s * s * s) * 4.0 * w * s * s * s; }, 0.0, 1.0,
        20000);
    EXPECT_NEAR(d.limited_mean(w), ref, 1e-8 * std::max(1.0, ref)) << "w = " << w;
  }
  EXPECT_NEAR(d.limited_mean(1e9), d.mean(), 1e-9 * d.mean());
  EXPECT_EQ(d.limited_mean(0.0), 0.0);
}

TEST_P(AllFamilies, SampleRejectsOutOfRangeUniform) {
  const auto& d = GetParam();
  EXPECT_THROW(d.sample(0.0), std::invalid_argument);
  EXPECT_THROW(d.sample(1.0), std::invalid_argument);
  EXPECT_THROW(d.sample(-0.5), std::invalid_argument);
}

TEST_P(AllFamilies, RoundTripsThroughParams) {
  const auto& d = GetParam();
  const auto copy = Distribution::from_params(agp::family_name(d.family()), d.params());
  EXPECT_EQ(copy.cdf(42.0), d.cdf(42.0));
  EXPECT_EQ(copy.mean(), d.mean());
}

std::string param_name(const ::testing::TestParamInfo<Distribution>& info) {
  static const char* const names[] = {"exponential", "weibull", "weibull_shape_below_1",
                                      "gamma",       "gamma_shape_below_1", "lognormal"};
  return names[info.index];
}

INSTANTIATE_TEST_SUITE_P(Families, AllFamilies,
                         ::testing::Values(Distribution::exponential(0.02),
                                           Distribution::weibull(1.7, 60.0),
                                           Distribution::weibull(0.6, 60.0),
                                           Distribution::gamma(2.5, 40.0),
                                           Distribution::gamma(0.7, 50.0),
                                           Distribution::lognormal(4.0, 0.5)),
                         param_name);

TEST(FromParams, NamesTheOffendingField) {
  try {
    Distribution::from_params("exponential", {{"rate", -1.0}}, "on");
    FAIL() << "expected InvalidParameter";
  } catch (const agp::InvalidParameter& e) {
    EXPECT_EQ(e.field(), "on.params.rate");
  }
  try {
    Distribution::from_params("weibull", {{"shape", 2.0}, {"scale", 1.0}, {"x", 1.0}}, "off");
    FAIL() << "expected InvalidParameter";
  } catch (const agp::InvalidParameter& e) {
    EXPECT_EQ(e.field(), "off.params");
  }
  try {
    Distribution::from_params("pareto", {{"alpha", 2.0}}, "off");
    FAIL() << "expected InvalidParameter";
  } catch (const agp::InvalidParameter& e) {
    EXPECT_EQ(e.field(), "off.family");
  }
  try {
    Distribution::from_params("gamma", {{"shape", 2.0}}, "on");
    FAIL() << "expected InvalidParameter";
  } catch (const agp::InvalidParameter& e) {
    EXPECT_EQ(e.field(), "on.params");
  }
}

TEST(Constructors, RejectBadParameters) {
  EXPECT_THROW(Distribution::exponential(0.0), agp::InvalidParameter);
  EXPECT_THROW(Distribution::exponential(std::numeric_limits<double>::infinity()),
               agp::InvalidParameter);
  EXPECT_THROW(Distribution::weibull(0.0, 1.0), agp::InvalidParameter);
  EXPECT_THROW(Distribution::gamma(1.0, -2.0), agp::InvalidParameter);
  EXPECT_THROW(Distribution::lognormal(0.0, 0.0), agp::InvalidParameter);
  EXPECT_THROW(Distribution::lognormal(std::nan(""), 1.0), agp::InvalidParameter);
}
