#include <gtest/gtest.h>

#include "nestdop/error.hpp"
#include "nestdop/filters.hpp"
#include "oracles.hpp"

using namespace nestdop;

// Reference coefficients from scipy.signal.butter(order, 2 * 0.03, 'high').
TEST(Butterworth, OrderTwoCoefficients) {
  const auto f = butterworth_highpass(2, 0.03);
  const std::vector<double> b{0.8751830924381349, -1.7503661848762697, 0.8751830924381349};
  const std::vector<double> a{1.0, -1.734725768809275, 0.7660066009432638};
  ASSERT_EQ(f.b.size(), 3u);
  ASSERT_EQ(f.a.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(f.b[i], b[i], 1e-12);
    EXPECT_NEAR(f.a[i], a[i], 1e-12);
  }
}

TEST(Butterworth, OrderFourCoefficients) {
  const auto f = butterworth_highpass(4, 0.03);
  const std::vector<double> b{0.7813672655474427, -3.125469062189771, 4.688203593284657,
                              -3.125469062189771, 0.7813672655474427};
  const std::vector<double> a{1.0, -3.5077862073907826, 4.640902412686707, -2.7426528211203727,
                              0.6105348075612237};
  ASSERT_EQ(f.b.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_NEAR(f.b[i], b[i], 1e-11);
    EXPECT_NEAR(f.a[i], a[i], 1e-11);
  }
}

TEST(Butterworth, MagnitudeResponse) {
  const auto f = butterworth_highpass(4, 0.03);
  // scipy.signal.freqz at nu = 0.005, 0.03, 0.2
  EXPECT_NEAR(std::norm(frequency_response(f, 0.005)), 5.817909822777362e-07, 1e-14);
  EXPECT_NEAR(std::norm(frequency_response(f, 0.03)), 0.5, 1e-12);
  EXPECT_NEAR(std::norm(frequency_response(f, 0.2)), 0.9999999178912989, 1e-12);
  EXPECT_NEAR(std::abs(frequency_response(f, -0.5)), 1.0, 1e-12);
  for (int order : {1, 3, 6})
    for (double nu : {0.01, 0.05, 0.17, 0.33, 0.49})
      EXPECT_NEAR(std::norm(frequency_response(butterworth_highpass(order, 0.07), nu)),
                  oracle::butterworth_hp_gain2(order, 0.07, nu), 1e-10);
}

TEST(Butterworth, StableAndRejectsBadArgs) {
  for (int order = 1; order <= 8; ++order) {
    const auto f = butterworth_highpass(order, 0.03);
    EXPECT_TRUE(is_stable(f));
    EXPECT_LT(pole_radius(f), 1.0);
    EXPECT_EQ(poles(f).size(), std::size_t(order));
  }
  EXPECT_THROW(butterworth_highpass(0, 0.03), Error);
  EXPECT_THROW(butterworth_highpass(2, 0.0), Error);
  EXPECT_THROW(butterworth_highpass(2, 0.5), Error);
}

TEST(IirFilter, Stability) {
  EXPECT_TRUE(is_stable(IirFilter{{1.0}, {1.0, -0.5}}));
  EXPECT_FALSE(is_stable(IirFilter{{1.0}, {1.0, -1.0}}));
  EXPECT_NEAR(pole_radius(IirFilter{{1.0}, {1.0, 0.0, 0.25}}), 0.5, 1e-12);
  EXPECT_EQ(pole_radius(IirFilter{{1.0, 2.0}, {1.0}}), 0.0);
}

TEST(IirFilter, ImpulseResponseOnePole) {
  const auto h = impulse_response(IirFilter{{1.0}, {1.0, -0.5}}, 10);
  for (std::size_t n = 0; n < 10; ++n) EXPECT_NEAR(h[n], std::pow(0.5, double(n)), 1e-15);
}

TEST(CorrelationKernel, FirAutocorrelation) {
  const auto k = correlation_kernel(FirFilter{{Complex(1, 0), Complex(0, 1)}}, 4);
  EXPECT_NEAR(std::abs(k.at(0) - Complex(2, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(k.at(1) - Complex(0, 1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(k.at(-1) - Complex(0, -1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(k.at(2)), 0.0, 1e-15);
}

TEST(CorrelationKernel, IirMatchesClosedForm) {
  // h[n] = a^n gives g(k) = a^|k| / (1 - a^2).
  const double a = 0.8;
  const auto k = correlation_kernel(IirFilter{{1.0}, {1.0, -a}}, 32);
  EXPECT_GE(k.response_length, 128u);
  EXPECT_LT(k.truncation_bound, 1e-12);
  for (int l = -20; l <= 20; ++l)
    EXPECT_NEAR(k.at(l).real(), std::pow(a, std::abs(l)) / (1 - a * a), 1e-12);
}

TEST(CorrelationKernel, RejectsUnstable) {
  EXPECT_THROW(correlation_kernel(IirFilter{{1.0}, {1.0, -2.0}}, 8), Error);
}

TEST(Windows, Shapes) {
  const auto r = make_window(WindowKind::rectangular, 4);
  EXPECT_EQ(r, std::vector<double>(4, 1.0));
  const auto h = make_window(WindowKind::hamming, 5);
  EXPECT_NEAR(h[0], 0.08, 1e-12);
  EXPECT_NEAR(h[2], 1.0, 1e-12);
  const auto n = make_window(WindowKind::hann, 5);
  EXPECT_NEAR(n[0], 0.0, 1e-12);
  EXPECT_NEAR(n[2], 1.0, 1e-12);
  EXPECT_EQ(parse_window("hann"), WindowKind::hann);
  EXPECT_EQ(to_string(WindowKind::hamming), "hamming");
  EXPECT_THROW(parse_window("kaiser"), Error);
}
