#include <gtest/gtest.h>

#include <random>

#include "nestdop/coarray.hpp"
#include "nestdop/error.hpp"
#include "nestdop/estimators.hpp"
#include "oracles.hpp"

using namespace nestdop;

namespace {

CoarraySignal exact_z(const ToneSet& t, const EmissionPattern& p, double noise) {
  return lag_average(CovarianceEstimate::exact(analytic_covariance(t, p, noise)), p);
}

double grid_nu(int bin, int n) { return wrap_frequency(static_cast<double>(bin) / n); }

}  // namespace

TEST(GridSpectrum, CenteredFrequencies) {
  const GridSpectrum s(std::vector<double>(15, 0.0));
  EXPECT_DOUBLE_EQ(s.frequency(7), 0.0);
  EXPECT_DOUBLE_EQ(s.frequency(0), -7.0 / 15);
  EXPECT_DOUBLE_EQ(s.frequency(14), 7.0 / 15);
  EXPECT_EQ(s.bin_of(0.2), 10u);
  EXPECT_EQ(s.bin_of(-0.49), 0u);
  const GridSpectrum even(std::vector<double>(8, 0.0));
  EXPECT_DOUBLE_EQ(even.frequency(0), -0.5);
  EXPECT_DOUBLE_EQ(even.frequency(4), 0.0);
  EXPECT_EQ(even.bin_of(0.49), 0u);
}

TEST(Nest, OnGridToneIsOneBin) {
  const auto pat = build_nested(3, 2);
  const int n = 2 * pat.window_size() - 1;
  for (int i0 = 0; i0 < n; ++i0) {
    const double nu = grid_nu(i0, n);
    const auto s = nest(exact_z(ToneSet({{nu, 1.0}}), pat, 0.0), 0.0);
    ASSERT_EQ(s.size(), std::size_t(n));
    int nonzero = 0;
    for (std::size_t b = 0; b < s.size(); ++b) nonzero += s[b] > 1e-12;
    EXPECT_EQ(nonzero, 1);
    EXPECT_NEAR(s[s.bin_of(nu)], 1.0, 1e-12);
  }
}

TEST(Nest, MatchesNaiveDft) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  const int p = 6, n = 2 * p - 1;
  CoarraySignal z(p);
  z(0) = 4.0;
  for (int l = 1; l < p; ++l) {
    z(l) = Complex(g(rng), g(rng));
    z(-l) = std::conj(z(l));
  }
  std::vector<oracle::cd> x(static_cast<std::size_t>(n));
  for (int l = -(p - 1); l <= p - 1; ++l) x[static_cast<std::size_t>((l + n) % n)] = z(l);
  const auto xf = oracle::dft(x);
  const auto s = nest(z, 0.0);
  for (int k = 0; k < n; ++k) {
    // bin k of the DFT sits at nu = k / n; nest evaluates sum_l z(l) exp(-j 2 pi nu l)
    const double want = std::max(xf[static_cast<std::size_t>(k)].real() / n, 0.0);
    EXPECT_NEAR(s[s.bin_of(grid_nu(k, n))], want, 1e-12);
  }
}

TEST(Nest, LargeLambdaZeroes) {
  const auto s = nest(exact_z(ToneSet({{0.2, 1.0}}), build_nested(3, 2), 0.0), 1.5);
  for (double v : s.powers()) EXPECT_EQ(v, 0.0);
}

TEST(Nest, NoiseOnlyIsFlat) {
  CoarraySignal z(5);
  z(0) = 0.9;
  const auto s = nest(z, 0.0);
  for (double v : s.powers()) EXPECT_NEAR(v, 0.1, 1e-15);
}

TEST(Nest, ThresholdMonotone) {
  const auto pat = build_nested(4, 4);
  const auto z = lag_average(
      estimate_covariance(generate_snapshots(ToneSet({{0.1, 1.0}, {-0.3, 0.4}}), pat, 20, 0.3, 4), true),
      pat);
  std::vector<double> lambdas{0.0, 0.001, 0.01, 0.05, 0.2, 1.0};
  for (std::size_t i = 0; i + 1 < lambdas.size(); ++i) {
    const auto lo = nest(z, lambdas[i]);
    const auto hi = nest(z, lambdas[i + 1]);
    for (std::size_t b = 0; b < lo.size(); ++b) EXPECT_GE(lo[b], hi[b]);
  }
}

TEST(Nest, ResolvesAdjacentDenseBins) {
  const auto pat = build_nested(7, 8);
  const int n = 2 * pat.window_size() - 1;
  const double a = grid_nu(19, n), b = grid_nu(20, n);
  const auto s = nest(exact_z(ToneSet({{a, 1.0}, {b, 1.0}}), pat, 0.0), 0.0);
  EXPECT_NEAR(s[s.bin_of(a)], 1.0, 1e-12);
  EXPECT_NEAR(s[s.bin_of(b)], 1.0, 1e-12);
  EXPECT_EQ(s.size(), std::size_t(n));
  // Welch on P = 64 bins maps both to a single bin.
  const GridSpectrum welch_grid(std::vector<double>(static_cast<std::size_t>(pat.window_size()), 0.0));
  EXPECT_EQ(welch_grid.bin_of(a), welch_grid.bin_of(b));
}

TEST(Nest, InvariantToOptimalPatternChoice) {
  const ToneSet t({{0.11, 1.0}, {-0.2, 0.3}});
  const auto za = exact_z(t, build_nested(15, 8), 0.1);
  const auto zb = exact_z(t, build_nested(7, 16), 0.1);
  EXPECT_LT((za.values() - zb.values()).cwiseAbs().maxCoeff(), 1e-12);
  const auto sa = nest(za, 0.0), sb = nest(zb, 0.0);
  for (std::size_t i = 0; i < sa.size(); ++i) EXPECT_NEAR(sa[i], sb[i], 1e-12);
}

TEST(Nesprit, OffGridSingleTone) {
  const auto lines = nesprit(exact_z(ToneSet({{0.2, 1.0}}), build_nested(3, 2), 0.0), 1e-6);
  ASSERT_EQ(lines.model_order, 1);
  ASSERT_EQ(lines.lines.size(), 1u);
  EXPECT_NEAR(lines.lines[0].frequency, 0.2, 1e-9);
  EXPECT_NEAR(lines.lines[0].power, 1.0, 1e-9);
}

TEST(Nesprit, TwoTones) {
  const auto lines = nesprit(exact_z(ToneSet({{0.15, 1.0}, {-0.15, 0.5}}), build_nested(3, 2), 0.0), 1e-6);
  ASSERT_EQ(lines.model_order, 2);
  EXPECT_NEAR(lines.lines[0].frequency, -0.15, 1e-9);
  EXPECT_NEAR(lines.lines[0].power, 0.5, 1e-9);
  EXPECT_NEAR(lines.lines[1].frequency, 0.15, 1e-9);
  EXPECT_NEAR(lines.lines[1].power, 1.0, 1e-9);
}

TEST(Nesprit, NoiseOnlyAboveThresholdIsEmpty) {
  CoarraySignal z(8);
  z(0) = 0.3;
  const auto lines = nesprit(z, 0.5);
  EXPECT_EQ(lines.model_order, 0);
  EXPECT_TRUE(lines.lines.empty());
  EXPECT_NEAR(lines.noise_estimate, 0.3, 1e-12);
  EXPECT_FALSE(lines.peak());
}

TEST(Nesprit, ModelOrderTooLarge) {
  CoarraySignal z(4);
  z(0) = 1.0;
  NespritOptions o;
  o.model_order = 4;
  EXPECT_THROW(nesprit(z, o), Error);
}

TEST(Nesprit, RandomToneSetsAtMachinePrecision) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> pw(1e-3, 2.0);
  for (int trial = 0; trial < 40; ++trial) {
    const auto pat = build_nested(5, 6);
    const int p = pat.window_size();
    const int m = 1 + trial % 6;
    // Well separated frequencies keep the Vandermonde system conditioned.
    std::vector<Tone> tones;
    const double offset = std::uniform_real_distribution<double>(0, 1.0 / m)(rng);
    for (int i = 0; i < m; ++i) tones.push_back({wrap_frequency(offset + double(i) / m), pw(rng)});
    const auto lines = nesprit(exact_z(ToneSet(tones), pat, 0.0), 1e-9);
    ASSERT_EQ(lines.model_order, m);
    ASSERT_LE(m, p - 1);
    std::sort(tones.begin(), tones.end(), [](auto& a, auto& b) { return a.frequency < b.frequency; });
    for (int i = 0; i < m; ++i) {
      EXPECT_NEAR(lines.lines[i].frequency, tones[i].frequency, 1e-9);
      EXPECT_NEAR(lines.lines[i].power, tones[i].power, 1e-8);
    }
  }
}

TEST(Nesprit, LeastSquaresReproducesZ) {
  const auto pat = build_nested(4, 5);
  const int p = pat.window_size();
  const ToneSet t({{0.05, 1.0}, {0.21, 0.6}, {-0.33, 0.2}});
  const auto z = exact_z(t, pat, 0.0);
  const auto lines = nesprit(z, 1e-8);
  for (int l = -(p - 1); l <= p - 1; ++l) {
    Complex rec = 0;
    for (const auto& line : lines.lines) rec += line.power * std::polar(1.0, kTwoPi * line.frequency * l);
    EXPECT_LT(std::abs(rec - z(l)), 1e-8);
  }
}

TEST(Nesprit, NoiseFloorSubtraction) {
  const auto pat = build_nested(3, 3);
  const auto z = exact_z(ToneSet({{0.2, 1.0}}), pat, 0.5);
  NespritOptions o;
  o.lambda = 0.6;
  const auto lines = nesprit(z, o);
  EXPECT_EQ(lines.model_order, 1);
  EXPECT_NEAR(lines.noise_estimate, 0.5, 1e-10);
  EXPECT_NEAR(lines.lines[0].power, 1.0, 1e-9);
  o.subtract_noise_floor = false;
  const auto raw = nesprit(z, o);
  EXPECT_GT(raw.lines[0].power, 1.0 + 1e-3);
}

TEST(Nesprit, RasterizeDenseGrid) {
  LineSpectrum ls;
  ls.lines = {{0.2, 1.0}, {-0.1, 0.5}};
  ls.model_order = 2;
  const auto g = ls.rasterize(8);
  EXPECT_EQ(g.size(), 15u);
  EXPECT_DOUBLE_EQ(g[g.bin_of(0.2)], 1.0);
  EXPECT_DOUBLE_EQ(g[g.bin_of(-0.1)], 0.5);
  EXPECT_DOUBLE_EQ(g.total_power(), 1.5);
}

TEST(NoiseFloor, Cases) {
  const std::vector<double> ev{5.0, 2.0, 0.5, 0.5, 0.5};
  EXPECT_DOUBLE_EQ(estimate_noise_floor(ev, 2), 0.5);
  EXPECT_DOUBLE_EQ(estimate_noise_floor(ev, 0), 8.5 / 5);
  EXPECT_THROW(estimate_noise_floor(ev, 5), Error);
  const std::vector<double> neg{1.0, -0.2, -0.4};
  EXPECT_DOUBLE_EQ(estimate_noise_floor(neg, 1), 0.0);
}

TEST(NoiseFloor, FiniteSampleWithin20Percent) {
  const auto pat = build_nested(3, 3);
  const auto s = generate_snapshots(ToneSet({{0.2, 1.0}}), pat, 10000, 1.0, 23);
  const auto z = lag_average(estimate_covariance(s, false), pat);
  NespritOptions o;
  o.model_order = 1;
  const auto lines = nesprit(z, o);
  EXPECT_GT(lines.noise_estimate, 0.0);
  EXPECT_NEAR(lines.noise_estimate, 1.0, 0.2);
}

TEST(Welch, OnGridToneSingleBin) {
  const int p = 16;
  const auto pat = standard_pattern(p);
  const auto snaps = generate_snapshots(ToneSet({{3.0 / p, 1.0}}), pat, 8, 0.0, 1);
  const auto s = welch(snaps, WelchOptions{});
  EXPECT_EQ(s.size(), std::size_t(p));
  for (std::size_t b = 0; b < s.size(); ++b) {
    if (b == s.bin_of(3.0 / p)) EXPECT_GT(s[b], 0.0);
    else EXPECT_NEAR(s[b], 0.0, 1e-12);
  }
}

TEST(Welch, WhiteNoiseFlatMeanSigma2) {
  const int p = 16;
  const auto snaps = generate_snapshots(ToneSet(), standard_pattern(p), 1000, 2.5, 8);
  const auto s = welch(snaps, WelchOptions{});
  double mean = 0;
  for (double v : s.powers()) {
    mean += v;
    EXPECT_NEAR(v, 2.5, 0.5);
  }
  EXPECT_NEAR(mean / p, 2.5, 0.1);
}

TEST(Welch, SegmentsAndWindows) {
  const int p = 32;
  const auto snaps = generate_snapshots(ToneSet(), standard_pattern(p), 500, 1.0, 8);
  WelchOptions o;
  o.segment_length = 8;
  o.overlap = 0.5;
  o.window = WindowKind::hann;
  const auto s = welch(snaps.data(), o);
  EXPECT_EQ(s.size(), 8u);
  for (double v : s.powers()) EXPECT_NEAR(v, 1.0, 0.1);
  o.segment_length = 33;
  EXPECT_THROW(welch(snaps.data(), o), Error);
}

TEST(Welch, OffGridErrorPersists) {
  const auto snaps = generate_snapshots(ToneSet({{0.2, 1.0}}), standard_pattern(8), 200, 0.0, 3);
  const auto s = welch(snaps, WelchOptions{});
  const double err = s.peak_frequency() - 0.2;
  EXPECT_GE(err * err, 0.05 * 0.05 - 1e-15);
}

TEST(Welch, RejectsSparseWithoutZeroFill) {
  const auto snaps = generate_snapshots(ToneSet({{0.2, 1.0}}), build_nested(3, 2), 4, 0.1, 3);
  try {
    welch(snaps, WelchOptions{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::precondition);
    EXPECT_NE(std::string(e.what()).find("uniform"), std::string::npos);
  }
  const auto s = welch(snaps, WelchOptions{}, true);
  EXPECT_EQ(s.size(), 8u);
}

TEST(Welch, ZeroFillScaling) {
  // Noise-only zero-filled data keeps the mean level sigma^2.
  const auto pat = build_nested(3, 5);
  const auto snaps = generate_snapshots(ToneSet(), pat, 4000, 1.0, 5);
  const auto s = welch(snaps, WelchOptions{}, true);
  double mean = 0;
  for (double v : s.powers()) mean += v;
  EXPECT_NEAR(mean / static_cast<double>(s.size()), 1.0, 0.05);
  const auto filled = zero_filled(snaps);
  EXPECT_EQ(filled.cols(), pat.window_size());
  EXPECT_EQ(filled(0, 4), Complex(0, 0));
}

TEST(ToDb, FloorAndPeak) {
  const auto db = to_db(std::vector<double>{1.0, 0.1, 1e-9, 0.0});
  EXPECT_DOUBLE_EQ(db[0], 0.0);
  EXPECT_NEAR(db[1], -10.0, 1e-12);
  EXPECT_DOUBLE_EQ(db[2], -60.0);
  EXPECT_DOUBLE_EQ(db[3], -60.0);
}
