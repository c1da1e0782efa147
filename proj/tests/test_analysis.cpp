#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <utility>
#include <vector>

#include "oracles.hpp"
#include "samplerec/analysis.hpp"
#include "samplerec/series.hpp"

using namespace samplerec;

TEST_CASE("hat sampling numbers match the independent Kahan-summed oracle") {
  HatClassSpec spec;  // alpha_len = 3, beta_h = 1
  // Frozen values, summed independently term by term with an integral
  // remainder bracket (see oracles.hpp).
  const std::pair<Index, double> frozen[] = {
      {1, 0.1011936621148192},    {2, 0.039679408444336609},
      {4, 0.012747152492221771},  {8, 0.0036235290234004286},
      {16, 0.000965642265621127}, {32, 0.000249177573960801},
      {64, 0.0000632825464083850},
  };
  for (const auto& [n, value] : frozen) {
    CHECK(hat_sampling_number(spec, n) == doctest::Approx(value).epsilon(1e-12));
    CHECK(hat_sampling_number(spec, n) ==
          doctest::Approx(oracle::hat_e(3.0, 1.0, n)).epsilon(1e-11));
  }
  // e_0 is the full class radius sqrt(zeta(5) / (3 zeta(3))).
  CHECK(hat_sampling_number(spec, 0) ==
        doctest::Approx(std::sqrt(oracle::zeta(5.0) / (3.0 * oracle::zeta(3.0))))
            .epsilon(1e-12));

  HatClassSpec other;
  other.alpha_len = 1.5;
  other.beta_h = 0.75;
  CHECK(hat_sampling_number(other, 6) ==
        doctest::Approx(oracle::hat_e(1.5, 0.75, 6)).epsilon(1e-11));

  HatClassSpec bad;
  bad.alpha_len = 1.0;  // lengths would not be summable
  CHECK_THROWS_AS(hat_sampling_number(bad, 1), std::invalid_argument);
}

TEST_CASE("Kolmogorov widths are the exact closed form") {
  HatClassSpec spec;
  CHECK(hat_kolmogorov_width(spec, 0) == 1.0);
  CHECK(hat_kolmogorov_width(spec, 4) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(hat_kolmogorov_width(spec, 99) == doctest::Approx(0.01).epsilon(1e-15));
  HatClassSpec half;
  half.beta_h = 0.5;
  CHECK(hat_kolmogorov_width(half, 3) ==
        doctest::Approx(0.5).epsilon(1e-15));  // 4^{-1/2}
}

TEST_CASE("hat system and model realize the spec's lengths and bounds") {
  HatClassSpec spec;
  const double z3 = 1.2020569031595943;  // zeta(3), summed independently
  CHECK(zeta_real(3.0) == doctest::Approx(z3).epsilon(1e-14));
  CHECK(zeta_real(3.0) == doctest::Approx(oracle::zeta(3.0)).epsilon(1e-13));

  const Index dim = 16;
  const OrthonormalSystem sys = hat_system(spec, dim, 8192);
  REQUIRE(sys.hat_lengths().size() == dim);
  double cursor = 0.0;
  for (Index i = 1; i <= dim; ++i) {
    const double l = std::pow(double(i), -3.0) / z3;
    CHECK(spec.length(i) == doctest::Approx(l).epsilon(1e-13));
    CHECK(sys.hat_lengths()[i - 1] == doctest::Approx(l).epsilon(1e-13));
    // Peak value of the L2-normalized hat over an interval of length l.
    const double peak = cursor + 0.5 * l;
    CHECK(std::abs(sys.evaluate(i, peak)) ==
          doctest::Approx(std::sqrt(3.0 / l)).epsilon(1e-12));
    cursor += l;
  }

  const ModelClass model = hat_model(spec, sys);
  // Per-index bounds h_i sqrt(l_i / 3): a_n^2 telescopes to the truncated
  // closed form sum_{n < i <= dim} i^{-5} / (3 zeta(3)).
  const double a4_sq = (oracle::power_tail(5.0, 4) - oracle::power_tail(5.0, dim)) /
                       (3.0 * oracle::zeta(3.0));
  CHECK(model.approximation_number(4) ==
        doctest::Approx(std::sqrt(a4_sq)).epsilon(1e-11));
}

TEST_CASE("sampling at the hat peaks reproduces the closed-form error") {
  HatClassSpec spec;
  const Index n = 4;
  const Index dim = 128;
  const OrthonormalSystem sys = hat_system(spec, dim, 16384);
  const ModelClass model = hat_model(spec, sys);

  TailWeightSpec w;
  w.delta = 1.75;
  SamplingDensityOptions opt;
  opt.tail_factor = 32;  // K = 128 = dim
  opt.dropped_tail_tolerance = 1e-3;
  const SamplingDensity density(sys, n, w, opt);

  RealVector peaks(n);
  double cursor = 0.0;
  for (Index i = 1; i <= n; ++i) {
    peaks[i - 1] = cursor + 0.5 * spec.length(i);
    cursor += spec.length(i);
  }
  const WeightedDesign design = assemble_design(density, peaks, n);
  REQUIRE(design.spectrum.full_rank);

  const double worst = worst_case_error(design, model.extremal_members());

  // Hats n+1.. vanish at the first n peaks, so recovery of the head is exact
  // and the worst member realizes the full tail norm of its bounds.
  double tail_sq = 0.0;
  for (Index i = dim; i > n; --i)
    tail_sq += spec.height(i) * spec.height(i) * spec.length(i) / 3.0;
  CHECK(worst == doctest::Approx(std::sqrt(tail_sq)).epsilon(1e-10));

  // And that truncated tail is within 1e-6 of the certified infinite sum.
  CHECK(std::abs(worst - hat_sampling_number(spec, n)) < 1e-6);
}

TEST_CASE("Wilson intervals match frozen values and bracket the estimate") {
  const WilsonInterval zero = wilson_interval(0, 400);
  CHECK(zero.lower >= 0.0);
  CHECK(zero.lower < 1e-15);
  CHECK(zero.upper == doctest::Approx(0.009512294334296508).epsilon(1e-12));

  const WilsonInterval few = wilson_interval(3, 400);
  CHECK(few.lower == doctest::Approx(0.0025538891952499396).epsilon(1e-12));
  CHECK(few.upper == doctest::Approx(0.021815720724032123).epsilon(1e-12));

  const WilsonInterval half = wilson_interval(50, 100);
  CHECK(half.lower == doctest::Approx(0.4038315303659956).epsilon(1e-12));
  CHECK(half.upper == doctest::Approx(0.5961684696340044).epsilon(1e-12));
  CHECK(half.lower + half.upper == doctest::Approx(1.0).epsilon(1e-14));

  for (Index t : {1, 7, 40, 400}) {
    for (Index s = 0; s <= t; s += std::max<Index>(1, t / 5)) {
      const WilsonInterval w = wilson_interval(s, t);
      const double p_hat = double(s) / double(t);
      CHECK(w.lower >= 0.0);
      CHECK(w.lower <= p_hat + 1e-15);
      CHECK(w.upper >= p_hat - 1e-15);
      CHECK(w.upper <= 1.0);
    }
  }

  CHECK_THROWS_AS(wilson_interval(0, 0), std::invalid_argument);
  CHECK_THROWS_AS(wilson_interval(-1, 10), std::invalid_argument);
  CHECK_THROWS_AS(wilson_interval(11, 10), std::invalid_argument);
}

TEST_CASE("the matrix-deviation tail bound has the two-regime shape") {
  // 4 m^2 exp(-m s_t / (16 R^2)); frozen values recomputed independently.
  CHECK(oliveira_bound(282, 0.5, 16.0) ==
        doctest::Approx(241522.49095723615).epsilon(1e-12));
  CHECK(oliveira_bound(10, 2.0, 1.0) ==
        doctest::Approx(32.83399944955952).epsilon(1e-12));  // s = t^2 = 4
  CHECK(oliveira_bound(10, 3.0, 1.0) ==
        doctest::Approx(2.6951787996341867).epsilon(1e-12));  // s = 4(t-1) = 8
  // The two branches agree at t = 2.
  CHECK(oliveira_bound(10, 2.0, 1.0) ==
        doctest::Approx(oliveira_bound(10, 2.0 + 1e-12, 1.0)).epsilon(1e-9));
  // Monotone decreasing in t, increasing in R^2.
  CHECK(oliveira_bound(50, 1.0, 4.0) > oliveira_bound(50, 1.5, 4.0));
  CHECK(oliveira_bound(50, 1.0, 4.0) < oliveira_bound(50, 1.0, 8.0));

  CHECK_THROWS_AS(oliveira_bound(0, 0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(oliveira_bound(10, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(oliveira_bound(10, 0.5, 0.0), std::invalid_argument);
}

TEST_CASE("rate fitting recovers a planted polynomial-log law exactly") {
  std::vector<std::pair<double, double>> pairs;
  for (double n : {2.0, 4.0, 8.0, 16.0, 32.0, 64.0})
    pairs.emplace_back(n, 3.0 * std::pow(n, -1.5) * std::sqrt(std::log(n + 1.0)));
  const RateFit fit = fit_rate(pairs);
  CHECK(fit.slope == doctest::Approx(-1.5).epsilon(1e-10));
  CHECK(fit.log_exponent == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-9));

  std::vector<std::pair<double, double>> short_list(pairs.begin(), pairs.begin() + 3);
  CHECK_THROWS_AS(fit_rate(short_list), std::invalid_argument);
  auto bad = pairs;
  bad[2].second = 0.0;
  CHECK_THROWS_AS(fit_rate(bad), std::invalid_argument);
  auto unsorted = pairs;
  std::swap(unsorted[1], unsorted[2]);
  CHECK_THROWS_AS(fit_rate(unsorted), std::invalid_argument);
}

TEST_CASE("concentration trials are deterministic and carry the thresholds") {
  ConcentrationConfig cc;
  cc.n = 8;
  cc.c1 = 4.0;
  cc.weights.delta = 1.0;
  cc.density.tail_factor = 16;
  cc.density.dropped_tail_tolerance = 0.5;

  const ConcentrationReport report = concentration_trials(cc, 20, 77);
  CHECK(report.n == 8);
  CHECK(report.m == 71);  // ceil(4 * 8 * log 9)
  CHECK(report.trials == 20);
  CHECK(report.fact1_threshold == doctest::Approx(4.0 / 64.0).epsilon(1e-15));
  CHECK(report.fact2_threshold == doctest::Approx(1.0 / 64.0).epsilon(1e-15));
  CHECK(report.oliveira_bound ==
        doctest::Approx(oliveira_bound(71, 0.5, 16.0)).epsilon(1e-15));
  REQUIRE(report.s_min_sq.size() == 20);
  REQUIRE(report.tail_sup_sq.size() == 20);
  REQUIRE(report.deviation.size() == 20);
  for (Index t = 0; t < 20; ++t) {
    CHECK(report.s_min_sq[std::size_t(t)] > 0.0);
    CHECK(report.s_min_sq[std::size_t(t)] <= 2.0 * double(report.m));
    CHECK(report.tail_sup_sq[std::size_t(t)] >= 0.0);
    CHECK(report.deviation[std::size_t(t)] >= 0.0);
  }
  CHECK(report.fact1_frequency() ==
        doctest::Approx(double(report.fact1_failures) / 20.0).epsilon(1e-15));

  const ConcentrationReport again = concentration_trials(cc, 20, 77);
  CHECK(again.s_min_sq == report.s_min_sq);
  CHECK(again.tail_sup_sq == report.tail_sup_sq);
  CHECK(again.deviation == report.deviation);

  const ConcentrationReport shifted = concentration_trials(cc, 20, 78);
  CHECK(shifted.s_min_sq[0] != report.s_min_sq[0]);

  ConcentrationConfig lean = cc;
  lean.track_operator_deviation = false;
  const ConcentrationReport quick = concentration_trials(lean, 5, 77);
  CHECK(quick.deviation.empty());
  // The first five trials use the same per-trial streams either way.
  for (std::size_t t = 0; t < 5; ++t)
    CHECK(quick.s_min_sq[t] == report.s_min_sq[t]);

  ConcentrationConfig bad = cc;
  bad.c1 = 0.0;
  CHECK_THROWS_AS(concentration_trials(bad, 5, 1), std::invalid_argument);
  CHECK_THROWS_AS(concentration_trials(cc, 0, 1), std::invalid_argument);
}
