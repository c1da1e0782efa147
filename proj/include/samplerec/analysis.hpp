// Closed-form oracles for the hat-function example, worst-case error search
// over generated members, Monte-Carlo concentration trials for the singular
// value and tail-supremum events, and convergence-rate fitting.
#pragma once

#include <vector>

#include "samplerec/estimator.hpp"
#include "samplerec/model.hpp"
#include "samplerec/series.hpp"
#include "samplerec/types.hpp"

namespace samplerec {

/// The hat class: intervals of length l_i = i^-alpha_len / zeta(alpha_len)
/// carrying hats of height h_i = i^-beta_h.
struct HatClassSpec {
  double alpha_len = 3.0;  // > 1
  double beta_h = 1.0;     // > 0
  Index truncation = 100000;

  void validate() const;
  /// l_i (normalized by the full zeta series, not the truncated one).
  double length(Index i) const;
  double height(Index i) const { return std::pow(double(i), -beta_h); }
};

/// sqrt((1/3) sum_{i>n} h_i^2 l_i) with certified remainder < 1e-12.
double hat_sampling_number(const HatClassSpec& spec, Index n);

/// Uniform-norm Kolmogorov width d_n = h_{n+1} = (n+1)^-beta_h.
double hat_kolmogorov_width(const HatClassSpec& spec, Index n);

/// Hat system + per-index model class realizing the spec with `dim` hats.
OrthonormalSystem hat_system(const HatClassSpec& spec, Index dim,
                             Index quadrature_nodes = 4096);
ModelClass hat_model(const HatClassSpec& spec, const OrthonormalSystem& system);

/// Maximum recovery residual over the given members; a lower bound on the
/// true worst-case error of the design's estimator.
double worst_case_error(const WeightedDesign& design,
                        const std::vector<ComplexVector>& members);

/// Extremal members plus `random_count` seeded random members.
std::vector<ComplexVector> member_family(const ModelClass& model, Index random_count,
                                         Rng& rng);

struct WilsonInterval {
  double lower = 0.0;
  double upper = 1.0;
};

/// Wilson score interval for a binomial proportion at confidence z.
WilsonInterval wilson_interval(Index successes, Index trials, double z = 1.959963984540054);

struct ConcentrationConfig {
  Index n = 8;
  double c1 = 0.0;  // m = ceil(c1 * n * log(n+1)); must be > 0
  double c2 = 64.0; // threshold constant of the tail-supremum event
  TailWeightSpec weights;
  SamplingDensityOptions density;
  DecayEnvelope envelope;  // tail_sum model for the supremum event
  Index random_members = 8;
  /// Also record || sum X X* - m I || / m and its exceedances of t = 1/2.
  bool track_operator_deviation = true;
};

struct ConcentrationReport {
  Index n = 0;
  Index m = 0;
  Index trials = 0;
  Index fact1_failures = 0;     // s_min(G)^2 < m/2
  Index fact2_failures = 0;     // S > c2 * eps_n^2 * n * log(n+1)
  Index deviation_exceed = 0;   // ||sum XX* - mI|| >= m/2
  double fact1_threshold = 0.0; // 4/n^2
  double fact2_threshold = 0.0; // 1/n^2
  double oliveira_bound = 0.0;  // 4 m^2 exp(-m s_t / (16 R^2)) at t = 1/2
  std::vector<double> s_min_sq;
  std::vector<double> tail_sup_sq;
  std::vector<double> deviation; // ||sum XX* - mI|| / m per trial

  double fact1_frequency() const { return trials ? double(fact1_failures) / double(trials) : 0.0; }
  double fact2_frequency() const { return trials ? double(fact2_failures) / double(trials) : 0.0; }
  double deviation_frequency() const { return trials ? double(deviation_exceed) / double(trials) : 0.0; }
};

/// Runs independent trials of the random design on the Fourier system (the
/// density is exactly uniform there), recording the Fact-1/Fact-2 events and
/// the operator-norm deviation against the Oliveira tail bound. Per-trial
/// RNG streams derive deterministically from (seed, trial).
ConcentrationReport concentration_trials(const ConcentrationConfig& config, Index trials,
                                         std::uint64_t seed);

/// Oliveira tail bound 4 m^2 exp(-m s_t / (16 R^2)), s_t = t^2 for t <= 2
/// and 4(t-1) beyond.
double oliveira_bound(Index m, double t, double r_sq);

struct RateFit {
  double slope = 0.0;         // a
  double log_exponent = 0.0;  // b
  double intercept = 0.0;     // c0
};

/// Least-squares fit of log e = a log n + b log log(n+1) + c0 over pairs
/// (n, e_n). Requires >= 4 pairs, strictly increasing n, positive e.
RateFit fit_rate(const std::vector<std::pair<double, double>>& pairs);

}  // namespace samplerec
