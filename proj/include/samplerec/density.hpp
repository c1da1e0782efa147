// The two-part sampling density: an equal mix of the normalized spectral
// head sum_{k<=n} |b_k|^2 / n and a weighted spectral tail over indices
// n < k <= K with power or log weights, normalized by Z_n. Includes the
// grid-based inverse-CDF sampler used to draw design points.
#pragma once

#include <memory>
#include <vector>

#include "samplerec/basis.hpp"
#include "samplerec/rng.hpp"
#include "samplerec/types.hpp"

namespace samplerec {

enum class TailWeightKind {
  power,      // w_k = k^-2delta, delta > 1/2
  log_power,  // w_k = k^-1 log^{2(beta-delta_prime)} k, delta_prime > beta + 1/2
};

struct TailWeightSpec {
  TailWeightKind kind = TailWeightKind::power;
  double delta = 1.0;        // power: exponent parameter
  double beta = 0.0;         // log_power: class log exponent
  double delta_prime = 1.0;  // log_power: must exceed beta + 1/2

  double weight(Index k) const;
  void validate() const;
};

struct SamplingDensityOptions {
  /// Tail truncation K as a multiple of n; K = tail_factor * n.
  Index tail_factor = 64;
  /// Construction fails if the dropped tail mass estimate exceeds this.
  double dropped_tail_tolerance = 1e-3;
  /// Grid size for the inverse-CDF table; 0 means the space's node count.
  Index sampler_grid = 0;
};

class SamplingDensity {
 public:
  /// Builds rho(x) = 1/2 [ head_n(x)/n + tail weights / Z_n ] for the given
  /// system, head size n >= 1, and tail weights. The system must extend to
  /// K = tail_factor * n indices. Throws if the *dropped* weight mass beyond
  /// K, bounded by a certified series tail, exceeds the tolerance relative
  /// to the kept Z_n.
  SamplingDensity(const OrthonormalSystem& system, Index n, TailWeightSpec weights,
                  SamplingDensityOptions options = {});

  Index head_size() const { return n_; }
  Index tail_cutoff() const { return cutoff_; }
  /// Z_n = sum_{n < k <= K} w_k (the kept, truncated normalizer).
  double normalizer() const { return normalizer_; }
  /// Certified upper bound on sum_{k > K} w_k relative to Z_n.
  double dropped_tail_bound() const { return dropped_tail_; }
  const OrthonormalSystem& system() const { return *system_; }
  const TailWeightSpec& weights() const { return weights_; }

  /// rho(x); strictly positive on the support of the head system.
  double evaluate(double x) const;

  /// Integral of rho over the space under the descriptor quadrature;
  /// should be ~1 wherever the grid resolves the system.
  double quadrature_mass() const;

  /// One draw via grid inverse-CDF with linear interpolation inside cells.
  /// Draws that interpolate onto a zero-density point (possible only in
  /// cells straddling a support edge) are rejected and redrawn.
  double sample(Rng& rng) const;
  /// m i.i.d. draws.
  RealVector sample(Rng& rng, Index m) const;

 private:
  std::shared_ptr<const OrthonormalSystem> system_;
  Index n_ = 0;
  Index cutoff_ = 0;  // K
  TailWeightSpec weights_;
  SamplingDensityOptions options_;
  RealVector tail_weights_;  // w_{n+1..K}
  double normalizer_ = 0.0;  // Z_n
  double dropped_tail_ = 0.0;

  // Inverse-CDF table on the sampler grid: cdf_[i] = integral of rho over
  // the first i cells (cdf_[0] = 0), normalized to end at 1.
  RealVector cdf_;
  double cell_width_ = 0.0;
};

}  // namespace samplerec
