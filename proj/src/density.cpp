#include "samplerec/density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "samplerec/series.hpp"

namespace samplerec {

double TailWeightSpec::weight(Index k) const {
  if (k < 2) throw std::invalid_argument("TailWeightSpec: weights are used for k >= 2");
  const double kd = static_cast<double>(k);
  if (kind == TailWeightKind::power) return std::pow(kd, -2.0 * delta);
  return std::pow(std::log(kd), 2.0 * (beta - delta_prime)) / kd;
}

void TailWeightSpec::validate() const {
  if (kind == TailWeightKind::power) {
    if (delta <= 0.5)
      throw std::invalid_argument("TailWeightSpec: power weights need delta > 1/2 (series not summable)");
    return;
  }
  // Summability of k^-1 log^{2(beta-delta_prime)} k needs the log exponent
  // below -1; we require delta_prime > beta + 1/2.
  if (delta_prime <= beta + 0.5)
    throw std::invalid_argument("TailWeightSpec: log weights need delta_prime > beta + 1/2");
}

SamplingDensity::SamplingDensity(const OrthonormalSystem& system, Index n,
                                 TailWeightSpec weights, SamplingDensityOptions options)
    : system_(std::make_shared<OrthonormalSystem>(system)),
      n_(n),
      weights_(weights),
      options_(options) {
  if (n_ < 1) throw std::invalid_argument("SamplingDensity: head size must be >= 1");
  if (options_.tail_factor < 2)
    throw std::invalid_argument("SamplingDensity: tail_factor must be >= 2");
  weights_.validate();

  cutoff_ = options_.tail_factor * n_;
  if (cutoff_ > system.max_index())
    throw std::invalid_argument("SamplingDensity: system must extend to tail_factor * n indices");

  tail_weights_.resize(cutoff_ - n_);
  for (Index k = n_ + 1; k <= cutoff_; ++k) tail_weights_[k - n_ - 1] = weights_.weight(k);
  normalizer_ = tail_weights_.sum();
  if (!(normalizer_ > 0.0)) throw std::invalid_argument("SamplingDensity: normalizer must be positive");

  // Certified bound on the dropped mass sum_{k > K} w_k, relative to Z_n.
  double dropped = 0.0;
  if (weights_.kind == TailWeightKind::power) {
    const CertifiedSum tail = power_tail_sum(2.0 * weights_.delta, cutoff_);
    dropped = tail.value + tail.error_bound;
  } else {
    dropped = log_tail_upper_bound(2.0 * (weights_.beta - weights_.delta_prime), cutoff_);
  }
  dropped_tail_ = dropped / normalizer_;
  if (dropped_tail_ > options_.dropped_tail_tolerance)
    throw std::runtime_error(
        "SamplingDensity: dropped tail mass beyond K exceeds the configured tolerance; "
        "raise tail_factor or dropped_tail_tolerance");

  // Inverse-CDF table over uniform cells.
  const Index cells =
      options_.sampler_grid > 0 ? options_.sampler_grid : system_->space().quadrature_nodes;
  if (cells < 2) throw std::invalid_argument("SamplingDensity: sampler grid too small");
  cell_width_ = 1.0 / static_cast<double>(cells);
  cdf_.resize(cells + 1);
  cdf_[0] = 0.0;
  for (Index i = 0; i < cells; ++i) {
    const double mid = (static_cast<double>(i) + 0.5) * cell_width_;
    const double rho = evaluate(mid);
    if (!(rho >= 0.0)) throw std::runtime_error("SamplingDensity: negative density value");
    cdf_[i + 1] = cdf_[i] + rho * cell_width_;
  }
  const double total = cdf_[cells];
  if (!(total > 0.0))
    throw std::runtime_error("SamplingDensity: density numerically zero on the whole domain");
  cdf_ /= total;
  cdf_[cells] = 1.0;
}

double SamplingDensity::evaluate(double x) const {
  const double head = system_->head_square_sum(n_, x) / static_cast<double>(n_);
  const double tail = system_->weighted_square_sum(tail_weights_, n_ + 1, x) / normalizer_;
  return 0.5 * (head + tail);
}

double SamplingDensity::quadrature_mass() const {
  return integrate(system_->space(), [this](double x) { return evaluate(x); });
}

double SamplingDensity::sample(Rng& rng) const {
  // Cells straddling a support boundary can interpolate to a point of zero
  // density (a sampler-grid artifact of measure ~cell width); reject those
  // rare draws so downstream weighting 1/rho(x) is always defined.
  for (int attempt = 0; attempt < 64; ++attempt) {
    const double u = rng.uniform();
    const double* begin = cdf_.data();
    const double* end = begin + cdf_.size();
    // First cell whose right CDF value exceeds u; flat (zero-mass) cells are
    // skipped because upper_bound lands past all entries equal to u.
    const double* it = std::upper_bound(begin, end, u);
    Index i = static_cast<Index>(it - begin);
    if (i <= 0) i = 1;
    if (i >= cdf_.size()) i = cdf_.size() - 1;
    const double lo = cdf_[i - 1];
    const double hi = cdf_[i];
    const double frac = (hi > lo) ? (u - lo) / (hi - lo) : 0.5;
    const double x = (static_cast<double>(i - 1) + frac) * cell_width_;
    if (evaluate(x) > 0.0) return x;
  }
  throw std::runtime_error("sample: support not resolved by the sampler grid");
}

RealVector SamplingDensity::sample(Rng& rng, Index m) const {
  if (m < 1) throw std::invalid_argument("sample: point count must be >= 1");
  RealVector out(m);
  for (Index i = 0; i < m; ++i) out[i] = sample(rng);
  return out;
}

}  // namespace samplerec
