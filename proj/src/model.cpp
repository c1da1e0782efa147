#include "samplerec/model.hpp"

#include <cmath>
#include <stdexcept>

namespace samplerec {

double DecayEnvelope::eval(Index m) const {
  if (m <= 0) return c;
  const double md = static_cast<double>(m);
  return c * std::pow(md, -alpha) * std::pow(std::log(md + 1.0), beta);
}

double DecayEnvelope::monotone_eval(Index m) const {
  const Index top = std::max<Index>(m, 1);
  double best = eval(1);
  if (beta <= 0.0 || top == 1) {
    // eval is non-increasing for beta <= 0, so the hull is eval itself.
    return (top == 1) ? best : eval(top);
  }
  // For beta > 0 the raw envelope can rise near small m; take the running
  // minimum. Model dimensions are modest, so the direct scan is fine.
  for (Index j = 2; j <= top; ++j) best = std::min(best, eval(j));
  return best;
}

ModelClass ModelClass::tail_sum_class(const OrthonormalSystem& system, Index dim,
                                      DecayEnvelope envelope) {
  if (dim < 1 || dim > system.max_index())
    throw std::invalid_argument("tail_sum_class: dim must be in [1, system dim]");
  if (envelope.alpha <= 0.5)
    throw std::invalid_argument("tail_sum_class: decay alpha must exceed 1/2");
  if (envelope.c <= 0.0) throw std::invalid_argument("tail_sum_class: decay c must be > 0");
  ModelClass m;
  m.rule_ = DecayRule::tail_sum;
  m.dim_ = dim;
  m.system_ = std::make_shared<OrthonormalSystem>(system);
  m.envelope_ = envelope;
  return m;
}

ModelClass ModelClass::per_index_class(const OrthonormalSystem& system, RealVector bounds) {
  if (bounds.size() < 1 || bounds.size() > system.max_index())
    throw std::invalid_argument("per_index_class: bounds size must be in [1, system dim]");
  if ((bounds.array() < 0.0).any())
    throw std::invalid_argument("per_index_class: bounds must be nonnegative");
  ModelClass m;
  m.rule_ = DecayRule::per_index;
  m.dim_ = bounds.size();
  m.system_ = std::make_shared<OrthonormalSystem>(system);
  m.bounds_ = std::move(bounds);
  return m;
}

bool ModelClass::contains(const ComplexVector& coeffs) const {
  if (coeffs.size() > dim_) return false;
  constexpr double kSlack = 1.0 + 1e-12;
  if (rule_ == DecayRule::per_index) {
    for (Index i = 0; i < coeffs.size(); ++i)
      if (std::abs(coeffs[i]) > bounds_[i] * kSlack + 1e-300) return false;
    return true;
  }
  // tail_sum: check every suffix against the monotone envelope.
  double tail_sq = 0.0;
  for (Index m = coeffs.size(); m-- > 0;) {
    tail_sq += std::norm(coeffs[m]);
    const double cap = envelope_.monotone_eval(m) * kSlack;
    if (tail_sq > cap * cap + 1e-300) return false;
  }
  return true;
}

double ModelClass::approximation_number(Index n) const {
  if (n < 0) throw std::invalid_argument("approximation_number: n must be >= 0");
  if (rule_ == DecayRule::tail_sum) return envelope_.monotone_eval(n);
  if (n >= dim_) return 0.0;
  return std::sqrt(bounds_.tail(dim_ - n).squaredNorm());
}

std::vector<ComplexVector> ModelClass::extremal_members() const {
  std::vector<ComplexVector> out;

  if (rule_ == DecayRule::per_index) {
    // All coefficients at their bound, constant and alternating phases.
    ComplexVector all(dim_);
    ComplexVector alt(dim_);
    for (Index i = 0; i < dim_; ++i) {
      all[i] = bounds_[i];
      alt[i] = (i % 2 == 0) ? Complex(bounds_[i], 0.0) : Complex(-bounds_[i], 0.0);
    }
    out.push_back(all);
    out.push_back(alt);
    for (Index k = 1; k <= dim_; k *= 2) {
      ComplexVector spike = ComplexVector::Zero(dim_);
      spike[k - 1] = bounds_[k - 1];
      out.push_back(std::move(spike));
    }
    return out;
  }

  // tail_sum: dyadic spikes saturating the envelope.
  for (Index k = 1; k <= dim_; k *= 2) {
    ComplexVector spike = ComplexVector::Zero(dim_);
    spike[k - 1] = envelope_.monotone_eval(k);
    out.push_back(std::move(spike));
  }
  // Uniform members over dyadic blocks (b, 2b]; spending the envelope value
  // at the block end keeps every suffix constraint inside the block valid.
  for (Index b = 1; b < dim_; b *= 2) {
    const Index end = std::min<Index>(2 * b, dim_);
    const Index width = end - b;
    const double mass = envelope_.monotone_eval(end);
    ComplexVector block = ComplexVector::Zero(dim_);
    for (Index k = b + 1; k <= end; ++k)
      block[k - 1] = mass / std::sqrt(static_cast<double>(width));
    out.push_back(std::move(block));
  }
  // The telescoping member saturating every suffix constraint at once.
  ComplexVector tele(dim_);
  for (Index k = 1; k <= dim_; ++k) {
    const double hi = envelope_.monotone_eval(k - 1);
    const double lo = (k < dim_) ? envelope_.monotone_eval(k) : 0.0;
    tele[k - 1] = std::sqrt(std::max(hi * hi - lo * lo, 0.0));
  }
  out.push_back(std::move(tele));
  return out;
}

ComplexVector ModelClass::random_member(Rng& rng) const {
  ComplexVector c(dim_);
  if (rule_ == DecayRule::per_index) {
    for (Index i = 0; i < dim_; ++i) c[i] = rng.unit_disk() * bounds_[i];
    return c;
  }
  // Draw with the telescoping profile, then rescale once so the worst
  // suffix exactly meets its envelope bound.
  for (Index k = 1; k <= dim_; ++k) {
    const double hi = envelope_.monotone_eval(k - 1);
    const double lo = (k < dim_) ? envelope_.monotone_eval(k) : 0.0;
    c[k - 1] = rng.unit_disk() * std::sqrt(std::max(hi * hi - lo * lo, 0.0));
  }
  double tail_sq = 0.0;
  double worst = 0.0;
  for (Index m = dim_; m-- > 0;) {
    tail_sq += std::norm(c[m]);
    const double cap = envelope_.monotone_eval(m);
    if (cap > 0.0) worst = std::max(worst, tail_sq / (cap * cap));
  }
  if (worst > 0.0) c /= std::sqrt(worst);
  return c;
}

}  // namespace samplerec
