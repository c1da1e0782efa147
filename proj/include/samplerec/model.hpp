// Model classes: sets of coefficient sequences over a fixed orthonormal
// system, constrained either by a tail-energy envelope eps(m) ~ c m^-alpha
// log^beta(m) or by per-index magnitude bounds. Supplies the approximation
// numbers a_n, extremal members, and random members for concentration tests.
#pragma once

#include <vector>

#include "samplerec/basis.hpp"
#include "samplerec/rng.hpp"
#include "samplerec/types.hpp"

namespace samplerec {

enum class DecayRule {
  /// sum_{k>m} |c_k|^2 <= eps(m)^2 for all m >= 1, and ||c|| <= eps(0).
  tail_sum,
  /// |c_i| <= bound_i for every index.
  per_index,
};

struct DecayEnvelope {
  double c = 1.0;      // leading constant
  double alpha = 1.0;  // polynomial rate, > 0
  double beta = 0.0;   // log exponent

  /// Raw c * m^-alpha * log^beta(m+1); eval(0) = c (the global norm cap).
  double eval(Index m) const;
  /// Monotone non-increasing hull min_{1<=j<=max(m,1)} eval(j); the tail
  /// constraint is only meaningful for a non-increasing envelope.
  double monotone_eval(Index m) const;
};

class ModelClass {
 public:
  /// Tail-sum class over `system` truncated at dimension `dim`.
  static ModelClass tail_sum_class(const OrthonormalSystem& system, Index dim,
                                   DecayEnvelope envelope);

  /// Per-index class with |c_i| <= bounds[i-1]; dim = bounds.size().
  static ModelClass per_index_class(const OrthonormalSystem& system, RealVector bounds);

  DecayRule rule() const { return rule_; }
  Index dim() const { return dim_; }
  const OrthonormalSystem& system() const { return *system_; }
  const DecayEnvelope& envelope() const { return envelope_; }
  const RealVector& bounds() const { return bounds_; }

  /// True iff the coefficient vector satisfies every class constraint up to
  /// a relative slack of 1e-12.
  bool contains(const ComplexVector& coeffs) const;

  /// Worst-case truncation error sup_{f in class} ||f - P_n f||. For
  /// tail_sum this is the monotone envelope at n; for per_index it is the
  /// l2 norm of the dropped bounds.
  double approximation_number(Index n) const;

  /// Deterministic extremal members: single spikes saturating the envelope
  /// at dyadic indices and members spreading one tail budget uniformly over
  /// a dyadic block (tail_sum), or the all-at-bound member with sign
  /// patterns (per_index).
  std::vector<ComplexVector> extremal_members() const;

  /// Random member: i.i.d. unit-disk coefficients scaled into the class by
  /// one backward envelope pass (tail_sum) or per-index radii (per_index).
  ComplexVector random_member(Rng& rng) const;

 private:
  ModelClass() = default;

  DecayRule rule_ = DecayRule::tail_sum;
  Index dim_ = 0;
  std::shared_ptr<const OrthonormalSystem> system_;
  DecayEnvelope envelope_;
  RealVector bounds_;  // per_index only
};

}  // namespace samplerec
