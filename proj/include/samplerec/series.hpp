// Certified evaluation of the power/log tail sums appearing in the sampling
// density normalizer and the hat-class closed forms.
#pragma once

#include "samplerec/types.hpp"

namespace samplerec {

/// Value plus a rigorous bound on the absolute truncation error.
struct CertifiedSum {
  double value = 0.0;
  double error_bound = 0.0;
};

/// Sum_{k>n} k^{-p} for p > 1. Explicit summation up to `terms` past n, then
/// an Euler-Maclaurin tail with the first omitted term as error bound.
CertifiedSum power_tail_sum(double p, Index n, Index terms = 10000);

/// Riemann zeta at real p > 1 via power_tail_sum.
double zeta_real(double p);

/// Upper bound on Sum_{k>n} k^{-1} log(k)^q for q < -1 (integral comparison;
/// the summand is decreasing on k >= 2).
double log_tail_upper_bound(double q, Index n);

}  // namespace samplerec
