#include "samplerec/series.hpp"

#include <cmath>
#include <stdexcept>

namespace samplerec {

CertifiedSum power_tail_sum(double p, Index n, Index terms) {
  if (p <= 1.0) throw std::invalid_argument("power_tail_sum: exponent must be > 1");
  if (n < 0) throw std::invalid_argument("power_tail_sum: n must be >= 0");

  const Index m = n + std::max<Index>(terms, 16);
  double head = 0.0;
  // Backwards for a slightly better rounding profile on long sums.
  for (Index k = m; k > n; --k) head += std::pow(static_cast<double>(k), -p);

  // Euler-Maclaurin tail at M = m:
  //   sum_{k>M} k^-p = M^{1-p}/(p-1) - M^-p/2 + p M^{-p-1}/12
  //                    - p(p+1)(p+2) M^{-p-3}/720 + ...
  const double M = static_cast<double>(m);
  const double integral = std::pow(M, 1.0 - p) / (p - 1.0);
  const double t0 = -0.5 * std::pow(M, -p);
  const double t1 = p * std::pow(M, -p - 1.0) / 12.0;
  const double t2 = -p * (p + 1.0) * (p + 2.0) * std::pow(M, -p - 3.0) / 720.0;
  const double next = p * (p + 1.0) * (p + 2.0) * (p + 3.0) * (p + 4.0) *
                      std::pow(M, -p - 5.0) / 30240.0;

  CertifiedSum out;
  out.value = head + integral + t0 + t1 + t2;
  out.error_bound = 2.0 * std::abs(next);
  return out;
}

double zeta_real(double p) {
  const CertifiedSum tail = power_tail_sum(p, 0);
  return tail.value;
}

double log_tail_upper_bound(double q, Index n) {
  if (q >= -1.0) throw std::invalid_argument("log_tail_upper_bound: needs q < -1");
  const double ln = std::log(static_cast<double>(std::max<Index>(n, 2)));
  return std::pow(ln, q + 1.0) / (-(q + 1.0));
}

}  // namespace samplerec
