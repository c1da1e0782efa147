// Orthonormal systems over a 1-D measure space: complex exponentials on the
// torus, L2-normalized hat functions on disjoint subintervals of [0,1], and
// tabulated systems given by orthonormal coefficient columns in a reference
// system. Also the span projection and the nested-basis construction that
// merges a doubling family of subspaces into one orthonormal sequence.
#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "samplerec/quadrature.hpp"
#include "samplerec/types.hpp"

namespace samplerec {

enum class BasisKind { fourier_torus, normalized_hat, custom_tabulated };

class OrthonormalSystem {
 public:
  /// Complex exponentials exp(2*pi*i*f*x) with frequency order 0,1,-1,2,-2,...
  static OrthonormalSystem fourier_torus(MeasureSpaceDescriptor space, Index max_index);

  /// Hats of height sqrt(3/l_i) on consecutive intervals I_i of length l_i,
  /// starting at 0. Lengths must be positive and sum to at most 1.
  static OrthonormalSystem normalized_hat(MeasureSpaceDescriptor space, RealVector lengths);

  /// System b_k = sum_j coeffs(j,k) r_j over an orthonormal reference; the
  /// columns of `coeffs` are expected to be orthonormal in l2.
  static OrthonormalSystem custom_tabulated(const OrthonormalSystem& reference,
                                            ComplexMatrix coeffs);

  BasisKind kind() const { return kind_; }
  const MeasureSpaceDescriptor& space() const { return space_; }
  Index max_index() const { return max_index_; }

  /// b_k(x) for 1 <= k <= max_index(). Throws on an out-of-range index or a
  /// point outside the domain.
  Complex evaluate(Index k, double x) const;

  /// Row chunk (b_k(x))_{k=first..first+count-1} as a vector.
  ComplexVector evaluate_block(double x, Index first, Index count) const;

  /// Sum_{k<=n} |b_k(x)|^2.
  double head_square_sum(Index n, double x) const;

  /// Sum_j w[j] |b_{first+j}(x)|^2. Used for the weighted density tail.
  double weighted_square_sum(const RealVector& w, Index first, double x) const;

  /// Max_{j,k <= window} |<b_j,b_k> - delta_jk| under the descriptor's
  /// quadrature. Diagnostic; meaningful where the grid resolves the system.
  double gram_defect(Index window) const;

  // Hat-specific accessors (throw for other kinds).
  const RealVector& hat_lengths() const;
  /// Interval index (1-based) containing x, or 0 if x lies past the last
  /// interval or exactly on a shared endpoint's right edge.
  Index hat_interval(double x) const;
  double hat_peak(Index k) const;

  // Tabulated-specific accessors.
  const ComplexMatrix& tabulation() const;
  const OrthonormalSystem& reference() const;

 private:
  OrthonormalSystem() = default;

  BasisKind kind_ = BasisKind::fourier_torus;
  MeasureSpaceDescriptor space_;
  Index max_index_ = 0;

  // normalized_hat
  RealVector lengths_;      // l_i
  RealVector breakpoints_;  // partial sums, size max_index_+1, breakpoints_[0]=0

  // custom_tabulated
  std::shared_ptr<const OrthonormalSystem> reference_;
  ComplexMatrix coeffs_;  // reference dim x max_index_
};

/// Fourier index -> signed frequency: 1 -> 0, 2k -> k, 2k+1 -> -k.
inline Index fourier_frequency(Index k) {
  return (k % 2 == 0) ? k / 2 : -(k - 1) / 2;
}

/// Truncation P_n in coefficient space: entries past n are zeroed, length is
/// preserved. Requires n <= coeffs.size().
ComplexVector project(const ComplexVector& coeffs, Index n);

/// l2 norm of the dropped tail, i.e. ||f - P_n f|| for a coefficient vector.
double projection_residual(const ComplexVector& coeffs, Index n);

struct NestedBasisResult {
  OrthonormalSystem system;
  /// stage_sizes[s] = number of output vectors kept after absorbing spans
  /// 0..s; the first stage_sizes[s] output vectors span the union.
  std::vector<Index> stage_sizes;
  /// (stage, column) pairs dropped as linearly dependent.
  std::vector<std::pair<Index, Index>> dropped;
};

/// Orthonormalizes the union of a doubling family of coefficient spans
/// (W_1, W_2, W_4, ...) over `reference` into a single nested system. Span s
/// must have 2^s columns; dependent columns are dropped and recorded.
NestedBasisResult build_nested_basis(const std::vector<ComplexMatrix>& spans,
                                     const OrthonormalSystem& reference);

}  // namespace samplerec
