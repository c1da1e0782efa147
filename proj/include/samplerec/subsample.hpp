// Frame subsampling: reduce m ~ n log n design rows to O(n) rows while
// keeping two-sided frame bounds, via the deterministic barrier-potential
// greedy of Batson-Spielman-Srivastava. A constructive stand-in for the
// non-constructive Kadison-Singer selection.
#pragma once

#include <vector>

#include "samplerec/estimator.hpp"
#include "samplerec/types.hpp"

namespace samplerec {

/// m frame vectors u_i in C^n (rows of `vectors`), expected to satisfy the
/// hypothesis eigenvalues(sum u_i u_i*) in [1/2, 3/2] and ||u_i||^2 <= cap.
struct FrameInput {
  ComplexMatrix vectors;  // m x n, row i = u_i*
  double norm_cap = 0.0;  // 2n/m

  Index count() const { return vectors.rows(); }
  Index dim() const { return vectors.cols(); }

  /// Indices of rows with ||u_i||^2 > norm_cap (flagged, not fatal).
  std::vector<Index> overweight_rows() const;
  /// Eigenvalue range of sum u_i u_i*.
  std::pair<double, double> frame_bounds() const;
};

/// Builds the frame u_i = m^{-1/2} (row i of G) from a design.
FrameInput frame_from_design(const WeightedDesign& design);

struct SubsampleResult {
  std::vector<Index> indices;  // selected J, ascending
  RealVector scale_weights;    // s_i > 0, one per selected index
  double lower_bound = 0.0;    // achieved c2: lambda_min(sum_J s u u*) / (n/m)
  double upper_bound = 0.0;    // achieved c3: lambda_max(...) / (n/m)
  bool stalled = false;        // greedy found no feasible vector; partial result
  Index steps_taken = 0;
};

struct SparsifyOptions {
  /// Throw if the input frame bounds leave [hypothesis_lo, hypothesis_hi].
  double hypothesis_lo = 0.5;
  double hypothesis_hi = 1.5;
};

/// Selects at most ceil(target_ratio * n) rows with positive scale weights
/// such that sum_J s_i u_i u_i* has eigenvalues in
/// [lower_bound * n/m, upper_bound * n/m]. When m is already within the
/// budget, returns the identity selection. A barrier stall is reported in
/// the result, not thrown.
SubsampleResult sparsify(const FrameInput& input, double target_ratio,
                         SparsifyOptions options = {});

/// Restricts a design to the selected rows and folds the scale weights in:
/// new rows are sqrt(s_i) times the old, new weights are rho(x_i)/s_i.
WeightedDesign fold_subsample(const WeightedDesign& design, const SubsampleResult& result);

}  // namespace samplerec
