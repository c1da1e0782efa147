// Weighted least-squares recovery from density-drawn samples: the design
// matrix G with rows rho(x_i)^{-1/2} (b_1(x_i), ..., b_n(x_i)), the weighted
// information map N, Moore-Penrose recovery of head coefficients, and the
// a-posteriori error certificate combining s_min(G) with a searched tail
// supremum over model members.
#pragma once

#include <memory>
#include <vector>

#include "samplerec/basis.hpp"
#include "samplerec/density.hpp"
#include "samplerec/model.hpp"
#include "samplerec/types.hpp"

namespace samplerec {

struct SpectralSummary {
  double s_min = 0.0;
  double s_max = 0.0;
  bool full_rank = false;  // s_min > 1e-10 * s_max
};

/// A sampled, weighted design: points x_i, effective weights rho(x_i)/s_i,
/// and the m x n matrix with rows sqrt(s_i) rho(x_i)^{-1/2} (b_k(x_i))_k.
/// Raw designs have all scales 1; fold_subsample produces scaled ones.
struct WeightedDesign {
  std::shared_ptr<const SamplingDensity> density;
  RealVector points;   // x_i, i < m
  RealVector weights;  // effective weights rho(x_i)/s_i
  RealVector scales;   // s_i
  ComplexMatrix g;     // m x n
  Index head = 0;      // n
  SpectralSummary spectrum;

  Index rows() const { return g.rows(); }
};

/// Assembles G over the first n basis functions and caches its singular
/// values. Requires m >= n and rho(x_i) > 0 at every point.
WeightedDesign assemble_design(const SamplingDensity& density, const RealVector& points,
                               Index n);

/// N f = (weights_i^{-1/2} f(x_i))_i for f given by coefficients over the
/// density's system (any length up to the system dimension).
ComplexVector apply_information(const WeightedDesign& design, const ComplexVector& coeffs);

/// N applied to several coefficient vectors at once (columns of the result),
/// evaluated in index chunks so the full m x K basis tabulation never
/// materializes. Column j corresponds to members[j].
ComplexMatrix bulk_information(const WeightedDesign& design,
                               const std::vector<ComplexVector>& members);

/// Singular-value summary of an arbitrary matrix.
SpectralSummary spectral_summary(const ComplexMatrix& g);

struct RecoveryResult {
  ComplexVector coefficients;  // G^+ samples, length n
  SpectralSummary spectrum;
  bool full_rank = false;
};

/// Moore-Penrose solve via SVD with relative singular-value cutoff 1e-10.
/// Rank deficiency is reported, not thrown.
RecoveryResult recover(const WeightedDesign& design, const ComplexVector& samples);

/// Pseudoinverse applied to many sample vectors at once (columns).
ComplexMatrix recover_columns(const WeightedDesign& design, const ComplexMatrix& samples);

/// ||f - A(f)|| in the coefficient metric: head mismatch plus the untouched
/// tail of `truth` past design.head.
double recovery_error(const ComplexVector& truth, const ComplexVector& recovered_head);

struct CertificateReport {
  double certificate = 0.0;   // sqrt(4 a^2 + tail_sup_sq / s_min^2)
  double a_quarter = 0.0;     // certified a_{ceil(n/4)} of the model
  double tail_sup_sq = 0.0;   // max over members of ||N (f - P_n f)||^2
};

/// Lemma-style certificate over an explicit member family (pass the same
/// family used for the worst-case error search so that the certificate
/// provably dominates it). Requires a full-rank design.
CertificateReport error_certificate(const WeightedDesign& design, const ModelClass& model,
                                    const std::vector<ComplexVector>& members);

}  // namespace samplerec
