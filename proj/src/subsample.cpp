#include "samplerec/subsample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

namespace samplerec {

namespace {

// Eigenvalues of sum_i s_i u_i u_i* for u_i = row i of `rows` (as a column
// vector via the adjoint); `scales` may be empty for unit weights.
std::pair<double, double> gram_eigen_range(const ComplexMatrix& rows,
                                           const RealVector& scales) {
  ComplexMatrix scaled = rows;
  if (scales.size() != 0)
    for (Index i = 0; i < scaled.rows(); ++i) scaled.row(i) *= std::sqrt(scales[i]);
  const ComplexMatrix gram = scaled.adjoint() * scaled;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(gram, Eigen::EigenvaluesOnly);
  const RealVector& ev = eig.eigenvalues();
  return {ev[0], ev[ev.size() - 1]};
}

}  // namespace

std::vector<Index> FrameInput::overweight_rows() const {
  std::vector<Index> out;
  for (Index i = 0; i < vectors.rows(); ++i)
    if (vectors.row(i).squaredNorm() > norm_cap * (1.0 + 1e-9)) out.push_back(i);
  return out;
}

std::pair<double, double> FrameInput::frame_bounds() const {
  return gram_eigen_range(vectors, RealVector());
}

FrameInput frame_from_design(const WeightedDesign& design) {
  FrameInput input;
  const double m = static_cast<double>(design.rows());
  input.vectors = design.g / std::sqrt(m);
  input.norm_cap = 2.0 * static_cast<double>(design.head) / m;
  return input;
}

SubsampleResult sparsify(const FrameInput& input, double target_ratio,
                         SparsifyOptions options) {
  const Index m = input.count();
  const Index n = input.dim();
  if (m < 1 || n < 1) throw std::invalid_argument("sparsify: empty frame");

  const auto [lo, hi] = input.frame_bounds();
  if (lo < options.hypothesis_lo * (1.0 - 1e-9) || hi > options.hypothesis_hi * (1.0 + 1e-9))
    throw std::invalid_argument(
        "sparsify: frame hypothesis violated (eigenvalues outside [1/2, 3/2])");

  const double ratio_scale = static_cast<double>(n) / static_cast<double>(m);
  const Index budget = static_cast<Index>(
      std::ceil(target_ratio * static_cast<double>(n) - 1e-12));

  SubsampleResult result;

  // Already within budget: keep everything with unit weights.
  if (m <= budget) {
    result.indices.resize(m);
    for (Index i = 0; i < m; ++i) result.indices[i] = i;
    result.scale_weights = RealVector::Ones(m);
    result.lower_bound = lo / ratio_scale;
    result.upper_bound = hi / ratio_scale;
    return result;
  }

  const double d = static_cast<double>(budget) / static_cast<double>(n);
  if (d <= 1.0 + 1e-9)
    throw std::invalid_argument("sparsify: target_ratio must leave a budget above n");
  const double rd = std::sqrt(d);

  // Barrier schedule of the Batson-Spielman-Srivastava greedy; after T =
  // budget steps the whitened selection has eigenvalues within a factor
  // ((rd+1)/(rd-1))^2.
  const double delta_u = (rd + 1.0) / (rd - 1.0);
  const double delta_l = 1.0;
  double upper = static_cast<double>(n) * (d + rd) / (rd - 1.0);
  double lower = -static_cast<double>(n) * rd;

  // Whiten so that sum_i v_i v_i* = I.
  ComplexMatrix full_gram = input.vectors.adjoint() * input.vectors;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> whiten(full_gram);
  const ComplexMatrix b_inv_half = whiten.eigenvectors() *
                                   whiten.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                                   whiten.eigenvectors().adjoint();
  const ComplexMatrix vw = input.vectors * b_inv_half;  // rows are v_i^*

  ComplexMatrix a = ComplexMatrix::Zero(n, n);
  RealVector accumulated = RealVector::Zero(m);

  for (Index step = 0; step < budget; ++step) {
    const double u_next = upper + delta_u;
    const double l_next = lower + delta_l;

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(a);
    const RealVector& ev = eig.eigenvalues();
    if (ev[ev.size() - 1] >= u_next || ev[0] <= l_next) {
      result.stalled = true;
      break;
    }

    // Potential drops from shifting the barriers.
    double drop_u = 0.0, drop_l = 0.0;
    for (Index j = 0; j < n; ++j) {
      drop_u += 1.0 / (upper - ev[j]) - 1.0 / (u_next - ev[j]);
      drop_l += 1.0 / (ev[j] - l_next) - 1.0 / (ev[j] - lower);
    }
    if (!(drop_u > 0.0) || !(drop_l > 0.0)) {
      result.stalled = true;
      break;
    }

    // Quadratic forms v^* (u'I-A)^{-p} v and v^* (A-l'I)^{-p} v for all
    // candidates at once through the eigenbasis.
    const ComplexMatrix proj = vw * eig.eigenvectors();  // row i = v_i^* Q
    const RealMatrix amp = proj.cwiseAbs2();
    RealVector inv_u(n), inv_u2(n), inv_l(n), inv_l2(n);
    for (Index j = 0; j < n; ++j) {
      const double du = u_next - ev[j];
      const double dl = ev[j] - l_next;
      inv_u[j] = 1.0 / du;
      inv_u2[j] = 1.0 / (du * du);
      inv_l[j] = 1.0 / dl;
      inv_l2[j] = 1.0 / (dl * dl);
    }
    const RealVector q_u = amp * inv_u;
    const RealVector q_u2 = amp * inv_u2;
    const RealVector q_l = amp * inv_l;
    const RealVector q_l2 = amp * inv_l2;

    Index pick = -1;
    double best_slack = 0.0;
    double pick_u = 0.0, pick_l = 0.0;
    for (Index i = 0; i < m; ++i) {
      const double ub = q_u2[i] / drop_u + q_u[i];
      const double lb = q_l2[i] / drop_l - q_l[i];
      if (lb <= 0.0 || lb <= ub) continue;
      const double slack = lb - ub;
      if (slack > best_slack) {
        best_slack = slack;
        pick = i;
        pick_u = ub;
        pick_l = lb;
      }
    }
    if (pick < 0) {
      result.stalled = true;
      break;
    }

    const double t = 2.0 / (pick_u + pick_l);
    accumulated[pick] += t;
    const ComplexVector v = vw.row(pick).adjoint();
    a.noalias() += t * (v * v.adjoint());
    upper = u_next;
    lower = l_next;
    ++result.steps_taken;
  }

  for (Index i = 0; i < m; ++i)
    if (accumulated[i] > 0.0) result.indices.push_back(i);
  if (result.indices.empty()) {
    result.stalled = true;
    return result;
  }

  const Index j_count = static_cast<Index>(result.indices.size());
  result.scale_weights.resize(j_count);
  ComplexMatrix selected(j_count, n);
  for (Index k = 0; k < j_count; ++k) {
    result.scale_weights[k] = accumulated[result.indices[k]];
    selected.row(k) = input.vectors.row(result.indices[k]);
  }

  // Center the achieved two-sided bounds so that c2 * c3 = 1.
  auto [smin, smax] = gram_eigen_range(selected, result.scale_weights);
  if (smin > 0.0 && smax > 0.0) {
    const double kappa = ratio_scale / std::sqrt(smin * smax);
    result.scale_weights *= kappa;
    smin *= kappa;
    smax *= kappa;
  }
  result.lower_bound = smin / ratio_scale;
  result.upper_bound = smax / ratio_scale;
  return result;
}

WeightedDesign fold_subsample(const WeightedDesign& design, const SubsampleResult& result) {
  const Index j_count = static_cast<Index>(result.indices.size());
  if (j_count < 1) throw std::invalid_argument("fold_subsample: empty selection");
  if (result.scale_weights.size() != j_count)
    throw std::invalid_argument("fold_subsample: weights do not match indices");

  WeightedDesign folded;
  folded.density = design.density;
  folded.head = design.head;
  folded.points.resize(j_count);
  folded.weights.resize(j_count);
  folded.scales.resize(j_count);
  folded.g.resize(j_count, design.g.cols());

  for (Index k = 0; k < j_count; ++k) {
    const Index i = result.indices[k];
    if (i < 0 || i >= design.rows())
      throw std::out_of_range("fold_subsample: selected index out of range");
    const double s = result.scale_weights[k];
    folded.points[k] = design.points[i];
    folded.scales[k] = design.scales[i] * s;
    folded.weights[k] = design.density->evaluate(design.points[i]) / folded.scales[k];
    folded.g.row(k) = std::sqrt(s) * design.g.row(i);
  }
  folded.spectrum = spectral_summary(folded.g);
  return folded;
}

}  // namespace samplerec
