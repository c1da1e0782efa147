#include "samplerec/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace samplerec {

namespace {

constexpr double kRankCutoff = 1e-10;

Eigen::BDCSVD<ComplexMatrix> thin_svd(const ComplexMatrix& g) {
  return Eigen::BDCSVD<ComplexMatrix>(g, Eigen::ComputeThinU | Eigen::ComputeThinV);
}

SpectralSummary summary_from_values(const RealVector& sv) {
  SpectralSummary s;
  s.s_max = sv.size() ? sv[0] : 0.0;
  s.s_min = sv.size() ? sv[sv.size() - 1] : 0.0;
  s.full_rank = s.s_min > kRankCutoff * s.s_max;
  return s;
}

}  // namespace

SpectralSummary spectral_summary(const ComplexMatrix& g) {
  Eigen::BDCSVD<ComplexMatrix> svd(g);
  return summary_from_values(svd.singularValues());
}

WeightedDesign assemble_design(const SamplingDensity& density, const RealVector& points,
                               Index n) {
  const Index m = points.size();
  if (n < 1) throw std::invalid_argument("assemble_design: head dimension must be >= 1");
  if (m < n) throw std::invalid_argument("assemble_design: under-determined (m < n)");
  if (n > density.system().max_index())
    throw std::invalid_argument("assemble_design: head exceeds system dimension");

  WeightedDesign d;
  d.density = std::make_shared<SamplingDensity>(density);
  d.points = points;
  d.weights.resize(m);
  d.scales = RealVector::Ones(m);
  d.g.resize(m, n);
  d.head = n;

  const double row_cap = 2.0 * static_cast<double>(n) * (1.0 + 1e-9);
  for (Index i = 0; i < m; ++i) {
    const double rho = density.evaluate(points[i]);
    if (!(rho > 0.0))
      throw std::runtime_error("assemble_design: zero density at a sampled point");
    d.weights[i] = rho;
    d.g.row(i) = density.system().evaluate_block(points[i], 1, n).transpose() / std::sqrt(rho);
    // The density construction guarantees ||X_i||^2 <= 2n at every point.
    if (d.g.row(i).squaredNorm() > row_cap)
      throw std::logic_error("assemble_design: row norm bound 2n violated");
  }
  d.spectrum = spectral_summary(d.g);
  return d;
}

ComplexMatrix bulk_information(const WeightedDesign& design,
                               const std::vector<ComplexVector>& members) {
  const Index m = design.rows();
  const Index p = static_cast<Index>(members.size());
  ComplexMatrix out = ComplexMatrix::Zero(m, p);
  if (p == 0) return out;

  Index max_len = 0;
  for (const auto& c : members) max_len = std::max(max_len, c.size());
  if (max_len > design.density->system().max_index())
    throw std::invalid_argument("bulk_information: member longer than the system");

  constexpr Index kChunk = 512;
  const OrthonormalSystem& system = design.density->system();
  ComplexMatrix block(m, kChunk);
  ComplexMatrix coeffs(kChunk, p);
  for (Index first = 1; first <= max_len; first += kChunk) {
    const Index count = std::min<Index>(kChunk, max_len - first + 1);
    for (Index i = 0; i < m; ++i)
      block.block(i, 0, 1, count) =
          system.evaluate_block(design.points[i], first, count).transpose();
    coeffs.setZero();
    for (Index j = 0; j < p; ++j) {
      const Index have = std::max<Index>(0, std::min(members[j].size() - first + 1, count));
      if (have > 0) coeffs.block(0, j, have, 1) = members[j].segment(first - 1, have);
    }
    out.noalias() += block.leftCols(count) * coeffs.topRows(count);
  }
  for (Index i = 0; i < m; ++i) out.row(i) /= std::sqrt(design.weights[i]);
  return out;
}

ComplexVector apply_information(const WeightedDesign& design, const ComplexVector& coeffs) {
  return bulk_information(design, {coeffs}).col(0);
}

RecoveryResult recover(const WeightedDesign& design, const ComplexVector& samples) {
  ComplexMatrix cols(samples.size(), 1);
  cols.col(0) = samples;
  RecoveryResult r;
  r.coefficients = recover_columns(design, cols).col(0);
  r.spectrum = design.spectrum;
  r.full_rank = design.spectrum.full_rank;
  return r;
}

ComplexMatrix recover_columns(const WeightedDesign& design, const ComplexMatrix& samples) {
  if (samples.rows() != design.rows())
    throw std::invalid_argument("recover: sample count must match design rows");
  const auto svd = thin_svd(design.g);
  const RealVector& sv = svd.singularValues();
  const double cutoff = kRankCutoff * (sv.size() ? sv[0] : 0.0);
  RealVector inv = RealVector::Zero(sv.size());
  for (Index i = 0; i < sv.size(); ++i)
    if (sv[i] > cutoff) inv[i] = 1.0 / sv[i];
  return svd.matrixV() * inv.asDiagonal() * (svd.matrixU().adjoint() * samples);
}

double recovery_error(const ComplexVector& truth, const ComplexVector& recovered_head) {
  const Index n = recovered_head.size();
  double err_sq = 0.0;
  for (Index k = 0; k < std::max(n, truth.size()); ++k) {
    const Complex t = (k < truth.size()) ? truth[k] : Complex(0.0, 0.0);
    const Complex h = (k < n) ? recovered_head[k] : Complex(0.0, 0.0);
    err_sq += std::norm(t - h);
  }
  return std::sqrt(err_sq);
}

CertificateReport error_certificate(const WeightedDesign& design, const ModelClass& model,
                                    const std::vector<ComplexVector>& members) {
  if (!design.spectrum.full_rank)
    throw std::runtime_error("error_certificate: rank-deficient design");
  const Index n = design.head;

  CertificateReport report;
  report.a_quarter = model.approximation_number((n + 3) / 4);

  // S = max over members of ||N (f - P_n f)||^2; evaluate N on the tails.
  std::vector<ComplexVector> tails;
  tails.reserve(members.size());
  for (const auto& c : members) {
    ComplexVector t = c;
    t.head(std::min(n, t.size())).setZero();
    tails.push_back(std::move(t));
  }
  const ComplexMatrix weighted = bulk_information(design, tails);
  for (Index j = 0; j < weighted.cols(); ++j)
    report.tail_sup_sq = std::max(report.tail_sup_sq, weighted.col(j).squaredNorm());

  const double s_min = design.spectrum.s_min;
  report.certificate = std::sqrt(4.0 * report.a_quarter * report.a_quarter +
                                 report.tail_sup_sq / (s_min * s_min));
  return report;
}

}  // namespace samplerec
