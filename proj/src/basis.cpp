#include "samplerec/basis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace samplerec {

namespace {

// Unit hat on [a, a+l]: 0 at the endpoints, 1 at the midpoint.
double unit_hat(double x, double a, double l) {
  const double t = (x - a) / l;
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return 1.0 - std::abs(2.0 * t - 1.0);
}

}  // namespace

OrthonormalSystem OrthonormalSystem::fourier_torus(MeasureSpaceDescriptor space,
                                                   Index max_index) {
  space.validate();
  if (space.domain != DomainKind::torus)
    throw std::invalid_argument("fourier_torus: domain must be the torus");
  if (max_index < 1) throw std::invalid_argument("fourier_torus: max_index must be >= 1");
  OrthonormalSystem s;
  s.kind_ = BasisKind::fourier_torus;
  s.space_ = space;
  s.max_index_ = max_index;
  return s;
}

OrthonormalSystem OrthonormalSystem::normalized_hat(MeasureSpaceDescriptor space,
                                                    RealVector lengths) {
  space.validate();
  if (space.domain != DomainKind::unit_interval)
    throw std::invalid_argument("normalized_hat: domain must be the unit interval");
  if (lengths.size() < 1) throw std::invalid_argument("normalized_hat: no intervals");
  if ((lengths.array() <= 0.0).any())
    throw std::invalid_argument("normalized_hat: lengths must be positive");
  if (lengths.sum() > 1.0 + 1e-12)
    throw std::invalid_argument("normalized_hat: lengths must sum to at most 1");

  OrthonormalSystem s;
  s.kind_ = BasisKind::normalized_hat;
  s.space_ = space;
  s.max_index_ = lengths.size();
  s.lengths_ = std::move(lengths);
  s.breakpoints_.resize(s.max_index_ + 1);
  s.breakpoints_[0] = 0.0;
  for (Index i = 0; i < s.max_index_; ++i)
    s.breakpoints_[i + 1] = s.breakpoints_[i] + s.lengths_[i];
  return s;
}

OrthonormalSystem OrthonormalSystem::custom_tabulated(const OrthonormalSystem& reference,
                                                      ComplexMatrix coeffs) {
  if (coeffs.rows() != reference.max_index())
    throw std::invalid_argument("custom_tabulated: coefficient rows must match reference dim");
  if (coeffs.cols() < 1) throw std::invalid_argument("custom_tabulated: no columns");
  OrthonormalSystem s;
  s.kind_ = BasisKind::custom_tabulated;
  s.space_ = reference.space();
  s.max_index_ = coeffs.cols();
  s.reference_ = std::make_shared<OrthonormalSystem>(reference);
  s.coeffs_ = std::move(coeffs);
  return s;
}

Complex OrthonormalSystem::evaluate(Index k, double x) const {
  if (k < 1 || k > max_index_) throw std::out_of_range("evaluate: basis index out of range");
  if (!space_.contains(x)) throw std::invalid_argument("evaluate: point outside domain");
  const double xc = space_.canonical(x);

  switch (kind_) {
    case BasisKind::fourier_torus: {
      const double phase = kTwoPi * static_cast<double>(fourier_frequency(k)) * xc;
      return Complex(std::cos(phase), std::sin(phase));
    }
    case BasisKind::normalized_hat: {
      const Index j = hat_interval(xc);
      if (j != k) return Complex(0.0, 0.0);
      const double l = lengths_[k - 1];
      return Complex(std::sqrt(3.0 / l) * unit_hat(xc, breakpoints_[k - 1], l), 0.0);
    }
    case BasisKind::custom_tabulated: {
      const ComplexVector ref = reference_->evaluate_block(xc, 1, reference_->max_index());
      return (coeffs_.col(k - 1).transpose() * ref)(0);
    }
  }
  throw std::logic_error("evaluate: unknown basis kind");
}

ComplexVector OrthonormalSystem::evaluate_block(double x, Index first, Index count) const {
  if (count < 0 || first < 1 || first + count - 1 > max_index_)
    throw std::out_of_range("evaluate_block: index window out of range");
  if (!space_.contains(x)) throw std::invalid_argument("evaluate_block: point outside domain");
  const double xc = space_.canonical(x);
  ComplexVector out = ComplexVector::Zero(count);

  switch (kind_) {
    case BasisKind::fourier_torus: {
      for (Index j = 0; j < count; ++j) {
        const double phase = kTwoPi * static_cast<double>(fourier_frequency(first + j)) * xc;
        out[j] = Complex(std::cos(phase), std::sin(phase));
      }
      return out;
    }
    case BasisKind::normalized_hat: {
      const Index j = hat_interval(xc);
      if (j >= first && j < first + count) {
        const double l = lengths_[j - 1];
        out[j - first] = std::sqrt(3.0 / l) * unit_hat(xc, breakpoints_[j - 1], l);
      }
      return out;
    }
    case BasisKind::custom_tabulated: {
      const ComplexVector ref = reference_->evaluate_block(xc, 1, reference_->max_index());
      out = (ref.transpose() * coeffs_.middleCols(first - 1, count)).transpose();
      return out;
    }
  }
  throw std::logic_error("evaluate_block: unknown basis kind");
}

double OrthonormalSystem::head_square_sum(Index n, double x) const {
  if (n < 0 || n > max_index_) throw std::out_of_range("head_square_sum: n out of range");
  if (n == 0) return 0.0;
  switch (kind_) {
    case BasisKind::fourier_torus:
      // |b_k| = 1 identically; return the exact value.
      return static_cast<double>(n);
    case BasisKind::normalized_hat: {
      const double xc = space_.canonical(x);
      const Index j = hat_interval(xc);
      if (j < 1 || j > n) return 0.0;
      const double l = lengths_[j - 1];
      const double v = std::sqrt(3.0 / l) * unit_hat(xc, breakpoints_[j - 1], l);
      return v * v;
    }
    case BasisKind::custom_tabulated:
      return evaluate_block(x, 1, n).squaredNorm();
  }
  throw std::logic_error("head_square_sum: unknown basis kind");
}

double OrthonormalSystem::weighted_square_sum(const RealVector& w, Index first,
                                              double x) const {
  const Index count = w.size();
  if (first < 1 || (count > 0 && first + count - 1 > max_index_))
    throw std::out_of_range("weighted_square_sum: index window out of range");
  if (count == 0) return 0.0;
  switch (kind_) {
    case BasisKind::fourier_torus:
      return w.sum();  // |b_k|^2 = 1 identically
    case BasisKind::normalized_hat: {
      const double xc = space_.canonical(x);
      const Index j = hat_interval(xc);
      if (j < first || j >= first + count) return 0.0;
      const double l = lengths_[j - 1];
      const double v = std::sqrt(3.0 / l) * unit_hat(xc, breakpoints_[j - 1], l);
      return w[j - first] * v * v;
    }
    case BasisKind::custom_tabulated:
      return evaluate_block(x, first, count).cwiseAbs2().dot(w);
  }
  throw std::logic_error("weighted_square_sum: unknown basis kind");
}

double OrthonormalSystem::gram_defect(Index window) const {
  const Index w = std::min(window, max_index_);
  if (w < 1) throw std::invalid_argument("gram_defect: empty window");
  ComplexMatrix gram = ComplexMatrix::Zero(w, w);
  const double qw = space_.node_weight();
  for (Index i = 0; i < space_.quadrature_nodes; ++i) {
    const ComplexVector v = evaluate_block(space_.node(i), 1, w);
    gram.noalias() += qw * v * v.adjoint();
  }
  gram -= ComplexMatrix::Identity(w, w);
  return gram.cwiseAbs().maxCoeff();
}

const RealVector& OrthonormalSystem::hat_lengths() const {
  if (kind_ != BasisKind::normalized_hat)
    throw std::logic_error("hat_lengths: not a hat system");
  return lengths_;
}

Index OrthonormalSystem::hat_interval(double x) const {
  if (kind_ != BasisKind::normalized_hat)
    throw std::logic_error("hat_interval: not a hat system");
  if (x < 0.0 || x >= breakpoints_[max_index_]) return 0;
  const double* begin = breakpoints_.data();
  const double* end = begin + max_index_ + 1;
  const double* it = std::upper_bound(begin + 1, end, x);
  const Index j = static_cast<Index>(it - begin);
  return (j >= 1 && j <= max_index_) ? j : 0;
}

double OrthonormalSystem::hat_peak(Index k) const {
  if (kind_ != BasisKind::normalized_hat)
    throw std::logic_error("hat_peak: not a hat system");
  if (k < 1 || k > max_index_) throw std::out_of_range("hat_peak: index out of range");
  return breakpoints_[k - 1] + 0.5 * lengths_[k - 1];
}

const ComplexMatrix& OrthonormalSystem::tabulation() const {
  if (kind_ != BasisKind::custom_tabulated)
    throw std::logic_error("tabulation: not a tabulated system");
  return coeffs_;
}

const OrthonormalSystem& OrthonormalSystem::reference() const {
  if (kind_ != BasisKind::custom_tabulated)
    throw std::logic_error("reference: not a tabulated system");
  return *reference_;
}

ComplexVector project(const ComplexVector& coeffs, Index n) {
  if (n < 0 || n > coeffs.size()) throw std::out_of_range("project: n out of range");
  ComplexVector out = coeffs;
  out.tail(coeffs.size() - n).setZero();
  return out;
}

double projection_residual(const ComplexVector& coeffs, Index n) {
  if (n < 0 || n > coeffs.size())
    throw std::out_of_range("projection_residual: n out of range");
  return coeffs.tail(coeffs.size() - n).norm();
}

NestedBasisResult build_nested_basis(const std::vector<ComplexMatrix>& spans,
                                     const OrthonormalSystem& reference) {
  if (spans.empty()) throw std::invalid_argument("build_nested_basis: no spans");
  const Index dim = reference.max_index();
  Index total = 0;
  for (std::size_t s = 0; s < spans.size(); ++s) {
    if (spans[s].rows() != dim)
      throw std::invalid_argument("build_nested_basis: span rows must match reference dim");
    if (spans[s].cols() != (Index(1) << s))
      throw std::invalid_argument("build_nested_basis: span column counts must double");
    total += spans[s].cols();
  }

  std::vector<Index> stage_sizes;
  std::vector<std::pair<Index, Index>> dropped;
  ComplexMatrix q(dim, std::min(total, dim));
  Index kept = 0;
  constexpr double kDropTol = 1e-10;

  for (std::size_t s = 0; s < spans.size(); ++s) {
    for (Index c = 0; c < spans[s].cols(); ++c) {
      ComplexVector v = spans[s].col(c);
      const double original = v.norm();
      if (kept == dim || original <= kDropTol) {
        dropped.emplace_back(Index(s), c);
        continue;
      }
      // Modified Gram-Schmidt with one reorthogonalization pass.
      for (int pass = 0; pass < 2; ++pass)
        for (Index j = 0; j < kept; ++j) v -= q.col(j).dot(v) * q.col(j);
      const double remaining = v.norm();
      if (remaining <= kDropTol * original) {
        dropped.emplace_back(Index(s), c);
        continue;
      }
      q.col(kept++) = v / remaining;
    }
    stage_sizes.push_back(kept);
  }

  if (kept == 0) throw std::invalid_argument("build_nested_basis: all columns dependent");
  return NestedBasisResult{OrthonormalSystem::custom_tabulated(reference, q.leftCols(kept)),
                           std::move(stage_sizes), std::move(dropped)};
}

}  // namespace samplerec
