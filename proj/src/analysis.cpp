#include "samplerec/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace samplerec {

void HatClassSpec::validate() const {
  if (!(alpha_len > 1.0))
    throw std::invalid_argument("HatClassSpec: alpha_len must exceed 1 (lengths must sum)");
  if (!(beta_h > 0.0)) throw std::invalid_argument("HatClassSpec: beta_h must be positive");
  if (truncation < 1) throw std::invalid_argument("HatClassSpec: truncation must be >= 1");
}

double HatClassSpec::length(Index i) const {
  if (i < 1) throw std::invalid_argument("HatClassSpec: index must be >= 1");
  return std::pow(static_cast<double>(i), -alpha_len) / zeta_real(alpha_len);
}

double hat_sampling_number(const HatClassSpec& spec, Index n) {
  spec.validate();
  if (n < 0) throw std::invalid_argument("hat_sampling_number: n must be >= 0");
  // (1/3) sum_{i>n} h_i^2 l_i = (1/3) sum_{i>n} i^{-(2 beta + alpha)} / zeta(alpha).
  const CertifiedSum tail = power_tail_sum(2.0 * spec.beta_h + spec.alpha_len, n);
  if (tail.error_bound > 1e-12)
    throw std::runtime_error("hat_sampling_number: tail remainder not certified below 1e-12");
  return std::sqrt(tail.value / (3.0 * zeta_real(spec.alpha_len)));
}

double hat_kolmogorov_width(const HatClassSpec& spec, Index n) {
  spec.validate();
  if (n < 0) throw std::invalid_argument("hat_kolmogorov_width: n must be >= 0");
  return std::pow(static_cast<double>(n + 1), -spec.beta_h);
}

OrthonormalSystem hat_system(const HatClassSpec& spec, Index dim, Index quadrature_nodes) {
  spec.validate();
  if (dim < 1) throw std::invalid_argument("hat_system: dim must be >= 1");
  const double zeta = zeta_real(spec.alpha_len);
  RealVector lengths(dim);
  for (Index i = 1; i <= dim; ++i)
    lengths[i - 1] = std::pow(static_cast<double>(i), -spec.alpha_len) / zeta;
  MeasureSpaceDescriptor space;
  space.domain = DomainKind::unit_interval;
  space.quadrature_nodes = quadrature_nodes;
  return OrthonormalSystem::normalized_hat(space, std::move(lengths));
}

ModelClass hat_model(const HatClassSpec& spec, const OrthonormalSystem& system) {
  const RealVector& lengths = system.hat_lengths();
  RealVector bounds(lengths.size());
  for (Index i = 1; i <= lengths.size(); ++i)
    bounds[i - 1] = spec.height(i) * std::sqrt(lengths[i - 1] / 3.0);
  return ModelClass::per_index_class(system, std::move(bounds));
}

double worst_case_error(const WeightedDesign& design,
                        const std::vector<ComplexVector>& members) {
  if (members.empty()) return 0.0;
  const ComplexMatrix weighted = bulk_information(design, members);
  const ComplexMatrix heads = recover_columns(design, weighted);
  double worst = 0.0;
  for (std::size_t j = 0; j < members.size(); ++j)
    worst = std::max(worst, recovery_error(members[j], heads.col(static_cast<Index>(j))));
  return worst;
}

std::vector<ComplexVector> member_family(const ModelClass& model, Index random_count,
                                         Rng& rng) {
  std::vector<ComplexVector> members = model.extremal_members();
  for (Index r = 0; r < random_count; ++r) members.push_back(model.random_member(rng));
  return members;
}

WilsonInterval wilson_interval(Index successes, Index trials, double z) {
  if (trials < 1) throw std::invalid_argument("wilson_interval: trials must be >= 1");
  if (successes < 0 || successes > trials)
    throw std::invalid_argument("wilson_interval: successes out of range");
  const double t = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / t;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / t;
  const double center = (p + z2 / (2.0 * t)) / denom;
  const double half = (z / denom) * std::sqrt(p * (1.0 - p) / t + z2 / (4.0 * t * t));
  WilsonInterval w;
  w.lower = std::max(0.0, center - half);
  w.upper = std::min(1.0, center + half);
  return w;
}

double oliveira_bound(Index m, double t, double r_sq) {
  if (m < 1 || t <= 0.0 || r_sq <= 0.0)
    throw std::invalid_argument("oliveira_bound: needs m >= 1, t > 0, R^2 > 0");
  const double s_t = (t <= 2.0) ? t * t : 4.0 * (t - 1.0);
  const double md = static_cast<double>(m);
  return 4.0 * md * md * std::exp(-md * s_t / (16.0 * r_sq));
}

ConcentrationReport concentration_trials(const ConcentrationConfig& config, Index trials,
                                         std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("concentration_trials: trials must be >= 1");
  if (!(config.c1 > 0.0)) throw std::invalid_argument("concentration_trials: c1 must be > 0");
  const Index n = config.n;
  if (n < 1) throw std::invalid_argument("concentration_trials: n must be >= 1");

  MeasureSpaceDescriptor space;
  space.domain = DomainKind::torus;
  const Index cutoff = config.density.tail_factor * n;
  const OrthonormalSystem system = OrthonormalSystem::fourier_torus(space, cutoff);
  const SamplingDensity density(system, n, config.weights, config.density);
  const ModelClass model = ModelClass::tail_sum_class(system, cutoff, config.envelope);

  const double log_n1 = std::log(static_cast<double>(n) + 1.0);
  const Index m = static_cast<Index>(std::ceil(config.c1 * static_cast<double>(n) * log_n1));

  ConcentrationReport report;
  report.n = n;
  report.m = m;
  report.trials = trials;
  report.fact1_threshold = 4.0 / static_cast<double>(n * n);
  report.fact2_threshold = 1.0 / static_cast<double>(n * n);
  report.oliveira_bound = oliveira_bound(m, 0.5, 2.0 * static_cast<double>(n));

  // A fixed member family across trials; only the sample draws vary.
  Rng member_rng(Rng::derive(seed, 0));
  std::vector<ComplexVector> members = member_family(model, config.random_members, member_rng);
  for (auto& c : members) c.head(std::min<Index>(n, c.size())).setZero();

  const double eps_n = config.envelope.monotone_eval(n);
  const double fact2_cap = config.c2 * eps_n * eps_n * static_cast<double>(n) * log_n1;

  for (Index trial = 0; trial < trials; ++trial) {
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(trial) + 1));
    const RealVector points = density.sample(rng, m);
    const WeightedDesign design = assemble_design(density, points, n);

    const double s_min_sq = design.spectrum.s_min * design.spectrum.s_min;
    report.s_min_sq.push_back(s_min_sq);
    if (s_min_sq < 0.5 * static_cast<double>(m)) ++report.fact1_failures;

    const ComplexMatrix weighted = bulk_information(design, members);
    double sup_sq = 0.0;
    for (Index j = 0; j < weighted.cols(); ++j)
      sup_sq = std::max(sup_sq, weighted.col(j).squaredNorm());
    report.tail_sup_sq.push_back(sup_sq);
    if (sup_sq > fact2_cap) ++report.fact2_failures;

    if (config.track_operator_deviation) {
      ComplexMatrix centered = design.g.adjoint() * design.g;
      centered -= static_cast<double>(m) * ComplexMatrix::Identity(n, n);
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(centered, Eigen::EigenvaluesOnly);
      const double norm =
          std::max(std::abs(eig.eigenvalues()[0]), std::abs(eig.eigenvalues()[n - 1]));
      report.deviation.push_back(norm / static_cast<double>(m));
      if (norm >= 0.5 * static_cast<double>(m)) ++report.deviation_exceed;
    }
  }
  return report;
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& pairs) {
  const Index count = static_cast<Index>(pairs.size());
  if (count < 4) throw std::invalid_argument("fit_rate: needs at least 4 pairs");
  for (Index i = 0; i < count; ++i) {
    if (!(pairs[i].first > 0.0)) throw std::invalid_argument("fit_rate: n must be positive");
    if (!(pairs[i].second > 0.0)) throw std::invalid_argument("fit_rate: errors must be positive");
    if (i > 0 && !(pairs[i].first > pairs[i - 1].first))
      throw std::invalid_argument("fit_rate: n must be strictly increasing");
  }

  RealMatrix x(count, 3);
  RealVector y(count);
  for (Index i = 0; i < count; ++i) {
    const double n = pairs[i].first;
    x(i, 0) = std::log(n);
    x(i, 1) = std::log(std::log(n + 1.0));
    x(i, 2) = 1.0;
    y[i] = std::log(pairs[i].second);
  }
  const RealVector sol =
      Eigen::BDCSVD<RealMatrix>(x, Eigen::ComputeThinU | Eigen::ComputeThinV).solve(y);
  RateFit fit;
  fit.slope = sol[0];
  fit.log_exponent = sol[1];
  fit.intercept = sol[2];
  return fit;
}

}  // namespace samplerec
