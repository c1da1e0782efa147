#include "samplerec/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "samplerec/analysis.hpp"
#include "samplerec/density.hpp"
#include "samplerec/estimator.hpp"
#include "samplerec/model.hpp"
#include "samplerec/subsample.hpp"

namespace samplerec {

namespace {

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': not a number: " + value);
  }
}

Index parse_index(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return static_cast<Index>(v);
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': not an integer: " + value);
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return static_cast<std::uint64_t>(v);
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': not an unsigned integer: " + value);
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "0" || value == "false") return false;
  if (value == "1" || value == "true") return true;
  throw std::invalid_argument("config key '" + key + "': not a boolean: " + value);
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<Index> parse_index_list(const std::string& key, const std::string& value) {
  std::vector<Index> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_index(key, item));
  }
  if (out.empty()) throw std::invalid_argument("config key '" + key + "': empty list");
  return out;
}

// Polynomial decay exponent of the class the density serves; hat classes
// inherit the closed-form rate beta_h + (alpha_len - 1)/2.
double decay_exponent(const ExperimentConfig& c) {
  if (c.system == "normalized_hat" || c.mode == ExperimentMode::hat_oracle)
    return c.beta_h + 0.5 * (c.alpha_len - 1.0);
  return c.alpha;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace

std::string to_string(ExperimentMode mode) {
  switch (mode) {
    case ExperimentMode::random_points: return "random_points";
    case ExperimentMode::subsampled: return "subsampled";
    case ExperimentMode::hat_oracle: return "hat_oracle";
    case ExperimentMode::concentration: return "concentration";
  }
  throw std::logic_error("to_string: unknown mode");
}

ExperimentMode experiment_mode_from_string(const std::string& text) {
  if (text == "random_points") return ExperimentMode::random_points;
  if (text == "subsampled") return ExperimentMode::subsampled;
  if (text == "hat_oracle") return ExperimentMode::hat_oracle;
  if (text == "concentration") return ExperimentMode::concentration;
  throw std::invalid_argument("config key 'mode': unknown mode: " + text);
}

double ExperimentConfig::effective_delta() const {
  if (delta > 0.0) return delta;
  return 0.5 * (0.5 + decay_exponent(*this));
}

void ExperimentConfig::validate() const {
  if (system != "fourier_torus" && system != "normalized_hat")
    throw std::invalid_argument("system must be fourier_torus or normalized_hat");
  if (weight_mode != "power" && weight_mode != "log")
    throw std::invalid_argument("weight_mode must be power or log");
  if (!(c > 0.0)) throw std::invalid_argument("c must be positive");
  if (weight_mode == "power" && !(alpha > 0.5))
    throw std::invalid_argument("alpha must exceed 1/2 (or engage the log weight_mode)");
  if (!(alpha_len > 1.0)) throw std::invalid_argument("alpha_len must exceed 1");
  if (!(beta_h > 0.0)) throw std::invalid_argument("beta_h must be positive");

  if (weight_mode == "power") {
    const double d = effective_delta();
    const double a = decay_exponent(*this);
    if (!(d > 0.5) || !(d < a))
      throw std::invalid_argument("delta must lie strictly between 1/2 and alpha");
  } else {
    const double dp = delta_prime > 0.0 ? delta_prime : beta + 1.0;
    if (!(dp > beta + 0.5))
      throw std::invalid_argument("delta_prime must exceed beta + 1/2");
  }

  if (n_list.empty()) throw std::invalid_argument("n_list must be nonempty");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 1) throw std::invalid_argument("n_list entries must be >= 1");
    if (i > 0 && n_list[i] <= n_list[i - 1])
      throw std::invalid_argument("n_list must be strictly increasing");
  }

  if (!(c1 > 0.0)) throw std::invalid_argument("c1 must be positive");
  if (!(c2 > 0.0)) throw std::invalid_argument("c2 must be positive");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (random_members < 0) throw std::invalid_argument("random_members must be >= 0");
  if (mode == ExperimentMode::subsampled && !(target_ratio > 1.0))
    throw std::invalid_argument("target_ratio must exceed 1");
  if (tail_factor < 2) throw std::invalid_argument("tail_factor must be >= 2");
  if (!(dropped_tail_tol > 0.0)) throw std::invalid_argument("dropped_tail_tol must be positive");
  if (quadrature_nodes < 64) throw std::invalid_argument("quadrature_nodes must be >= 64");
  if (output.empty()) throw std::invalid_argument("output path must be nonempty");
}

void apply_override(ExperimentConfig& config, const std::string& key,
                    const std::string& value) {
  if (key == "mode") config.mode = experiment_mode_from_string(value);
  else if (key == "system") config.system = value;
  else if (key == "alpha") config.alpha = parse_double(key, value);
  else if (key == "beta") config.beta = parse_double(key, value);
  else if (key == "c") config.c = parse_double(key, value);
  else if (key == "alpha_len") config.alpha_len = parse_double(key, value);
  else if (key == "beta_h") config.beta_h = parse_double(key, value);
  else if (key == "delta") config.delta = parse_double(key, value);
  else if (key == "weight_mode") config.weight_mode = value;
  else if (key == "delta_prime") config.delta_prime = parse_double(key, value);
  else if (key == "tail_factor") config.tail_factor = parse_index(key, value);
  else if (key == "dropped_tail_tol") config.dropped_tail_tol = parse_double(key, value);
  else if (key == "quadrature_nodes") config.quadrature_nodes = parse_index(key, value);
  else if (key == "n_list") config.n_list = parse_index_list(key, value);
  else if (key == "c1") config.c1 = parse_double(key, value);
  else if (key == "c2") config.c2 = parse_double(key, value);
  else if (key == "trials") config.trials = parse_index(key, value);
  else if (key == "seed") config.seed = parse_u64(key, value);
  else if (key == "random_members") config.random_members = parse_index(key, value);
  else if (key == "target_ratio") config.target_ratio = parse_double(key, value);
  else if (key == "timing") config.timing = parse_bool(key, value);
  else if (key == "output") config.output = value;
  else if (key == "summary") config.summary = value;
  else throw std::invalid_argument("unknown config key: " + key);
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig config;
  std::string line;
  Index line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key=value");
    apply_override(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return parse_config(in);
}

std::string serialize_config(const ExperimentConfig& config) {
  std::ostringstream out;
  out << "mode=" << to_string(config.mode) << "\n";
  out << "system=" << config.system << "\n";
  out << "alpha=" << format_csv_value(config.alpha) << "\n";
  out << "beta=" << format_csv_value(config.beta) << "\n";
  out << "c=" << format_csv_value(config.c) << "\n";
  out << "alpha_len=" << format_csv_value(config.alpha_len) << "\n";
  out << "beta_h=" << format_csv_value(config.beta_h) << "\n";
  out << "delta=" << format_csv_value(config.delta) << "\n";
  out << "weight_mode=" << config.weight_mode << "\n";
  out << "delta_prime=" << format_csv_value(config.delta_prime) << "\n";
  out << "tail_factor=" << config.tail_factor << "\n";
  out << "dropped_tail_tol=" << format_csv_value(config.dropped_tail_tol) << "\n";
  out << "quadrature_nodes=" << config.quadrature_nodes << "\n";
  out << "n_list=";
  for (std::size_t i = 0; i < config.n_list.size(); ++i)
    out << (i ? "," : "") << config.n_list[i];
  out << "\n";
  out << "c1=" << format_csv_value(config.c1) << "\n";
  out << "c2=" << format_csv_value(config.c2) << "\n";
  out << "trials=" << config.trials << "\n";
  out << "seed=" << config.seed << "\n";
  out << "random_members=" << config.random_members << "\n";
  out << "target_ratio=" << format_csv_value(config.target_ratio) << "\n";
  out << "timing=" << (config.timing ? 1 : 0) << "\n";
  out << "output=" << config.output << "\n";
  out << "summary=" << config.summary << "\n";
  return out.str();
}

const char* const kCsvHeader = "mode,n,m,j,trial,s_min_sq,worst_error,certificate,analytic,elapsed_ms";

std::string format_csv_value(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string format_csv_row(const ExperimentRow& row) {
  std::ostringstream out;
  out << row.mode << ',' << row.n << ',' << row.m << ',' << row.j << ',' << row.trial << ','
      << format_csv_value(row.s_min_sq) << ',' << format_csv_value(row.worst_error) << ','
      << format_csv_value(row.certificate) << ',' << format_csv_value(row.analytic) << ','
      << format_csv_value(row.elapsed_ms);
  return out.str();
}

namespace {

struct Pipeline {
  OrthonormalSystem system;
  SamplingDensity density;
  ModelClass model;
};

TailWeightSpec weight_spec(const ExperimentConfig& config) {
  TailWeightSpec w;
  if (config.weight_mode == "power") {
    w.kind = TailWeightKind::power;
    w.delta = config.effective_delta();
  } else {
    w.kind = TailWeightKind::log_power;
    w.beta = config.beta;
    w.delta_prime = config.delta_prime > 0.0 ? config.delta_prime : config.beta + 1.0;
  }
  return w;
}

SamplingDensityOptions density_options(const ExperimentConfig& config) {
  SamplingDensityOptions o;
  o.tail_factor = config.tail_factor;
  o.dropped_tail_tolerance = config.dropped_tail_tol;
  return o;
}

Pipeline build_pipeline(const ExperimentConfig& config, Index n, Index dim) {
  if (config.system == "fourier_torus") {
    MeasureSpaceDescriptor space;
    space.domain = DomainKind::torus;
    space.quadrature_nodes = config.quadrature_nodes;
    OrthonormalSystem system = OrthonormalSystem::fourier_torus(space, dim);
    SamplingDensity density(system, n, weight_spec(config), density_options(config));
    DecayEnvelope env{config.c, config.alpha, config.beta};
    ModelClass model = ModelClass::tail_sum_class(system, dim, env);
    return Pipeline{std::move(system), std::move(density), std::move(model)};
  }
  HatClassSpec spec;
  spec.alpha_len = config.alpha_len;
  spec.beta_h = config.beta_h;
  OrthonormalSystem system = hat_system(spec, dim, config.quadrature_nodes);
  SamplingDensity density(system, n, weight_spec(config), density_options(config));
  ModelClass model = hat_model(spec, system);
  return Pipeline{std::move(system), std::move(density), std::move(model)};
}

// Deterministic stream ids per (n index, trial); stream 0 of each block
// seeds the member family.
std::uint64_t stream_of(const ExperimentConfig& config, std::size_t n_index, Index trial) {
  return static_cast<std::uint64_t>(n_index) * (static_cast<std::uint64_t>(config.trials) + 2) +
         static_cast<std::uint64_t>(trial) + 1;
}

double elapsed_since(std::chrono::steady_clock::time_point start, bool timing) {
  if (!timing) return 0.0;
  const auto end = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(end - start).count();
}

void run_estimation_modes(const ExperimentConfig& config, ExperimentResult& result,
                          std::ostringstream& summary) {
  const bool subsampled = config.mode == ExperimentMode::subsampled;
  bool certificates_dominate = true;
  bool subsample_within_budget = true;
  Index total_redraws = 0;

  std::vector<std::pair<double, double>> median_worst;
  std::vector<std::pair<double, double>> median_cert;

  for (std::size_t ni = 0; ni < config.n_list.size(); ++ni) {
    const Index n = config.n_list[ni];
    const Pipeline parts = build_pipeline(config, n, config.tail_factor * n);
    const double log_n1 = std::log(static_cast<double>(n) + 1.0);
    const Index m = static_cast<Index>(std::ceil(config.c1 * static_cast<double>(n) * log_n1));

    Rng member_rng(Rng::derive(config.seed, stream_of(config, ni, -1)));
    const std::vector<ComplexVector> members =
        member_family(parts.model, config.random_members, member_rng);

    std::vector<double> worsts, certs;
    for (Index trial = 0; trial < config.trials; ++trial) {
      const auto start = std::chrono::steady_clock::now();
      Rng rng(Rng::derive(config.seed, stream_of(config, ni, trial)));

      ExperimentRow row;
      row.mode = to_string(config.mode);
      row.n = n;
      row.m = m;
      row.trial = trial;

      if (!subsampled) {
        const RealVector points = parts.density.sample(rng, m);
        const WeightedDesign design = assemble_design(parts.density, points, n);
        row.j = m;
        row.s_min_sq = design.spectrum.s_min * design.spectrum.s_min;
        row.worst_error = worst_case_error(design, members);
        row.certificate = design.spectrum.full_rank
                              ? error_certificate(design, parts.model, members).certificate
                              : std::numeric_limits<double>::infinity();
      } else {
        // Redraw until the frame hypothesis of the subsampling step holds;
        // the guarantee is conditional on that high-probability event.
        WeightedDesign design;
        FrameInput frame;
        Index redraws = 0;
        for (;; ++redraws) {
          if (redraws > 50)
            throw std::runtime_error("subsampled mode: frame hypothesis not met in 50 redraws");
          const RealVector points = parts.density.sample(rng, m);
          design = assemble_design(parts.density, points, n);
          frame = frame_from_design(design);
          const auto [lo, hi] = frame.frame_bounds();
          if (lo >= 0.5 && hi <= 1.5) break;
        }
        total_redraws += redraws;
        const SubsampleResult picked = sparsify(frame, config.target_ratio);
        const WeightedDesign folded = fold_subsample(design, picked);
        row.j = static_cast<Index>(picked.indices.size());
        row.s_min_sq = folded.spectrum.s_min * folded.spectrum.s_min;
        row.worst_error = worst_case_error(folded, members);
        row.certificate = folded.spectrum.full_rank
                              ? error_certificate(folded, parts.model, members).certificate
                              : std::numeric_limits<double>::infinity();
        if (row.j > static_cast<Index>(std::ceil(config.target_ratio * double(n))))
          subsample_within_budget = false;
        if (picked.stalled) summary << "note: sparsify stalled at n=" << n
                                    << " trial=" << trial << "\n";
      }

      if (row.certificate < row.worst_error * (1.0 - 1e-9)) certificates_dominate = false;
      worsts.push_back(row.worst_error);
      certs.push_back(row.certificate);
      row.elapsed_ms = elapsed_since(start, config.timing);
      result.rows.push_back(std::move(row));
    }

    const double med_w = median(worsts);
    const double med_c = median(certs);
    summary << "n=" << n << " m=" << m << " median_worst=" << format_csv_value(med_w)
            << " median_certificate=" << format_csv_value(med_c) << "\n";
    if (med_w > 0.0) median_worst.emplace_back(static_cast<double>(n), med_w);
    if (med_c > 0.0 && std::isfinite(med_c))
      median_cert.emplace_back(static_cast<double>(n), med_c);
  }

  if (median_worst.size() >= 4) {
    const RateFit fit = fit_rate(median_worst);
    summary << "fit worst_error: slope=" << format_csv_value(fit.slope)
            << " log_exponent=" << format_csv_value(fit.log_exponent) << "\n";
  }
  if (median_cert.size() >= 4) {
    const RateFit fit = fit_rate(median_cert);
    summary << "fit certificate: slope=" << format_csv_value(fit.slope)
            << " log_exponent=" << format_csv_value(fit.log_exponent) << "\n";
  }
  summary << "check certificate_dominates_worst_error: "
          << (certificates_dominate ? "PASS" : "FAIL") << "\n";
  if (subsampled) {
    summary << "check subsample_within_budget: " << (subsample_within_budget ? "PASS" : "FAIL")
            << "\n";
    summary << "redraws_for_frame_hypothesis=" << total_redraws << "\n";
  }
}

void run_hat_oracle(const ExperimentConfig& config, ExperimentResult& result,
                    std::ostringstream& summary) {
  HatClassSpec spec;
  spec.alpha_len = config.alpha_len;
  spec.beta_h = config.beta_h;
  spec.validate();

  const Index max_n = config.n_list.back();
  const Index dim = config.tail_factor * max_n;
  const OrthonormalSystem system = hat_system(spec, dim, config.quadrature_nodes);
  const ModelClass model = hat_model(spec, system);

  bool oracle_matches = true;
  double worst_gap = 0.0;
  std::vector<std::pair<double, double>> analytic_pairs;

  for (std::size_t ni = 0; ni < config.n_list.size(); ++ni) {
    const Index n = config.n_list[ni];
    const SamplingDensity density(system, n, weight_spec(config), density_options(config));
    RealVector peaks(n);
    for (Index i = 1; i <= n; ++i) peaks[i - 1] = system.hat_peak(i);
    const double analytic = hat_sampling_number(spec, n);
    analytic_pairs.emplace_back(static_cast<double>(n), analytic);

    for (Index trial = 0; trial < config.trials; ++trial) {
      const auto start = std::chrono::steady_clock::now();
      Rng member_rng(Rng::derive(config.seed, stream_of(config, ni, trial)));
      const std::vector<ComplexVector> members =
          member_family(model, config.random_members, member_rng);

      const WeightedDesign design = assemble_design(density, peaks, n);
      ExperimentRow row;
      row.mode = to_string(config.mode);
      row.n = n;
      row.m = n;
      row.j = n;
      row.trial = trial;
      row.s_min_sq = design.spectrum.s_min * design.spectrum.s_min;
      row.worst_error = worst_case_error(design, members);
      row.certificate = error_certificate(design, model, members).certificate;
      row.analytic = analytic;
      row.elapsed_ms = elapsed_since(start, config.timing);

      const double gap = std::abs(row.worst_error - analytic);
      worst_gap = std::max(worst_gap, gap);
      if (gap > 1e-6) oracle_matches = false;
      result.rows.push_back(std::move(row));
    }
    summary << "n=" << n << " analytic=" << format_csv_value(analytic) << "\n";
  }

  summary << "max |worst_error - analytic| = " << format_csv_value(worst_gap) << "\n";
  summary << "check peak_interpolation_matches_oracle: " << (oracle_matches ? "PASS" : "FAIL")
          << "\n";
  if (analytic_pairs.size() >= 4) {
    const RateFit fit = fit_rate(analytic_pairs);
    summary << "fit analytic: slope=" << format_csv_value(fit.slope)
            << " log_exponent=" << format_csv_value(fit.log_exponent) << "\n";
  }
}

void run_concentration(const ExperimentConfig& config, ExperimentResult& result,
                       std::ostringstream& summary) {
  if (config.system != "fourier_torus")
    throw std::invalid_argument("concentration mode requires the fourier_torus system");

  bool fact1_ok = true;
  for (std::size_t ni = 0; ni < config.n_list.size(); ++ni) {
    const Index n = config.n_list[ni];
    ConcentrationConfig cc;
    cc.n = n;
    cc.c1 = config.c1;
    cc.c2 = config.c2;
    cc.weights = weight_spec(config);
    cc.density = density_options(config);
    cc.envelope = DecayEnvelope{config.c, config.alpha, config.beta};
    cc.random_members = config.random_members;

    const auto start = std::chrono::steady_clock::now();
    const ConcentrationReport report =
        concentration_trials(cc, config.trials, Rng::derive(config.seed, ni + 1));
    const double elapsed = elapsed_since(start, config.timing);
    const double per_row = config.timing ? elapsed / double(config.trials) : 0.0;

    for (Index trial = 0; trial < config.trials; ++trial) {
      ExperimentRow row;
      row.mode = to_string(config.mode);
      row.n = n;
      row.m = report.m;
      row.j = report.m;
      row.trial = trial;
      row.s_min_sq = report.s_min_sq[trial];
      row.worst_error = report.deviation.empty() ? 0.0 : report.deviation[trial];
      row.certificate = report.tail_sup_sq[trial];
      row.elapsed_ms = per_row;
      result.rows.push_back(std::move(row));
    }

    const WilsonInterval w1 = wilson_interval(report.fact1_failures, report.trials);
    summary << "n=" << n << " m=" << report.m
            << " fact1_freq=" << format_csv_value(report.fact1_frequency())
            << " threshold=" << format_csv_value(report.fact1_threshold)
            << " wilson_upper=" << format_csv_value(w1.upper) << "\n";
    summary << "n=" << n << " fact2_freq=" << format_csv_value(report.fact2_frequency())
            << " threshold=" << format_csv_value(report.fact2_threshold) << "\n";
    summary << "n=" << n
            << " deviation_freq=" << format_csv_value(report.deviation_frequency())
            << " oliveira_bound=" << format_csv_value(report.oliveira_bound) << "\n";
    if (report.fact1_frequency() >
        report.fact1_threshold + (w1.upper - report.fact1_frequency()))
      fact1_ok = false;
  }
  summary << "check fact1_within_threshold: " << (fact1_ok ? "PASS" : "FAIL") << "\n";
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentResult result;
  std::ostringstream summary;
  summary << "mode=" << to_string(config.mode) << " system=" << config.system
          << " seed=" << config.seed << " trials=" << config.trials << "\n";

  switch (config.mode) {
    case ExperimentMode::random_points:
    case ExperimentMode::subsampled:
      run_estimation_modes(config, result, summary);
      break;
    case ExperimentMode::hat_oracle:
      run_hat_oracle(config, result, summary);
      break;
    case ExperimentMode::concentration:
      run_concentration(config, result, summary);
      break;
  }

  result.summary = summary.str();
  return result;
}

int run_experiment_to_files(const ExperimentConfig& config) {
  const ExperimentResult result = run_experiment(config);

  std::ofstream csv(config.output);
  if (!csv) throw std::runtime_error("cannot open output file: " + config.output);
  csv << kCsvHeader << "\n";
  for (const auto& row : result.rows) csv << format_csv_row(row) << "\n";
  csv.close();

  const std::string summary_path =
      config.summary.empty() ? config.output + ".summary.txt" : config.summary;
  std::ofstream summary(summary_path);
  if (!summary) throw std::runtime_error("cannot open summary file: " + summary_path);
  summary << result.summary;
  summary.close();

  return result.exit_code;
}

}  // namespace samplerec
