// Experiment driver: flat key=value configuration, validation, and the four
// pipeline modes (random_points, subsampled, hat_oracle, concentration)
// emitting a fixed-schema CSV plus a plain-text summary. Identical
// (config, seed) pairs produce byte-identical artifacts.
#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "samplerec/types.hpp"

namespace samplerec {

enum class ExperimentMode { random_points, subsampled, hat_oracle, concentration };

std::string to_string(ExperimentMode mode);
ExperimentMode experiment_mode_from_string(const std::string& text);

struct ExperimentConfig {
  ExperimentMode mode = ExperimentMode::random_points;
  std::string system = "fourier_torus";  // fourier_torus | normalized_hat

  // Decay certificate of the tail_sum model (random_points/subsampled/
  // concentration modes).
  double alpha = 1.0;
  double beta = 0.0;
  double c = 1.0;

  // Hat class (hat_oracle mode, and normalized_hat systems).
  double alpha_len = 3.0;
  double beta_h = 1.0;

  // Density: delta <= 0 selects the default midpoint (1/2 + alpha)/2.
  double delta = 0.0;
  std::string weight_mode = "power";  // power | log
  double delta_prime = 0.0;           // log mode; must exceed beta + 1/2
  Index tail_factor = 64;
  double dropped_tail_tol = 1e-3;
  Index quadrature_nodes = 4096;

  std::vector<Index> n_list = {8, 16, 32};
  double c1 = 16.0;  // m = ceil(c1 * n * log(n+1)); calibrated (see README)
  double c2 = 64.0; // Fact-2 event constant (concentration mode)
  Index trials = 10;
  std::uint64_t seed = 1;
  Index random_members = 8;
  double target_ratio = 13.0;  // subsampled mode

  bool timing = false;  // write real elapsed_ms instead of 0
  std::string output = "experiment.csv";
  std::string summary = "";  // empty: derive from output (.summary.txt)

  /// Effective delta (resolves the <=0 default).
  double effective_delta() const;
  /// Throws std::invalid_argument naming the violated invariant.
  void validate() const;
};

/// Parses flat `key=value` lines; '#' starts a comment; blank lines ignored.
/// Unknown keys throw.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

/// Applies `--key value` style overrides (keys without the leading dashes).
void apply_override(ExperimentConfig& config, const std::string& key,
                    const std::string& value);

/// Serializes every field as key=value, one per line, in a fixed order.
std::string serialize_config(const ExperimentConfig& config);

/// One CSV row; the schema is fixed:
/// mode,n,m,j,trial,s_min_sq,worst_error,certificate,analytic,elapsed_ms
struct ExperimentRow {
  std::string mode;
  Index n = 0;
  Index m = 0;       // drawn points
  Index j = 0;       // points used by the estimator (= m when unsubsampled)
  Index trial = 0;
  double s_min_sq = 0.0;
  double worst_error = 0.0;
  double certificate = 0.0;
  double analytic = 0.0;    // closed-form e_n in hat_oracle mode, else 0
  double elapsed_ms = 0.0;
};

extern const char* const kCsvHeader;

/// Formats a floating-point value with 17 significant digits.
std::string format_csv_value(double value);
std::string format_csv_row(const ExperimentRow& row);

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
  std::string summary;
  int exit_code = 0;
};

/// Runs the configured pipeline in memory.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Runs and writes the CSV + summary artifacts; returns the exit code.
int run_experiment_to_files(const ExperimentConfig& config);

}  // namespace samplerec
