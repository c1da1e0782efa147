#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "samplerec/analysis.hpp"
#include "samplerec/experiment.hpp"

using namespace samplerec;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("mode names round-trip") {
  for (auto mode : {ExperimentMode::random_points, ExperimentMode::subsampled,
                    ExperimentMode::hat_oracle, ExperimentMode::concentration})
    CHECK(experiment_mode_from_string(to_string(mode)) == mode);
  CHECK_THROWS_AS(experiment_mode_from_string("bogus"), std::invalid_argument);
}

TEST_CASE("configs serialize to a parse-stable fixed form") {
  ExperimentConfig config;
  config.mode = ExperimentMode::subsampled;
  config.alpha = 1.25;
  config.delta = 0.875;
  config.n_list = {4, 8, 16};
  config.trials = 3;
  config.seed = 42;
  config.timing = true;
  config.output = "out.csv";

  const std::string text = serialize_config(config);
  std::istringstream in(text);
  const ExperimentConfig parsed = parse_config(in);
  CHECK(serialize_config(parsed) == text);
  CHECK(parsed.mode == ExperimentMode::subsampled);
  CHECK(parsed.alpha == 1.25);
  CHECK(parsed.delta == 0.875);
  CHECK(parsed.n_list == std::vector<Index>{4, 8, 16});
  CHECK(parsed.seed == 42);
  CHECK(parsed.timing);
}

TEST_CASE("parsing reports the offending key or line") {
  std::istringstream unknown("mode=random_points\nwidget=3\n");
  CHECK_THROWS_WITH_AS(parse_config(unknown),
                       doctest::Contains("unknown config key: widget"),
                       std::invalid_argument);

  std::istringstream bad_value("alpha=fast\n");
  CHECK_THROWS_WITH_AS(parse_config(bad_value), doctest::Contains("alpha"),
                       std::invalid_argument);

  std::istringstream no_eq("mode random_points\n");
  CHECK_THROWS_AS(parse_config(no_eq), std::invalid_argument);

  // Comments, blank lines, and surrounding spaces are accepted.
  std::istringstream relaxed(
      "# an experiment\n\n  mode = hat_oracle  \n n_list = 2, 4 , 8\nseed=9\n");
  const ExperimentConfig parsed = parse_config(relaxed);
  CHECK(parsed.mode == ExperimentMode::hat_oracle);
  CHECK(parsed.n_list == std::vector<Index>{2, 4, 8});
  CHECK(parsed.seed == 9);
}

TEST_CASE("validation names the violated invariant") {
  ExperimentConfig config;

  config.delta = 0.5;  // must exceed 1/2
  CHECK_THROWS_WITH_AS(config.validate(), doctest::Contains("delta"),
                       std::invalid_argument);
  config.delta = 0.75;
  CHECK_NOTHROW(config.validate());

  config.alpha = 0.5;  // tail_sum decay must beat 1/2
  CHECK_THROWS_WITH_AS(config.validate(), doctest::Contains("alpha"),
                       std::invalid_argument);
  config.alpha = 1.0;

  config.n_list = {8, 8};
  CHECK_THROWS_WITH_AS(config.validate(), doctest::Contains("n_list"),
                       std::invalid_argument);
  config.n_list = {8, 16};

  config.trials = 0;
  CHECK_THROWS_WITH_AS(config.validate(), doctest::Contains("trials"),
                       std::invalid_argument);
  config.trials = 2;

  config.mode = ExperimentMode::subsampled;
  config.target_ratio = 1.0;
  CHECK_THROWS_WITH_AS(config.validate(), doctest::Contains("target_ratio"),
                       std::invalid_argument);
  config.target_ratio = 13.0;

  config.weight_mode = "log";
  config.beta = 1.0;
  config.delta_prime = 1.2;  // must exceed beta + 1/2
  CHECK_THROWS_WITH_AS(config.validate(), doctest::Contains("delta_prime"),
                       std::invalid_argument);
  config.delta_prime = 2.0;
  CHECK_NOTHROW(config.validate());
}

TEST_CASE("overrides reuse the config parser") {
  ExperimentConfig config;
  apply_override(config, "mode", "concentration");
  apply_override(config, "n_list", "2,4");
  apply_override(config, "c1", "8");
  apply_override(config, "timing", "1");
  CHECK(config.mode == ExperimentMode::concentration);
  CHECK(config.n_list == std::vector<Index>{2, 4});
  CHECK(config.c1 == 8.0);
  CHECK(config.timing);
  CHECK_THROWS_WITH_AS(apply_override(config, "nope", "1"),
                       doctest::Contains("unknown config key: nope"),
                       std::invalid_argument);
}

TEST_CASE("the CSV schema is pinned byte for byte") {
  CHECK(std::string(kCsvHeader) ==
        "mode,n,m,j,trial,s_min_sq,worst_error,certificate,analytic,elapsed_ms");

  // 17 significant digits survive a round-trip through text.
  for (double v : {1.0, 0.1, 3.0 / 7.0, 1.2345678901234567e-12, 241522.49095723615}) {
    CHECK(std::stod(format_csv_value(v)) == v);
  }

  ExperimentRow row;
  row.mode = "hat_oracle";
  row.n = 4;
  row.m = 4;
  row.j = 4;
  row.trial = 0;
  row.s_min_sq = 2.0;
  row.worst_error = 0.5;
  row.certificate = 1.0;
  row.analytic = 0.25;
  const std::string line = format_csv_row(row);
  CHECK(line == "hat_oracle,4,4,4,0,2,0.5,1,0.25,0");
}

TEST_CASE("random_points runs are reproducible and certified") {
  ExperimentConfig config;
  config.mode = ExperimentMode::random_points;
  config.n_list = {4, 8};
  config.trials = 2;
  config.tail_factor = 64;
  config.dropped_tail_tol = 0.2;
  config.delta = 0.75;
  config.c1 = 8.0;  // lighter than the calibrated default; fine for a smoke run
  config.seed = 5;
  config.validate();

  const ExperimentResult result = run_experiment(config);
  REQUIRE(result.rows.size() == 4);
  CHECK(result.exit_code == 0);
  for (const ExperimentRow& row : result.rows) {
    CHECK(row.mode == "random_points");
    CHECK(row.j == row.m);
    CHECK(row.s_min_sq > 0.0);
    CHECK(row.worst_error > 0.0);
    CHECK(row.certificate >= row.worst_error);
    CHECK(row.analytic == 0.0);
    CHECK(row.elapsed_ms == 0.0);  // timing off: byte-stable artifacts
  }
  // Rows are grouped by n in n_list order, trials within.
  CHECK(result.rows[0].n == 4);
  CHECK(result.rows[1].n == 4);
  CHECK(result.rows[2].n == 8);
  CHECK(result.rows[3].n == 8);
  CHECK(result.rows[0].trial == 0);
  CHECK(result.rows[1].trial == 1);
  // m = ceil(c1 n log(n+1)).
  CHECK(result.rows[0].m == Index(std::ceil(8.0 * 4.0 * std::log(5.0))));
  CHECK(result.rows[2].m == Index(std::ceil(8.0 * 8.0 * std::log(9.0))));

  const ExperimentResult rerun = run_experiment(config);
  REQUIRE(rerun.rows.size() == result.rows.size());
  for (std::size_t i = 0; i < result.rows.size(); ++i)
    CHECK(format_csv_row(rerun.rows[i]) == format_csv_row(result.rows[i]));
  CHECK(rerun.summary == result.summary);
  CHECK(result.summary.find("certificate_dominates_worst_error") != std::string::npos);
}

TEST_CASE("hat_oracle rows carry the closed-form analytic column") {
  ExperimentConfig config;
  config.mode = ExperimentMode::hat_oracle;
  config.system = "normalized_hat";
  config.alpha_len = 3.0;
  config.beta_h = 1.0;
  config.delta = 1.75;
  config.tail_factor = 32;
  config.n_list = {2, 4};
  config.trials = 1;
  config.validate();

  const ExperimentResult result = run_experiment(config);
  REQUIRE(result.rows.size() == 2);
  HatClassSpec spec;
  for (const ExperimentRow& row : result.rows) {
    CHECK(row.mode == "hat_oracle");
    CHECK(row.m == row.n);  // one peak per head hat
    CHECK(row.j == row.n);
    CHECK(row.analytic == hat_sampling_number(spec, row.n));
    CHECK(std::abs(row.worst_error - row.analytic) < 1e-6);
    CHECK(row.certificate >= row.worst_error);
  }
  CHECK(result.summary.find("peak_interpolation_matches_oracle") != std::string::npos);
}

TEST_CASE("subsampled rows stay within the point budget") {
  ExperimentConfig config;
  config.mode = ExperimentMode::subsampled;
  config.n_list = {4};
  config.trials = 2;
  config.tail_factor = 16;
  config.dropped_tail_tol = 0.4;
  config.delta = 0.75;
  config.target_ratio = 13.0;
  config.seed = 11;
  config.validate();

  const ExperimentResult result = run_experiment(config);
  REQUIRE(result.rows.size() == 2);
  for (const ExperimentRow& row : result.rows) {
    CHECK(row.mode == "subsampled");
    CHECK(row.m == Index(std::ceil(16.0 * 4.0 * std::log(5.0))));
    CHECK(row.j <= Index(std::ceil(13.0 * 4.0)));
    CHECK(row.j >= row.n);
    CHECK(row.j < row.m);
    CHECK(row.s_min_sq > 0.0);
    CHECK(row.certificate >= row.worst_error);
  }
  CHECK(result.summary.find("subsample_within_budget") != std::string::npos);
}

TEST_CASE("concentration rows expose the trial statistics") {
  ExperimentConfig config;
  config.mode = ExperimentMode::concentration;
  config.n_list = {8};
  config.trials = 6;
  config.c1 = 4.0;
  config.tail_factor = 16;
  config.dropped_tail_tol = 0.5;
  config.delta = 0.75;
  config.seed = 3;
  config.validate();

  const ExperimentResult result = run_experiment(config);
  REQUIRE(result.rows.size() == 6);
  for (Index t = 0; t < 6; ++t) {
    const ExperimentRow& row = result.rows[std::size_t(t)];
    CHECK(row.mode == "concentration");
    CHECK(row.n == 8);
    CHECK(row.trial == t);
    CHECK(row.s_min_sq > 0.0);
    CHECK(row.worst_error >= 0.0);   // operator deviation
    CHECK(row.certificate >= 0.0);   // tail supremum squared
    CHECK(row.analytic == 0.0);
  }
  CHECK(result.summary.find("fact1_within_threshold") != std::string::npos);
}

TEST_CASE("artifacts are written with the header first") {
  ExperimentConfig config;
  config.mode = ExperimentMode::hat_oracle;
  config.system = "normalized_hat";
  config.delta = 1.75;
  config.tail_factor = 32;
  config.n_list = {2};
  config.trials = 1;
  config.output = "tmp_experiment_test.csv";
  config.validate();

  const int code = run_experiment_to_files(config);
  CHECK(code == 0);
  const std::string csv = slurp("tmp_experiment_test.csv");
  CHECK(csv.rfind("mode,n,m,j,trial,s_min_sq,worst_error,certificate,analytic,elapsed_ms\n",
                  0) == 0);
  CHECK(csv.find("hat_oracle,2,2,2,0,") != std::string::npos);
  const std::string summary = slurp("tmp_experiment_test.csv.summary.txt");
  CHECK(summary.find("mode=hat_oracle") != std::string::npos);
  std::remove("tmp_experiment_test.csv");
  std::remove("tmp_experiment_test.csv.summary.txt");
}
