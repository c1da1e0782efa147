// Command-line driver: run experiments from key=value configs, validate
// configs, and print the closed-form hat-class oracle table.
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "samplerec/analysis.hpp"
#include "samplerec/experiment.hpp"

namespace {

int run_command(const std::string& config_path, const std::vector<std::string>& extras) {
  samplerec::ExperimentConfig config = samplerec::load_config(config_path);

  if (extras.size() % 2 != 0)
    throw std::invalid_argument("overrides must come in --key value pairs");
  for (std::size_t i = 0; i < extras.size(); i += 2) {
    std::string key = extras[i];
    if (key.rfind("--", 0) != 0)
      throw std::invalid_argument("expected an option of the form --key, got: " + key);
    key = key.substr(2);
    samplerec::apply_override(config, key, extras[i + 1]);
  }

  config.validate();
  const int code = samplerec::run_experiment_to_files(config);
  const std::string summary_path =
      config.summary.empty() ? config.output + ".summary.txt" : config.summary;
  std::cout << "wrote " << config.output << "\n";
  std::cout << "wrote " << summary_path << "\n";
  return code;
}

int validate_command(const std::string& config_path) {
  samplerec::ExperimentConfig config = samplerec::load_config(config_path);
  config.validate();
  std::cout << samplerec::serialize_config(config);
  return 0;
}

int oracle_command(double alpha_len, double beta_h, samplerec::Index n_max) {
  samplerec::HatClassSpec spec;
  spec.alpha_len = alpha_len;
  spec.beta_h = beta_h;
  spec.validate();
  if (n_max < 1) throw std::invalid_argument("n-max must be >= 1");

  std::cout << "n,analytic_e_n,kolmogorov_d_n\n";
  for (samplerec::Index n = 1; n <= n_max; ++n) {
    std::cout << n << ',' << samplerec::format_csv_value(samplerec::hat_sampling_number(spec, n))
              << ',' << samplerec::format_csv_value(samplerec::hat_kolmogorov_width(spec, n))
              << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"density-weighted least-squares sampling recovery experiments"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "run an experiment from a config file");
  run->add_option("--config", config_path, "path to key=value config")->required();
  run->allow_extras();

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "check a config and echo resolved values");
  validate->add_option("--config", validate_path, "path to key=value config")->required();

  double alpha_len = 3.0;
  double beta_h = 1.0;
  samplerec::Index n_max = 64;
  auto* oracle = app.add_subcommand("oracle", "print the closed-form hat-class table");
  oracle->add_option("--alpha-len", alpha_len, "length decay exponent (> 1)");
  oracle->add_option("--beta-h", beta_h, "height decay exponent (> 0)");
  oracle->add_option("--n-max", n_max, "largest n in the table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (run->parsed()) return run_command(config_path, run->remaining());
    if (validate->parsed()) return validate_command(validate_path);
    return oracle_command(alpha_len, beta_h, n_max);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
