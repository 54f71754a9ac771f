// Command-line entry point: run, sweep, validate, constants.
//
// Exit codes: 0 success, 1 usage error or rejected configuration,
// 2 runtime failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rdo/config.hpp"
#include "rdo/constants.hpp"
#include "rdo/error.hpp"
#include "rdo/harness.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kRejected = 1;
constexpr int kRuntime = 2;

struct CommonArgs {
  std::string config;
  std::vector<std::string> overrides;
  std::string out;
  long long seed = -1;
};

rdo::ExperimentConfig load(const CommonArgs &args) {
  rdo::ExperimentConfig cfg = rdo::load_config(args.config);
  for (const std::string &o : args.overrides) rdo::apply_override(cfg, o);
  if (args.seed >= 0) cfg.seed = static_cast<std::uint64_t>(args.seed);
  if (!args.out.empty()) cfg.output = args.out;
  return cfg;
}

std::string sweep_path(const std::string &base, const std::string &key,
                       const std::string &value) {
  const std::filesystem::path p(base);
  const std::string stem = p.stem().string();
  const std::string ext = p.has_extension() ? p.extension().string() : ".csv";
  return (p.parent_path() / (stem + "_" + key + value + ext)).string();
}

int report_rejection(const std::exception &e) {
  std::cerr << "configuration rejected: " << e.what() << '\n';
  return kRejected;
}

int cmd_validate(const CommonArgs &args) {
  rdo::ExperimentConfig cfg;
  try {
    cfg = load(args);
  } catch (const std::exception &e) {
    return report_rejection(e);
  }
  bool ok = true;
  for (const rdo::ConfigCheck &c : rdo::check_config(cfg)) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    ok = ok && c.passed;
  }
  return ok ? kOk : kRejected;
}

int cmd_constants(const CommonArgs &args) {
  rdo::ExperimentConfig cfg;
  rdo::DerivedConstants k;
  double sigma2 = 0.0;
  try {
    cfg = load(args);
    sigma2 = cfg.weights().sigma2();
    k = rdo::derive(cfg.curvature_context(sigma2));
  } catch (const std::exception &e) {
    return report_rejection(e);
  }
  std::printf("sigma2 = %.12g\n", sigma2);
  std::printf("D = %.12g\n", cfg.diameter_for_constants());
  for (const auto &[name, value] : k.entries())
    std::printf("%s = %.12g\n", name.c_str(), value);
  std::printf("lipschitz = %.12g\n", cfg.effective_lipschitz());
  if (cfg.algorithm == rdo::Algorithm::Bandit)
    std::printf("tau = %.12g\n", cfg.effective_tau());
  return kOk;
}

int run_one(const rdo::ExperimentConfig &cfg) {
  const rdo::RegretTrace trace = rdo::run_experiment(cfg);
  const std::string path = rdo::resolve_output_path(cfg.output);
  rdo::emit_csv(trace, path);
  std::printf("%s: T = %d, final cumulative regret = %.12g\n", path.c_str(),
              cfg.horizon, trace.final_regret());
  return kOk;
}

int cmd_run(const CommonArgs &args) {
  rdo::ExperimentConfig cfg;
  try {
    cfg = load(args);
    rdo::require_valid(cfg);
  } catch (const std::exception &e) {
    return report_rejection(e);
  }
  try {
    return run_one(cfg);
  } catch (const std::exception &e) {
    std::cerr << "run failed: " << e.what() << '\n';
    return kRuntime;
  }
}

int cmd_sweep(const CommonArgs &args, const std::string &param) {
  rdo::ExperimentConfig base;
  std::string key;
  std::vector<std::string> values;
  try {
    base = load(args);
    const auto eq = param.find('=');
    if (eq == std::string::npos || eq == 0)
      throw rdo::Error(rdo::ErrorCode::InvalidConfig,
                       "--param expects key=v1,v2,..., got '" + param + "'");
    key = param.substr(0, eq);
    std::stringstream ss(param.substr(eq + 1));
    for (std::string v; std::getline(ss, v, ',');)
      if (!v.empty()) values.push_back(v);
    if (values.empty())
      throw rdo::Error(rdo::ErrorCode::InvalidConfig, "--param lists no values");
    for (const std::string &v : values) {
      rdo::ExperimentConfig cfg = base;
      cfg.set(key, v);
      rdo::require_valid(cfg);
    }
  } catch (const std::exception &e) {
    return report_rejection(e);
  }
  try {
    for (const std::string &v : values) {
      rdo::ExperimentConfig cfg = base;
      cfg.set(key, v);
      cfg.output = sweep_path(base.output, key, v);
      run_one(cfg);
    }
  } catch (const std::exception &e) {
    std::cerr << "sweep failed: " << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}

void add_common(CLI::App *cmd, CommonArgs &args, bool outputs) {
  cmd->add_option("--config", args.config, "Experiment config file")->required();
  cmd->add_option("--override", args.overrides, "key=value assignment (repeatable)");
  if (outputs) {
    cmd->add_option("--seed", args.seed, "Master seed");
    cmd->add_option("--out", args.out, "Output CSV path");
  }
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Decentralized online Riemannian optimization simulator"};
  app.require_subcommand(1);

  CommonArgs run_args, validate_args, sweep_args, constants_args;
  std::string sweep_param;

  CLI::App *run = app.add_subcommand("run", "Run one experiment and write its regret CSV");
  add_common(run, run_args, true);
  CLI::App *validate = app.add_subcommand("validate", "Check a config's assumptions");
  add_common(validate, validate_args, false);
  CLI::App *sweep = app.add_subcommand("sweep", "Run one experiment per parameter value");
  add_common(sweep, sweep_args, true);
  sweep->add_option("--param", sweep_param, "key=v1,v2,...")->required();
  CLI::App *constants = app.add_subcommand("constants", "Print derived constants");
  add_common(constants, constants_args, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return kRejected;
  }

  if (*run) return cmd_run(run_args);
  if (*validate) return cmd_validate(validate_args);
  if (*sweep) return cmd_sweep(sweep_args, sweep_param);
  if (*constants) return cmd_constants(constants_args);
  return kRejected;
}
