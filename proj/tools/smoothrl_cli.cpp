#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "smoothrl/smoothrl.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int exit_code(srl_status s) {
  switch (s) {
    case SRL_OK: return kExitOk;
    case SRL_E_CONFIG: return kExitConfig;
    case SRL_E_NUMERICAL:
    case SRL_E_DOMAIN:
    case SRL_E_BUDGET: return kExitNumerical;
    default: return kExitFailure;
  }
}

int report(srl_status s, const char* what) {
  if (s != SRL_OK) std::fprintf(stderr, "smoothrl %s: %s\n", what, srl_last_error());
  return exit_code(s);
}

int cmd_run(const std::string& config, const std::string& out_dir) {
  srl_experiment* exp = nullptr;
  srl_status s = srl_experiment_load(config.c_str(), &exp);
  if (s != SRL_OK) return report(s, "run");
  if (!out_dir.empty()) s = srl_experiment_set_output_dir(exp, out_dir.c_str());
  if (s == SRL_OK) s = srl_experiment_run(exp);
  if (s == SRL_OK || srl_experiment_row_count(exp) > 0)
    std::printf("rows=%zu failed_runs=%zu\n", srl_experiment_row_count(exp), srl_experiment_failed_runs(exp));
  const int code = report(s, "run");
  srl_experiment_destroy(exp);
  return code;
}

int cmd_validate(const std::string& suite) {
  char* text = nullptr;
  int passed = 0;
  const srl_status s = srl_validate(suite.c_str(), &text, &passed);
  if (s != SRL_OK) return report(s, "validate");
  std::fputs(text, stdout);
  std::printf("%s %s\n", suite.c_str(), passed ? "PASS" : "FAIL");
  srl_string_free(text);
  return passed ? kExitOk : kExitFailure;
}

int cmd_oracle(const std::string& env, std::size_t state_points, std::size_t action_points) {
  double v = 0.0;
  const srl_status s = srl_dp_oracle(env.c_str(), state_points, action_points, &v);
  if (s != SRL_OK) return report(s, "oracle");
  std::printf("%s %.10g\n", env.c_str(), v);
  return kExitOk;
}

int cmd_plot(const std::string& in, const std::string& out) { return report(srl_plot(in.c_str(), out.c_str()), "plot"); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Smooth-MDP reinforcement learning experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(srl_version()));

  std::string config, out_dir;
  auto* run = app.add_subcommand("run", "Run an experiment config");
  run->add_option("--config", config, "Experiment config file")->required();
  run->add_option("--out", out_dir, "Override output_dir");

  std::string suite;
  auto* validate = app.add_subcommand("validate", "Run a numerical validation suite");
  validate->add_option("--suite", suite, "Suite name")
      ->required()
      ->check(CLI::IsMember({"orthonormality", "rate", "ibe"}));

  std::string env;
  std::size_t state_points = 0, action_points = 0;
  auto* oracle = app.add_subcommand("oracle", "Dynamic-programming estimate of V*(s_1)");
  oracle->add_option("--env", env, "lqr_left or lqr_right")->required();
  oracle->add_option("--state-points", state_points, "Grid points per state coordinate");
  oracle->add_option("--action-points", action_points, "Grid points per action coordinate");

  std::string in, out;
  auto* plot = app.add_subcommand("plot", "Render a returns or aggregate CSV as SVG");
  plot->add_option("--in", in, "Input CSV")->required();
  plot->add_option("--out", out, "Output SVG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  if (*run) return cmd_run(config, out_dir);
  if (*validate) return cmd_validate(suite);
  if (*oracle) return cmd_oracle(env, state_points, action_points);
  return cmd_plot(in, out);
}
