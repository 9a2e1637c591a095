#include <CLI11.hpp>

#include "appe/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "Simulator and analysis toolkit for anonymous, private phase estimation "
      "on an entangled sensor network"};
  app.require_subcommand(1);
  int exit_code = appe::kExitOk;

  appe::RunOptions run_opts;
  CLI::App* run = app.add_subcommand("run", "Execute one protocol run");
  run->add_option("--config", run_opts.config_path, "JSON run configuration")
      ->required();
  run->add_option("--out-dir", run_opts.out_dir, "Directory for result files");
  run->add_option("--seed", run_opts.seed, "Seed override (beats APPE_SEED)");
  run->callback([&] { exit_code = appe::cmd_run(run_opts); });

  appe::SweepOptions sweep_opts;
  CLI::App* sweep = app.add_subcommand("sweep", "Run a parameter sweep");
  sweep->add_option("--config", sweep_opts.config_path, "JSON run configuration")
      ->required();
  sweep
      ->add_option("--sweep", sweep_opts.axis,
                   "axis=start:stop:step over alpha|length|ones|theta_bar|seed")
      ->required();
  sweep->add_option("--seeds", sweep_opts.seeds, "Seed replicas per grid point");
  sweep->add_option("--out-dir", sweep_opts.out_dir, "Directory for sweep.csv");
  sweep->add_option("--seed", sweep_opts.seed, "Base seed override");
  sweep->callback([&] { exit_code = appe::cmd_sweep(sweep_opts); });

  appe::VerifyCmdOptions verify_opts;
  bool only_privacy = false, only_anonymity = false;
  CLI::App* verify = app.add_subcommand("verify", "Run invariant check suites");
  verify->add_option(
      "--suite", verify_opts.suite,
      "all|core|subprotocols|integrity|privacy|anonymity");
  verify->add_flag("--privacy", only_privacy, "Shorthand for --suite privacy");
  verify->add_flag("--anonymity", only_anonymity,
                   "Shorthand for --suite anonymity");
  verify->add_option("--mutation", verify_opts.mutation,
                     "Negative-control mutation (alice-announces-true)");
  verify->add_option("--junit", verify_opts.junit_path,
                     "Write a JUnit-style XML result file");
  verify->add_option("--seed", verify_opts.seed, "Seed for sampled checks");
  verify->callback([&] {
    if (only_privacy) verify_opts.suite = "privacy";
    if (only_anonymity) verify_opts.suite = "anonymity";
    exit_code = appe::cmd_verify_suite(verify_opts);
  });

  appe::BoundsOptions bounds_opts;
  CLI::App* bounds =
      app.add_subcommand("bounds", "Tabulate the closed-form bias bounds");
  bounds->add_option("--theta", bounds_opts.theta, "Mean phase");
  bounds->add_option("--delta", bounds_opts.delta, "Observed failure rate");
  bounds->add_option("--length", bounds_opts.length, "Total rounds L");
  bounds->add_option("--ones", bounds_opts.ones, "Verification rounds k");
  bounds->add_option("--eta", bounds_opts.eta, "Grid start:stop:step");
  bounds->add_option("--out", bounds_opts.out_path, "Output CSV path");
  bounds->callback([&] { exit_code = appe::cmd_bounds(bounds_opts); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? appe::kExitOk : appe::kExitConfigError;
  }
  return exit_code;
}
