#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "rbsmc/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Rota-Baxter deformed sliding-mode control for delayed "
               "discrete-time systems"};
  app.require_subcommand(1);

  std::string config_path;
  rbsmc::cli::CliOptions opts;
  std::uint64_t seed = 0;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration")
        ->required();
    sub->add_option("--out", opts.out_override,
                    "output directory (overrides config output_dir)");
    sub->add_option("--seed", seed,
                    "seed for sampling and the uniform disturbance generator");
    sub->add_option("--tolerance-scale", opts.tolerance_scale,
                    "multiplies all residual tolerances (default 1)");
    return sub;
  };

  CLI::App* verify = add_common(app.add_subcommand(
      "verify-rb", "check the operator identities on sampled matrices"));
  CLI::App* design = add_common(app.add_subcommand(
      "design", "run the six-step sliding-mode design procedure"));
  CLI::App* certify = add_common(app.add_subcommand(
      "certify", "minimize gamma and emit the stability certificate"));
  CLI::App* spectral = add_common(app.add_subcommand(
      "spectral", "roots of the delayed characteristic equation"));
  CLI::App* simulate = add_common(app.add_subcommand(
      "simulate", "roll out the closed-loop or reduced dynamics"));

  CLI11_PARSE(app, argc, argv);

  try {
    const rbsmc::cli::RunConfig cfg = rbsmc::cli::load_config(config_path);
    for (CLI::App* sub : {verify, design, certify, spectral, simulate})
      if (sub->parsed() && sub->count("--seed") > 0) opts.seed = seed;

    if (verify->parsed()) return rbsmc::cli::cmd_verify_rb(cfg, opts);
    if (design->parsed()) return rbsmc::cli::cmd_design(cfg, opts);
    if (certify->parsed()) return rbsmc::cli::cmd_certify(cfg, opts);
    if (spectral->parsed()) return rbsmc::cli::cmd_spectral(cfg, opts);
    if (simulate->parsed()) return rbsmc::cli::cmd_simulate(cfg, opts);
  } catch (const rbsmc::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 3;
  } catch (const rbsmc::Infeasible& e) {
    std::fprintf(stderr, "infeasible: %s\n", e.what());
    return 2;
  } catch (const rbsmc::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
