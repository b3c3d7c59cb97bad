// qfc: command-line front end for the conversion-mode simulator.

#include <iostream>

#include <CLI11.hpp>

#include "qfc/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Quantum frequency conversion mode analysis and mode-resolved photon counting"};
  app.require_subcommand(1);

  qfc::ModesOptions modes;
  std::string dump_prefix;
  auto* modes_cmd = app.add_subcommand("modes", "Normal-mode spectrum and profiles for one config");
  modes_cmd->add_option("--config", modes.config_path, "JSON config")->required();
  modes_cmd->add_option("--out", modes.out_prefix, "output prefix")->required();
  modes_cmd->add_option("--truncate", modes.truncation, "number of modes to keep")
      ->check(CLI::PositiveNumber);
  modes_cmd->add_option("--dump-kernel", dump_prefix, "also dump the full kernel blocks as CSV");

  qfc::SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Conversion efficiencies over a parameter range");
  sweep_cmd->add_option("--config", sweep.config_path, "JSON config")->required();
  sweep_cmd->add_option("--param", sweep.param, "sigma_p_ps | eta_mag | length_cm | n_z")->required();
  sweep_cmd->add_option("--from", sweep.from, "first value")->required();
  sweep_cmd->add_option("--to", sweep.to, "last value")->required();
  sweep_cmd->add_option("--steps", sweep.steps, "number of points (>= 2)")->required();
  sweep_cmd->add_option("--out", sweep.out, "output CSV")->required();

  qfc::OverlapOptions overlap;
  auto* overlap_cmd = app.add_subcommand("overlap", "Overlap of the fundamental input modes of two configs");
  overlap_cmd->add_option("--config-a", overlap.config_a, "first JSON config")->required();
  overlap_cmd->add_option("--config-b", overlap.config_b, "second JSON config")->required();
  overlap_cmd->add_option("--out", overlap.out, "output JSON")->required();

  qfc::CascadeOptions cascade;
  std::size_t shots = 0;
  auto* cascade_cmd = app.add_subcommand("cascade", "Photon counting through a stage sequence");
  cascade_cmd->add_option("--plan", cascade.plan_path, "JSON plan")->required();
  auto* shots_opt = cascade_cmd->add_option("--shots", shots, "Monte Carlo shots")->check(CLI::PositiveNumber);
  cascade_cmd->add_option("--seed", cascade.seed, "Monte Carlo seed")->needs(shots_opt);
  cascade_cmd->add_option("--out", cascade.out, "output path")->required();

  qfc::OptimizeOptions opt;
  auto* optimize_cmd = app.add_subcommand("optimize", "Pump-shape search for single-mode conversion");
  optimize_cmd->add_option("--config", opt.config_path, "JSON config with an optimize section")->required();
  optimize_cmd->add_option("--out", opt.out, "output JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*modes_cmd) {
      if (!dump_prefix.empty()) modes.kernel_dump_prefix = dump_prefix;
      qfc::cmd_modes(modes, std::cerr);
    } else if (*sweep_cmd) {
      qfc::cmd_sweep(sweep, std::cerr);
    } else if (*overlap_cmd) {
      qfc::cmd_overlap(overlap, std::cerr);
    } else if (*cascade_cmd) {
      if (*shots_opt) cascade.shots = shots;
      qfc::cmd_cascade(cascade, std::cerr);
    } else if (*optimize_cmd) {
      qfc::cmd_optimize(opt, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
