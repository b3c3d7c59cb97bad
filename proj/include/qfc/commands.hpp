#pragma once

// Implementations behind the `qfc` subcommands. Each writes its data files
// and sends validation warnings to `diag`; failures throw.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace qfc {

struct ModesOptions {
  std::string config_path;
  std::string out_prefix;
  std::size_t truncation = 6;
  std::optional<std::string> kernel_dump_prefix;
};
/// Writes <prefix>_spectrum.csv (n, lambda, lambda_sq) and <prefix>_modes.csv
/// (t_ps, re_psi_n, im_psi_n, re_phi_n, im_phi_n for each kept mode).
void cmd_modes(const ModesOptions& opts, std::ostream& diag);

inline constexpr std::size_t kSweepModes = 6;
const std::vector<std::string>& sweep_parameters();

struct SweepOptions {
  std::string config_path;
  std::string param;
  double from = 0.0;
  double to = 0.0;
  std::size_t steps = 2;
  std::string out;
};
/// CSV columns: param_value, lambda_sq_0 .. lambda_sq_5.
void cmd_sweep(const SweepOptions& opts, std::ostream& diag);

struct OverlapOptions {
  std::string config_a;
  std::string config_b;
  std::string out;
};
/// JSON: overlap_fundamental, lambda_sq_0_a, lambda_sq_0_b.
void cmd_overlap(const OverlapOptions& opts, std::ostream& diag);

struct CascadeOptions {
  std::string plan_path;
  std::optional<std::size_t> shots;
  std::uint64_t seed = 0;
  std::string out;
};
/// Without shots: exact distribution JSON at `out`. With shots: sampled
/// counts CSV (shot, stage_1 .. stage_K) at `out`, plus the exact
/// distribution at `out`.exact.json when the input is small enough.
void cmd_cascade(const CascadeOptions& opts, std::ostream& diag);

struct OptimizeOptions {
  std::string config_path;
  std::string out;
};
void cmd_optimize(const OptimizeOptions& opts, std::ostream& diag);

}  // namespace qfc
