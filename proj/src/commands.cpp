#include "qfc/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "qfc/config.hpp"
#include "qfc/csv.hpp"
#include "qfc/propagator.hpp"
#include "qfc/schmidt.hpp"
#include "qfc/validation.hpp"

namespace qfc {

namespace {

RunConfig load_with_warnings(const std::string& path, std::ostream& diag) {
  std::vector<std::string> warnings;
  RunConfig c = load_config(path, &warnings);
  for (const auto& w : warnings) diag << "warning: " << path << ": " << w << '\n';
  return c;
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
  out.close();
  if (out.fail()) throw std::runtime_error("write to " + path + " failed");
}

SchmidtDecomposition analyze(const RunConfig& c, const PumpShape& pump, std::size_t truncation,
                             std::ostream& diag) {
  const auto kernel = build_kernel(c.waveguide, pump, c.grid, c.zgrid, KernelPorts::SignalOnly);
  auto dec = decompose(kernel, truncation, c.analysis);
  for (const auto& w : dec.warnings) diag << "warning: " << w << '\n';
  return dec;
}

PumpShape with_sigma(const PumpShape& pump, double sigma) {
  if (auto g = std::get_if<GaussianPump>(&pump)) {
    GaussianPump out = *g;
    out.sigma_p_ps = sigma;
    return out;
  }
  if (auto h = std::get_if<HarmonicGaussianPump>(&pump)) {
    HarmonicGaussianPump out = *h;
    out.sigma_p_ps = sigma;
    return out;
  }
  throw ConfigError("sweep over sigma_p_ps needs a gaussian or harmonic_gaussian pump");
}

}  // namespace

void cmd_modes(const ModesOptions& opts, std::ostream& diag) {
  const RunConfig c = load_with_warnings(opts.config_path, diag);
  const PumpShape& pump = c.require_pump();
  const auto ports = opts.kernel_dump_prefix ? KernelPorts::Full : KernelPorts::SignalOnly;
  const auto kernel = build_kernel(c.waveguide, pump, c.grid, c.zgrid, ports);
  if (opts.kernel_dump_prefix) write_kernel_csv(kernel, *opts.kernel_dump_prefix);
  const auto dec = decompose(kernel, opts.truncation, c.analysis);
  for (const auto& w : dec.warnings) diag << "warning: " << w << '\n';

  CsvWriter spectrum(opts.out_prefix + "_spectrum.csv");
  spectrum.header({"n", "lambda", "lambda_sq"});
  for (std::size_t n = 0; n < dec.lambdas.size(); ++n)
    spectrum.row(std::vector<double>{static_cast<double>(n), dec.lambdas[n], dec.lambdas[n] * dec.lambdas[n]});
  spectrum.close();

  CsvWriter modes(opts.out_prefix + "_modes.csv");
  std::vector<std::string> header{"t_ps"};
  for (std::size_t n = 0; n < dec.lambdas.size(); ++n) {
    const auto s = std::to_string(n);
    for (const char* col : {"re_psi_", "im_psi_", "re_phi_", "im_phi_"}) header.push_back(col + s);
  }
  modes.header(header);
  for (std::size_t j = 0; j < c.grid.n_time; ++j) {
    std::vector<double> row{c.grid.time(j)};
    for (std::size_t n = 0; n < dec.lambdas.size(); ++n) {
      const cplx psi = dec.input_modes[n][j], phi = dec.output_modes[n][j];
      row.insert(row.end(), {psi.real(), psi.imag(), phi.real(), phi.imag()});
    }
    modes.row(row);
  }
  modes.close();
}

const std::vector<std::string>& sweep_parameters() {
  static const std::vector<std::string> names{"sigma_p_ps", "eta_mag", "length_cm", "n_z"};
  return names;
}

void cmd_sweep(const SweepOptions& opts, std::ostream& diag) {
  const auto& names = sweep_parameters();
  if (std::find(names.begin(), names.end(), opts.param) == names.end())
    throw ConfigError("unknown sweep parameter '" + opts.param +
                      "' (valid: sigma_p_ps, eta_mag, length_cm, n_z)");
  if (opts.steps < 2) throw ConfigError("sweep needs at least 2 steps");
  const RunConfig base = load_with_warnings(opts.config_path, diag);
  const PumpShape& base_pump = base.require_pump();

  CsvWriter out(opts.out);
  std::vector<std::string> header{"param_value"};
  for (std::size_t n = 0; n < kSweepModes; ++n) header.push_back("lambda_sq_" + std::to_string(n));
  out.header(header);

  for (std::size_t i = 0; i < opts.steps; ++i) {
    const double value = i + 1 == opts.steps
                             ? opts.to
                             : opts.from + (opts.to - opts.from) * static_cast<double>(i) /
                                               static_cast<double>(opts.steps - 1);
    RunConfig c = base;
    PumpShape pump = base_pump;
    if (opts.param == "sigma_p_ps") {
      pump = with_sigma(base_pump, value);
    } else if (opts.param == "eta_mag") {
      c.waveguide.eta_mag = value;
    } else if (opts.param == "length_cm") {
      c.waveguide.length_cm = value;
    } else {
      if (value < 1.0 || std::abs(value - std::round(value)) > 1e-9)
        throw ConfigError("n_z sweep values must be positive integers");
      c.zgrid.n_z = static_cast<std::size_t>(std::llround(value));
    }
    for (const auto& w : require_valid(c.waveguide, c.grid, c.zgrid, pump))
      diag << "warning: " << opts.param << "=" << format_number(value) << ": " << w << '\n';
    const auto eff = conversion_efficiencies(analyze(c, pump, kSweepModes, diag));
    std::vector<double> row{value};
    for (std::size_t n = 0; n < kSweepModes; ++n) row.push_back(n < eff.size() ? eff[n] : 0.0);
    out.row(row);
  }
  out.close();
}

void cmd_overlap(const OverlapOptions& opts, std::ostream& diag) {
  const RunConfig a = load_with_warnings(opts.config_a, diag);
  const RunConfig b = load_with_warnings(opts.config_b, diag);
  if (!(a.grid == b.grid) || !(a.zgrid == b.zgrid))
    throw ConfigError("overlap: the two configs use different grids");
  if (!(a.waveguide == b.waveguide))
    throw ConfigError("overlap: the two configs use different waveguide sections");
  const auto dec_a = analyze(a, a.require_pump(), 1, diag);
  const auto dec_b = analyze(b, b.require_pump(), 1, diag);
  write_json(opts.out, {{"overlap_fundamental", fundamental_overlap(dec_a, dec_b)},
                        {"lambda_sq_0_a", conversion_efficiencies(dec_a).front()},
                        {"lambda_sq_0_b", conversion_efficiencies(dec_b).front()}});
}

void cmd_cascade(const CascadeOptions& opts, std::ostream& diag) {
  const RunConfig c = load_with_warnings(opts.plan_path, diag);
  if (!c.cascade) throw ConfigError(opts.plan_path + ": plan has no 'cascade' section");

  bool exact_ok = true;
  for (const auto& in : c.cascade->inputs)
    if (const auto* f = std::get_if<Fock>(&in.statistics); f && f->n > kMaxExactPhotons)
      exact_ok = false;
  if (!exact_ok && !opts.shots)
    throw std::domain_error("Fock input above " + std::to_string(kMaxExactPhotons) +
                            " photons: exact distribution refused, rerun with --shots for Monte Carlo");

  const ResolvedCascade cascade = resolve_cascade(c);
  if (!opts.shots) {
    write_json(opts.out, distribution_to_json(exact_count_distribution(cascade.stages, cascade.inputs)));
    return;
  }

  const auto records = sample_counts(cascade.stages, cascade.inputs, *opts.shots, opts.seed);
  CsvWriter out(opts.out);
  std::vector<std::string> header{"shot"};
  for (std::size_t k = 0; k < cascade.stages.size(); ++k) header.push_back("stage_" + std::to_string(k + 1));
  out.header(header);
  std::vector<long long> row(cascade.stages.size() + 1);
  for (std::size_t s = 0; s < records.size(); ++s) {
    row[0] = static_cast<long long>(s);
    for (std::size_t k = 0; k < cascade.stages.size(); ++k) row[k + 1] = records[s].per_stage_counts[k];
    out.row(row);
  }
  out.close();
  if (exact_ok)
    write_json(opts.out + ".exact.json",
               distribution_to_json(exact_count_distribution(cascade.stages, cascade.inputs)));
}

void cmd_optimize(const OptimizeOptions& opts, std::ostream& diag) {
  const RunConfig c = load_with_warnings(opts.config_path, diag);
  if (!c.optimize) throw ConfigError(opts.config_path + ": config has no 'optimize' section");
  const auto problem = optimization_problem(c);
  const auto result = optimize(problem, c.optimize->seed);
  if (result.budget_exhausted_early)
    diag << "warning: evaluation budget exhausted before the first simplex was complete\n";
  write_json(opts.out, result_to_json(result));
}

}  // namespace qfc
