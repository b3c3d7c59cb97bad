#include "qfc/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "qfc/validation.hpp"

namespace qfc {

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : j.items())
    if (!allowed.contains(key)) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
      throw ConfigError(where + ": unknown key '" + key + "' (allowed: " + list + ")");
    }
}

const json& need(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing required key '" + key + "'");
  return j.at(key);
}

double number(const json& j, const std::string& key, const std::string& where) {
  const json& v = need(j, key, where);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return v.get<double>();
}

double number_or(const json& j, const std::string& key, double fallback, const std::string& where) {
  return j.contains(key) ? number(j, key, where) : fallback;
}

std::size_t count(const json& j, const std::string& key, const std::string& where) {
  const json& v = need(j, key, where);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw ConfigError(where + "." + key + ": expected a nonnegative integer");
  return v.get<std::size_t>();
}

std::string text(const json& j, const std::string& key, const std::string& where) {
  const json& v = need(j, key, where);
  if (!v.is_string()) throw ConfigError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

ModeSpec mode_from_json(const json& j, const std::string& where) {
  const std::string type = text(j, "type", where);
  ModeSpec m;
  if (type == "schmidt") {
    check_keys(j, {"type", "stage", "index"}, where);
    m.kind = ModeSpec::Kind::Schmidt;
    m.stage = j.contains("stage") ? count(j, "stage", where) : 0;
    m.index = j.contains("index") ? count(j, "index", where) : 0;
  } else if (type == "envelope") {
    check_keys(j, {"type", "shape"}, where);
    m.kind = ModeSpec::Kind::Envelope;
    m.envelope = pump_from_json(need(j, "shape", where));
  } else {
    throw ConfigError(where + ".type: expected 'schmidt' or 'envelope', got '" + type + "'");
  }
  return m;
}

InputSpec input_from_json(const json& j, const std::string& where) {
  check_keys(j, {"mode", "statistics"}, where);
  InputSpec in{mode_from_json(need(j, "mode", where), where + ".mode"), Fock{1}};
  const json& s = need(j, "statistics", where);
  const std::string sw = where + ".statistics";
  const std::string type = text(s, "type", sw);
  if (type == "fock") {
    check_keys(s, {"type", "n"}, sw);
    in.statistics = Fock{static_cast<int>(count(s, "n", sw))};
  } else if (type == "coherent") {
    check_keys(s, {"type", "alpha_re", "alpha_im"}, sw);
    in.statistics = Coherent{cplx(number_or(s, "alpha_re", 0.0, sw), number_or(s, "alpha_im", 0.0, sw))};
  } else {
    throw ConfigError(sw + ".type: expected 'fock' or 'coherent', got '" + type + "'");
  }
  return in;
}

CascadeSection cascade_from_json(const json& j) {
  const std::string where = "cascade";
  check_keys(j, {"stages", "input"}, where);
  CascadeSection c;
  const json& stages = need(j, "stages", where);
  if (!stages.is_array() || stages.empty())
    throw ConfigError("cascade.stages: expected a nonempty array");
  for (std::size_t k = 0; k < stages.size(); ++k) {
    const std::string sw = "cascade.stages[" + std::to_string(k) + "]";
    check_keys(stages[k], {"pump", "detector"}, sw);
    StageSpec s{pump_from_json(need(stages[k], "pump", sw)), std::nullopt};
    if (stages[k].contains("detector")) s.detector = detector_from_json(stages[k]["detector"]);
    c.stages.push_back(std::move(s));
  }
  const json& input = need(j, "input", where);
  if (input.is_array()) {
    for (std::size_t i = 0; i < input.size(); ++i)
      c.inputs.push_back(input_from_json(input[i], "cascade.input[" + std::to_string(i) + "]"));
  } else {
    c.inputs.push_back(input_from_json(input, "cascade.input"));
  }
  if (c.inputs.empty()) throw ConfigError("cascade.input: no input states");
  return c;
}

OptimizeSection optimize_from_json(const json& j) {
  const std::string where = "optimize";
  check_keys(j, {"family", "free", "hermite_order", "objective", "epsilon", "bounds", "budget",
                 "restarts", "tolerance", "seed"},
             where);
  OptimizeSection o;
  const std::string family = j.contains("family") ? text(j, "family", where) : "gaussian";
  if (family == "gaussian") {
    o.family.kind = PumpFamily::Kind::Gaussian;
    const json& free = need(j, "free", where);
    if (!free.is_array()) throw ConfigError("optimize.free: expected an array of names");
    try {
      for (const auto& name : free) o.family.free.push_back(gaussian_param_from_string(name.get<std::string>()));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("optimize.free: ") + e.what());
    }
  } else if (family == "hermite") {
    o.family.kind = PumpFamily::Kind::Hermite;
    o.family.hermite_order = static_cast<int>(count(j, "hermite_order", where));
  } else {
    throw ConfigError("optimize.family: expected 'gaussian' or 'hermite', got '" + family + "'");
  }
  const std::string objective = j.contains("objective") ? text(j, "objective", where) : "selectivity";
  if (objective == "selectivity") {
    o.objective.kind = Objective::Kind::Selectivity;
  } else if (objective == "efficiency_floor") {
    o.objective.kind = Objective::Kind::EfficiencyFloor;
    o.objective.epsilon = number(j, "epsilon", where);
  } else {
    throw ConfigError("optimize.objective: expected 'selectivity' or 'efficiency_floor'");
  }
  const json& bounds = need(j, "bounds", where);
  if (!bounds.is_array()) throw ConfigError("optimize.bounds: expected an array of [lo, hi]");
  for (const auto& b : bounds) {
    if (!b.is_array() || b.size() != 2 || !b[0].is_number() || !b[1].is_number())
      throw ConfigError("optimize.bounds: each entry must be [lo, hi]");
    o.bounds.emplace_back(b[0].get<double>(), b[1].get<double>());
  }
  if (j.contains("budget")) o.budget = count(j, "budget", where);
  if (j.contains("restarts")) o.restarts = count(j, "restarts", where);
  o.tolerance = number_or(j, "tolerance", o.tolerance, where);
  if (j.contains("seed")) o.seed = need(j, "seed", where).get<std::uint64_t>();
  return o;
}

}  // namespace

const PumpShape& RunConfig::require_pump() const {
  if (!pump) throw ConfigError("config has no 'pump' section");
  return *pump;
}

PumpShape pump_from_json(const json& j) {
  const std::string where = "pump";
  const std::string type = text(j, "type", where);
  if (type == "gaussian") {
    check_keys(j, {"type", "sigma_p_ps", "delay_ps", "amplitude", "chirp_per_ps2"}, where);
    return GaussianPump{number(j, "sigma_p_ps", where), number_or(j, "delay_ps", 0.0, where),
                        number_or(j, "amplitude", 1.0, where),
                        number_or(j, "chirp_per_ps2", 0.0, where)};
  }
  if (type == "harmonic_gaussian") {
    check_keys(j, {"type", "sigma_p_ps", "amplitude", "harmonic", "rate_k"}, where);
    const std::string h = text(j, "harmonic", where);
    if (h != "cos" && h != "sin") throw ConfigError("pump.harmonic: expected 'cos' or 'sin'");
    return HarmonicGaussianPump{number(j, "sigma_p_ps", where), number_or(j, "amplitude", 1.0, where),
                                h == "cos" ? Harmonic::Cos : Harmonic::Sin,
                                number(j, "rate_k", where)};
  }
  if (type == "tabulated") {
    check_keys(j, {"type", "n_time", "window_ps", "re", "im"}, where);
    TabulatedPump tab{TimeGrid{count(j, "n_time", where), number(j, "window_ps", where)}, {}};
    const json& re = need(j, "re", where);
    if (!re.is_array()) throw ConfigError("pump.re: expected an array");
    const json im = j.contains("im") ? j.at("im") : json::array();
    if (!im.is_array() || (!im.empty() && im.size() != re.size()))
      throw ConfigError("pump.im: expected an array matching pump.re");
    for (std::size_t i = 0; i < re.size(); ++i)
      tab.samples.emplace_back(re[i].get<double>(), im.empty() ? 0.0 : im[i].get<double>());
    if (auto errors = pump_errors(tab); !errors.empty()) throw ConfigError(errors.front());
    return tab;
  }
  throw ConfigError("pump.type: expected 'gaussian', 'harmonic_gaussian' or 'tabulated', got '" +
                    type + "'");
}

json pump_to_json(const PumpShape& pump) {
  if (const auto* g = std::get_if<GaussianPump>(&pump))
    return {{"type", "gaussian"},
            {"sigma_p_ps", g->sigma_p_ps},
            {"delay_ps", g->delay_ps},
            {"amplitude", g->amplitude},
            {"chirp_per_ps2", g->chirp_per_ps2}};
  if (const auto* h = std::get_if<HarmonicGaussianPump>(&pump))
    return {{"type", "harmonic_gaussian"},
            {"sigma_p_ps", h->sigma_p_ps},
            {"amplitude", h->amplitude},
            {"harmonic", h->harmonic == Harmonic::Cos ? "cos" : "sin"},
            {"rate_k", h->rate_k}};
  const auto& tab = std::get<TabulatedPump>(pump);
  json re = json::array(), im = json::array();
  for (const auto& s : tab.samples) {
    re.push_back(s.real());
    im.push_back(s.imag());
  }
  return {{"type", "tabulated"},
          {"n_time", tab.grid.n_time},
          {"window_ps", tab.grid.window_ps},
          {"re", re},
          {"im", im}};
}

DetectorModel detector_from_json(const json& j) {
  const std::string where = "detector";
  check_keys(j, {"kind", "efficiency", "dark_count_mean"}, where);
  const std::string kind = text(j, "kind", where);
  DetectorModel d;
  if (kind == "apd") {
    d.kind = DetectorKind::APD;
  } else if (kind == "pnr") {
    d.kind = DetectorKind::PNR;
  } else {
    throw ConfigError("detector.kind: expected 'apd' or 'pnr', got '" + kind + "'");
  }
  d.efficiency = number_or(j, "efficiency", 1.0, where);
  d.dark_count_mean = number_or(j, "dark_count_mean", 0.0, where);
  if (auto errors = detector_errors(d); !errors.empty()) throw ConfigError(errors.front());
  return d;
}

json detector_to_json(const DetectorModel& det) {
  return {{"kind", det.kind == DetectorKind::APD ? "apd" : "pnr"},
          {"efficiency", det.efficiency},
          {"dark_count_mean", det.dark_count_mean}};
}

RunConfig config_from_json(const json& j, std::vector<std::string>* warnings) {
  check_keys(j, {"waveguide", "grid", "pump", "detector", "cascade", "optimize", "analysis"}, "config");
  RunConfig c;
  const json& wg = need(j, "waveguide", "config");
  check_keys(wg, {"eta_mag", "eta_phase", "mu_ps_per_cm", "nu_ps_per_cm", "length_cm"}, "waveguide");
  c.waveguide = WaveguideParams{number(wg, "eta_mag", "waveguide"),
                                number_or(wg, "eta_phase", 0.0, "waveguide"),
                                number(wg, "mu_ps_per_cm", "waveguide"),
                                number(wg, "nu_ps_per_cm", "waveguide"),
                                number(wg, "length_cm", "waveguide")};
  const json& grid = need(j, "grid", "config");
  check_keys(grid, {"n_time", "window_ps", "n_z"}, "grid");
  c.grid = TimeGrid{count(grid, "n_time", "grid"), number(grid, "window_ps", "grid")};
  c.zgrid = ZGrid{count(grid, "n_z", "grid")};

  if (j.contains("pump")) c.pump = pump_from_json(j["pump"]);
  if (j.contains("detector")) c.detector = detector_from_json(j["detector"]);
  if (j.contains("cascade")) c.cascade = cascade_from_json(j["cascade"]);
  if (j.contains("optimize")) c.optimize = optimize_from_json(j["optimize"]);
  if (j.contains("analysis")) {
    check_keys(j["analysis"], {"band_fraction"}, "analysis");
    c.analysis.band_fraction = number(j["analysis"], "band_fraction", "analysis");
    if (!(c.analysis.band_fraction > 0.0 && c.analysis.band_fraction <= 1.0))
      throw ConfigError("analysis.band_fraction must lie in (0, 1]");
  }

  // Every pump in the file is validated against the shared waveguide and grid.
  std::vector<PumpShape> pumps;
  if (c.pump) pumps.push_back(*c.pump);
  if (c.cascade)
    for (const auto& s : c.cascade->stages) pumps.push_back(s.pump);
  if (pumps.empty()) pumps.push_back(GaussianPump{});
  for (const auto& p : pumps) {
    auto w = require_valid(c.waveguide, c.grid, c.zgrid, p);
    if (warnings)
      for (auto& s : w)
        if (std::find(warnings->begin(), warnings->end(), s) == warnings->end())
          warnings->push_back(std::move(s));
  }
  if (c.optimize && c.optimize->family.kind == PumpFamily::Kind::Gaussian &&
      c.pump && !std::holds_alternative<GaussianPump>(*c.pump))
    throw ConfigError("optimize: the Gaussian family needs a gaussian pump as carrier");
  return c;
}

RunConfig load_config(const std::string& path, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  try {
    return config_from_json(j, warnings);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

ResolvedCascade resolve_cascade(const RunConfig& config) {
  if (!config.cascade) throw ConfigError("config has no 'cascade' section");
  ResolvedCascade out;
  for (std::size_t k = 0; k < config.cascade->stages.size(); ++k) {
    const auto& spec = config.cascade->stages[k];
    const DetectorModel det = spec.detector ? *spec.detector : config.detector.value_or(DetectorModel{});
    out.stages.push_back(make_stage(config.waveguide, config.grid, config.zgrid, spec.pump, det));
  }
  for (const auto& in : config.cascade->inputs) {
    ComplexField mode(config.grid);
    if (in.mode.kind == ModeSpec::Kind::Schmidt) {
      if (in.mode.stage >= out.stages.size())
        throw ConfigError("cascade input refers to stage " + std::to_string(in.mode.stage) +
                          " but only " + std::to_string(out.stages.size()) + " exist");
      const auto dec = decompose(*out.stages[in.mode.stage].kernel, in.mode.index + 1, config.analysis);
      if (in.mode.index >= dec.input_modes.size())
        throw ConfigError("cascade input mode index out of range");
      mode = dec.input_modes[in.mode.index];
    } else {
      mode = evaluate(in.mode.envelope, config.grid).normalized();
    }
    out.inputs.push_back(InputState{std::move(mode), in.statistics});
  }
  return out;
}

OptimizationProblem optimization_problem(const RunConfig& config) {
  if (!config.optimize) throw ConfigError("config has no 'optimize' section");
  const auto* carrier = std::get_if<GaussianPump>(&config.require_pump());
  if (!carrier) throw ConfigError("optimize: the pump carrier must be a gaussian pump");
  OptimizationProblem p;
  p.wg = config.waveguide;
  p.tg = config.grid;
  p.zg = config.zgrid;
  p.family = config.optimize->family;
  p.family.carrier = *carrier;
  p.objective = config.optimize->objective;
  p.bounds = config.optimize->bounds;
  p.budget = config.optimize->budget;
  p.restarts = config.optimize->restarts;
  p.tolerance = config.optimize->tolerance;
  p.decompose = config.analysis;
  try {
    check_problem(p);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("optimize: ") + e.what());
  }
  return p;
}

json result_to_json(const OptimizationResult& result) {
  json trace = json::array();
  for (const auto& t : result.trace) trace.push_back({{"params", t.params}, {"objective", t.objective}});
  return {{"best_params", result.best_params},
          {"best_objective", result.best_objective},
          {"best_pump", pump_to_json(result.best_pump)},
          {"evaluations_used", result.evaluations_used},
          {"budget_exhausted_early", result.budget_exhausted_early},
          {"trace", trace}};
}

json distribution_to_json(const CountDistribution& dist) {
  json outcomes = json::array();
  for (const auto& [counts, p] : dist.outcomes)
    outcomes.push_back({{"counts", counts}, {"probability", p}});
  return {{"stage_probabilities", dist.stage_probabilities},
          {"residual_prob", dist.residual_prob},
          {"total_probability", dist.total()},
          {"outcomes", outcomes}};
}

}  // namespace qfc
