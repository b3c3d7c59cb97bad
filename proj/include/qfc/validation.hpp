#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "qfc/model.hpp"
#include "qfc/pump.hpp"

namespace qfc {

struct ValidationReport {
  std::vector<std::string> errors;    // block any downstream computation
  std::vector<std::string> warnings;  // advisory

  bool ok() const { return errors.empty(); }
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Checks sizes, the pump definition and three resolution heuristics:
/// pump energy leaking past the central 80% of the window, walk-off above a
/// quarter window (periodic wrap), and advection phase above pi per half
/// step at the Nyquist frequency.
ValidationReport validate_config(const WaveguideParams& wg, const TimeGrid& tg, const ZGrid& zg,
                                 const PumpShape& pump);

/// Throws ConfigError listing every hard error, returns the warnings otherwise.
std::vector<std::string> require_valid(const WaveguideParams& wg, const TimeGrid& tg,
                                       const ZGrid& zg, const PumpShape& pump);

}  // namespace qfc
