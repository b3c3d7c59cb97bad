#pragma once

// Split-step solution of the coupled signal / sum-frequency envelope
// equations in the pump frame:
//
//   (d/dz + mu d/dt) a = i eta f(t) b
//   (d/dz + nu d/dt) b = i eta* f*(t) a
//
// Advection is applied as a spectral phase ramp with periodic boundaries and
// coupling as the exact pointwise 2x2 rotation, composed symmetrically
// (Strang). Every sub-step is unitary on the sample vector.

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qfc/model.hpp"
#include "qfc/pump.hpp"

namespace qfc {

enum class KernelPorts {
  Full,        // both input ports: the complete 2N x 2N transfer matrix
  SignalOnly,  // only the signal input port: AA and BA
};

/// Discretized transfer matrix S = [[AA, AB], [BA, BB]] acting on
/// (a_in; b_in) sample vectors. BA carries G(t, t') dt, AA the residual
/// signal map. AB and BB are empty for a SignalOnly kernel.
struct ScatteringKernel {
  TimeGrid grid;
  MatrixXcd aa, ab, ba, bb;

  std::size_t size() const { return grid.n_time; }
  bool has_sf_input() const { return ab.size() != 0; }
  /// The full 2N x 2N matrix; throws for a SignalOnly kernel.
  MatrixXcd full() const;
};

/// Precomputed propagation for one (waveguide, pump, grid) combination.
/// Immutable and safe to share between threads.
class SplitStepPropagator {
 public:
  /// Throws ConfigError on hard validation errors.
  SplitStepPropagator(const WaveguideParams& wg, const PumpShape& pump, const TimeGrid& tg,
                      const ZGrid& zg);
  ~SplitStepPropagator();
  SplitStepPropagator(const SplitStepPropagator&) = delete;
  SplitStepPropagator& operator=(const SplitStepPropagator&) = delete;

  /// Advances (a, b) from z = 0 to z = L in place. Both vectors must have
  /// n_time entries.
  void propagate(VectorXcd& a, VectorXcd& b) const;

  const TimeGrid& grid() const { return grid_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  class Fft;

  TimeGrid grid_;
  std::size_t n_z_;
  std::vector<std::string> warnings_;
  // Spectral phase factors with the inverse-FFT 1/N folded in.
  VectorXcd half_a_, half_b_, full_a_, full_b_;
  // Pointwise coupling rotation.
  Eigen::VectorXd cos_;
  VectorXcd sin_ab_, sin_ba_;
  std::unique_ptr<Fft> fft_;
};

std::pair<ComplexField, ComplexField> propagate_pair(const ComplexField& a, const ComplexField& b,
                                                     const WaveguideParams& wg,
                                                     const PumpShape& pump, const TimeGrid& tg,
                                                     const ZGrid& zg);

/// Assembles S column by column from canonical basis inputs. Columns are
/// propagated in parallel; the result is independent of the worker count.
ScatteringKernel build_kernel(const WaveguideParams& wg, const PumpShape& pump,
                              const TimeGrid& tg, const ZGrid& zg,
                              KernelPorts ports = KernelPorts::Full);

/// Reference kernel from classical RK4 on the 2N-dimensional linear ODE
/// obtained by spectral differentiation in t. Intended for small grids
/// (n_time <= 128) in tests.
ScatteringKernel oracle_fine_ode(const WaveguideParams& wg, const PumpShape& pump,
                                 const TimeGrid& tg, const ZGrid& zg_fine);

/// max |(S^H S - I)_ij| over the full transfer matrix.
double unitarity_defect(const ScatteringKernel& kernel);

/// Debug dump: <prefix>_AA.csv etc., one row per output sample with
/// alternating re,im columns. Not a stable format.
void write_kernel_csv(const ScatteringKernel& kernel, const std::string& prefix);

}  // namespace qfc
