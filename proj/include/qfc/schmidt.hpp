#pragma once

#include <string>
#include <vector>

#include "qfc/model.hpp"
#include "qfc/propagator.hpp"
#include "qfc/pump.hpp"

namespace qfc {

struct DecomposeOptions {
  /// Fraction of the Nyquist frequency kept on both sides of the conversion
  /// matrix before the SVD. Pointwise coupling on a finite grid aliases
  /// content at the band edge into spurious high-frequency singular pairs;
  /// 2/3 removes them. 1.0 decomposes the raw BA block.
  double band_fraction = 2.0 / 3.0;
};

/// Singular (normal-mode) decomposition of the signal -> sum-frequency map.
/// Input mode psi_n converts to output mode phi_n with amplitude lambda_n.
struct SchmidtDecomposition {
  TimeGrid grid;
  std::vector<double> lambdas;              // descending, kept modes only
  std::vector<ComplexField> input_modes;    // psi_n, dt-orthonormal
  std::vector<ComplexField> output_modes;   // phi_n, dt-orthonormal
  std::vector<bool> degenerate_with_next;   // |lambda_n - lambda_{n+1}| < 1e-10
  std::size_t truncation_count = 0;
  double total_efficiency = 0.0;            // sum of lambda^2 over all modes
  std::vector<std::string> warnings;
};

/// The matrix that decompose() factors: BA, band-limited on both sides when
/// band_fraction < 1.
MatrixXcd conversion_matrix(const ScatteringKernel& kernel, const DecomposeOptions& options = {});

/// SVD of the conversion matrix. Modes are rescaled by 1/sqrt(dt) and each
/// pair's phase is fixed so that the largest-magnitude sample of psi_n is
/// real and positive. A truncation above n_time is clamped with a warning.
SchmidtDecomposition decompose(const ScatteringKernel& kernel, std::size_t truncation,
                               const DecomposeOptions& options = {});

/// lambda_n^2 for the kept modes, in order.
std::vector<double> conversion_efficiencies(const SchmidtDecomposition& dec);

/// sum_n lambda_n phi_n psi_n^H dt over the kept modes.
MatrixXcd reconstruct(const SchmidtDecomposition& dec);

/// Probability that a single photon in normalized mode u is converted,
/// from the Schmidt sum over kept modes. Throws if u is not normalized.
double convert_probability(const SchmidtDecomposition& dec, const ComplexField& u);
/// Same quantity directly from the kernel: |BA u|^2 dt.
double convert_probability(const ScatteringKernel& kernel, const ComplexField& u);

/// |<psi_0^a, psi_0^b>|^2. Throws on grid mismatch or empty decompositions.
double fundamental_overlap(const SchmidtDecomposition& a, const SchmidtDecomposition& b);

/// Advisory single-mode figure B*T with B = 1/(|mu - nu| L) in THz and T the
/// intensity FWHM of the pump in ps. Throws when mu == nu.
double single_mode_figure(const WaveguideParams& wg, const PumpShape& pump);

}  // namespace qfc
