#include "qfc/propagator.hpp"

#include <cmath>
#include <fstream>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

#include "qfc/csv.hpp"
#include "qfc/parallel.hpp"
#include "qfc/validation.hpp"

namespace qfc {

namespace {

// FFTW's planner is not reentrant; plan execution on new arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

class SplitStepPropagator::Fft {
 public:
  explicit Fft(std::size_t n) {
    std::vector<cplx> scratch_in(n), scratch_out(n);
    const int len = static_cast<int>(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    std::lock_guard lock(planner_mutex());
    forward_ = fftw_plan_dft_1d(len, as_fftw(scratch_in.data()), as_fftw(scratch_out.data()),
                                FFTW_FORWARD, flags);
    backward_ = fftw_plan_dft_1d(len, as_fftw(scratch_in.data()), as_fftw(scratch_out.data()),
                                 FFTW_BACKWARD, flags);
    if (!forward_ || !backward_) throw std::runtime_error("FFTW planning failed");
  }
  ~Fft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  // x <- IFFT(phase .* FFT(x)), using `spectrum` as scratch.
  void advect(VectorXcd& x, const VectorXcd& phase, VectorXcd& spectrum) const {
    fftw_execute_dft(forward_, as_fftw(x.data()), as_fftw(spectrum.data()));
    spectrum.array() *= phase.array();
    fftw_execute_dft(backward_, as_fftw(spectrum.data()), as_fftw(x.data()));
  }

 private:
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

SplitStepPropagator::SplitStepPropagator(const WaveguideParams& wg, const PumpShape& pump,
                                         const TimeGrid& tg, const ZGrid& zg)
    : grid_(tg), n_z_(zg.n_z), warnings_(require_valid(wg, tg, zg, pump)) {
  const auto n = static_cast<Eigen::Index>(tg.n_time);
  const double dz = zg.dz_cm(wg.length_cm);
  const double inv_n = 1.0 / static_cast<double>(tg.n_time);

  half_a_.resize(n);
  half_b_.resize(n);
  full_a_.resize(n);
  full_b_.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double w = tg.omega(static_cast<std::size_t>(k));
    half_a_[k] = std::polar(inv_n, -w * wg.mu_ps_per_cm * 0.5 * dz);
    half_b_[k] = std::polar(inv_n, -w * wg.nu_ps_per_cm * 0.5 * dz);
    full_a_[k] = std::polar(inv_n, -w * wg.mu_ps_per_cm * dz);
    full_b_[k] = std::polar(inv_n, -w * wg.nu_ps_per_cm * dz);
  }

  const ComplexField f = evaluate(pump, tg);
  const cplx eta = wg.eta();
  const cplx i{0.0, 1.0};
  cos_.resize(n);
  sin_ab_.resize(n);
  sin_ba_.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const cplx g = eta * f[static_cast<std::size_t>(j)];
    const double theta = std::abs(g) * dz;
    const cplx phase = std::polar(1.0, std::arg(g));
    cos_[j] = std::cos(theta);
    sin_ab_[j] = i * phase * std::sin(theta);
    sin_ba_[j] = i * std::conj(phase) * std::sin(theta);
  }
  fft_ = std::make_unique<Fft>(tg.n_time);
}

SplitStepPropagator::~SplitStepPropagator() = default;

void SplitStepPropagator::propagate(VectorXcd& a, VectorXcd& b) const {
  const auto n = static_cast<Eigen::Index>(grid_.n_time);
  if (a.size() != n || b.size() != n)
    throw std::invalid_argument("propagate: field length does not match the grid");

  VectorXcd spectrum(n);
  // Adjacent half advections of consecutive steps are fused into one.
  for (std::size_t step = 0; step < n_z_; ++step) {
    const bool first = step == 0;
    fft_->advect(a, first ? half_a_ : full_a_, spectrum);
    fft_->advect(b, first ? half_b_ : full_b_, spectrum);
    for (Eigen::Index j = 0; j < n; ++j) {
      const cplx aj = a[j], bj = b[j];
      a[j] = cos_[j] * aj + sin_ab_[j] * bj;
      b[j] = sin_ba_[j] * aj + cos_[j] * bj;
    }
  }
  fft_->advect(a, half_a_, spectrum);
  fft_->advect(b, half_b_, spectrum);
}

MatrixXcd ScatteringKernel::full() const {
  if (!has_sf_input()) throw std::logic_error("kernel was built for the signal port only");
  const auto n = static_cast<Eigen::Index>(size());
  MatrixXcd s(2 * n, 2 * n);
  s << aa, ab, ba, bb;
  return s;
}

std::pair<ComplexField, ComplexField> propagate_pair(const ComplexField& a, const ComplexField& b,
                                                     const WaveguideParams& wg,
                                                     const PumpShape& pump, const TimeGrid& tg,
                                                     const ZGrid& zg) {
  if (!(a.grid() == tg) || !(b.grid() == tg))
    throw std::invalid_argument("propagate_pair: field grid differs from the simulation grid");
  const SplitStepPropagator prop(wg, pump, tg, zg);
  VectorXcd va = a.samples(), vb = b.samples();
  prop.propagate(va, vb);
  return {ComplexField(tg, std::move(va)), ComplexField(tg, std::move(vb))};
}

ScatteringKernel build_kernel(const WaveguideParams& wg, const PumpShape& pump,
                              const TimeGrid& tg, const ZGrid& zg, KernelPorts ports) {
  const SplitStepPropagator prop(wg, pump, tg, zg);
  const auto n = static_cast<Eigen::Index>(tg.n_time);
  const bool full = ports == KernelPorts::Full;

  ScatteringKernel k{tg, MatrixXcd(n, n), MatrixXcd(), MatrixXcd(n, n), MatrixXcd()};
  if (full) {
    k.ab.resize(n, n);
    k.bb.resize(n, n);
  }
  const std::size_t columns = full ? 2 * tg.n_time : tg.n_time;
  parallel_for(columns, [&](std::size_t c) {
    VectorXcd a = VectorXcd::Zero(n), b = VectorXcd::Zero(n);
    const auto j = static_cast<Eigen::Index>(c % tg.n_time);
    const bool signal_port = c < tg.n_time;
    (signal_port ? a : b)[j] = 1.0;
    prop.propagate(a, b);
    if (signal_port) {
      k.aa.col(j) = a;
      k.ba.col(j) = b;
    } else {
      k.ab.col(j) = a;
      k.bb.col(j) = b;
    }
  });
  return k;
}

double unitarity_defect(const ScatteringKernel& kernel) {
  const MatrixXcd s = kernel.full();
  const MatrixXcd defect = s.adjoint() * s - MatrixXcd::Identity(s.rows(), s.cols());
  return defect.cwiseAbs().maxCoeff();
}

void write_kernel_csv(const ScatteringKernel& kernel, const std::string& prefix) {
  auto dump = [&](const MatrixXcd& m, const std::string& name) {
    if (m.size() == 0) return;
    std::ofstream out(prefix + "_" + name + ".csv");
    if (!out) throw std::runtime_error("cannot write " + prefix + "_" + name + ".csv");
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        if (c) out << ',';
        out << format_number(m(r, c).real()) << ',' << format_number(m(r, c).imag());
      }
      out << '\n';
    }
  };
  dump(kernel.aa, "AA");
  dump(kernel.ab, "AB");
  dump(kernel.ba, "BA");
  dump(kernel.bb, "BB");
}

}  // namespace qfc
