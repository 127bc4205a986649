#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "speclab/fourier.hpp"
#include "speclab/schrodinger.hpp"
#include "speclab/spectral_data.hpp"

namespace speclab {

enum class Equation { heat, schrodinger, wave };

std::string equation_name(Equation eq);
Equation equation_from_name(const std::string& name);

// Spectral evolution backend: applies per-mode scalar factors of the discrete
// operator. The mode-basis variant synthesizes from stored eigenfunctions;
// the Fourier variant handles constant potentials through the DFT, is exact
// and complete, and never materializes the eigenbasis. Both compute the same
// expansion and are equivalence-tested against each other.
class SpectralPropagator {
 public:
  virtual ~SpectralPropagator() = default;
  virtual const TorusGrid& grid() const = 0;
  virtual int mode_count() const = 0;

  // u(t_i) = sum_k a(mu_k + shift, t_i) <f, phi_k> phi_k
  //        (+ b(mu_k + shift, t_i) <g, phi_k> phi_k)
  virtual std::vector<ComplexField> evolve(const ComplexField& f, const ComplexField* g,
                                           cplx (*a)(double, double, double),
                                           cplx (*b)(double, double, double), double shift,
                                           std::span<const double> times) const = 0;

  // Same expansion sampled only on the cells of O (row-major cell order);
  // returns a times x cells matrix.
  virtual Eigen::MatrixXcd evolve_on(const ObservationSet& obs, const ComplexField& f,
                                     const ComplexField* g, cplx (*a)(double, double, double),
                                     cplx (*b)(double, double, double), double shift,
                                     std::span<const double> times) const = 0;
};

class ModeBasisPropagator final : public SpectralPropagator {
 public:
  explicit ModeBasisPropagator(const EigenSystem& sys) : sys_(&sys) {}
  const TorusGrid& grid() const override { return sys_->grid; }
  int mode_count() const override { return sys_->size(); }
  std::vector<ComplexField> evolve(const ComplexField& f, const ComplexField* g,
                                   cplx (*a)(double, double, double),
                                   cplx (*b)(double, double, double), double shift,
                                   std::span<const double> times) const override;
  Eigen::MatrixXcd evolve_on(const ObservationSet& obs, const ComplexField& f,
                             const ComplexField* g, cplx (*a)(double, double, double),
                             cplx (*b)(double, double, double), double shift,
                             std::span<const double> times) const override;

 private:
  const EigenSystem* sys_;
};

class FourierPropagator final : public SpectralPropagator {
 public:
  FourierPropagator(const TorusGrid& grid, double constant_potential);
  const TorusGrid& grid() const override;
  int mode_count() const override;
  std::vector<ComplexField> evolve(const ComplexField& f, const ComplexField* g,
                                   cplx (*a)(double, double, double),
                                   cplx (*b)(double, double, double), double shift,
                                   std::span<const double> times) const override;
  Eigen::MatrixXcd evolve_on(const ObservationSet& obs, const ComplexField& f,
                             const ComplexField* g, cplx (*a)(double, double, double),
                             cplx (*b)(double, double, double), double shift,
                             std::span<const double> times) const override;

 private:
  std::unique_ptr<Fourier2D> fft_;
  double v0_;
  std::vector<double> symbols_;
};

// Branches of the wave solution factor: sin(sqrt(mu) t)/sqrt(mu) for mu > 0,
// t at mu = 0, sinh(sqrt(|mu|) t)/sqrt(|mu|) for mu < 0.
double wave_s_factor(double mu, double t);
double wave_s_dt_factor(double mu, double t);  // cos / 1 / cosh branches

std::vector<ComplexField> heat_solve(const EigenSystem& sys, const ComplexField& f,
                                     std::span<const double> times);
std::vector<ComplexField> schrodinger_solve(const EigenSystem& sys, const ComplexField& f,
                                            std::span<const double> times);
std::vector<ComplexField> wave_solve(const EigenSystem& sys, const ComplexField& f,
                                     const ComplexField& h, std::span<const double> times);
// Spectral time derivative of the wave solution (for energy diagnostics).
std::vector<ComplexField> wave_velocity(const EigenSystem& sys, const ComplexField& f,
                                        const ComplexField& h, std::span<const double> times);

// Zero-initial-data wave driven by a source supported in O and sampled on a
// uniform time grid; Duhamel convolution by trapezoid quadrature.
std::vector<ComplexField> wave_source_solve(const EigenSystem& sys,
                                            const std::vector<ComplexField>& F,
                                            double dt);

// Time-sampled values of a solution on the cells of O.
struct PassiveRecording {
  Equation equation = Equation::heat;
  std::vector<double> times;  // strictly increasing, uniform step
  Eigen::MatrixXcd values;    // times x cells of O
  ObservationSet observation;
  double dt = 0.0;
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

PassiveRecording record(const std::vector<ComplexField>& fields,
                        std::span<const double> times, const ObservationSet& obs,
                        Equation eq, double sigma = 0.0, std::uint64_t seed = 0);

// Fused solve + record: evaluates the expansion only on O's cells.
PassiveRecording simulate_recording(const SpectralPropagator& prop, const EigenSystem* sys,
                                    const ObservationSet& obs, Equation eq,
                                    const ComplexField& f, const ComplexField* h,
                                    std::span<const double> times, double sigma,
                                    std::uint64_t seed);
PassiveRecording simulate_recording(const EigenSystem& sys, const ObservationSet& obs,
                                    Equation eq, const ComplexField& f, const ComplexField* h,
                                    std::span<const double> times, double sigma = 0.0,
                                    std::uint64_t seed = 0);

std::vector<double> uniform_times(double t0, double t1, int count);

// Wave-evolution leakage diagnostic: evolves f (supported in a ball) under
// the shifted wave flow and returns max |u| over [0,T] x W. Nonzero in
// general; the spectrally-evolved discrete operator is not exactly local.
double finite_speed_check(const SpectralPropagator& prop, double shift,
                          const ComplexField& f, const ObservationSet& W, double T,
                          double support_distance, int time_samples = 33);
double finite_speed_check(const EigenSystem& sys, const ComplexField& f,
                          const ObservationSet& W, double T, double support_distance,
                          int time_samples = 33);

}  // namespace speclab
