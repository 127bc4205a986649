#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "speclab/extraction.hpp"
#include "speclab/spectral_data.hpp"

namespace speclab {

// Pointwise algebraic recovery of the potential on O from (mu_k, psi_k|_O):
// the eigenfunction identity gives V(x) = mu + (Delta_h psi)(x) / psi(x) on
// every cell whose full stencil lies in O. Mode contributions are combined by
// |psi|^2-weighted least squares; cells where every mode is below the nodal
// threshold are excluded from the trusted mask. The arithmetic is arranged so
// that per-mode gauge factors cancel exactly (bitwise for dyadic gauges).
struct OnOPotential {
  RealField values;                        // estimate on trusted cells, 0 elsewhere
  std::vector<std::uint8_t> trusted_mask;  // subset of O's interior cells
  double max_imaginary_leak = 0.0;         // diagnostic: |Im| of the ratio
};

OnOPotential recover_potential_on_O(const SpectralDataset& ds, const TorusGrid& grid,
                                    const ObservationSet& obs, double theta);

struct MisfitOptions {
  double eig_match_tol = 0.2;      // relative eigenvalue tolerance for pairing
  double unmatched_penalty = 1.0;  // fixed cost per unmatched observed mode
  int solve_margin = 8;            // extra modes beyond the observed count
  std::uint64_t seed = 0;
};

struct MisfitParts {
  double data = 0.0;
  double regularization = 0.0;
  int matched = 0;
  int unmatched = 0;
  double total() const { return data + regularization; }
};

// J(V) = sum_k w_k [ (mu_k(V) - mu_k^obs)^2 / (1 + mu_k^obs)^2
//                    + min_c ||c psi_k(V)|_O - psi_k^obs||^2 / ||psi_k^obs||^2 ]
//        + penalty * #unmatched + lambda ||grad_h V||^2
double spectral_misfit(const RealField& V, const SpectralDataset& target,
                       const std::vector<double>& weights, double lambda,
                       const MisfitOptions& opts = {}, MisfitParts* parts = nullptr);

// Gradient of the misfit; eigenvalue sensitivities via the squared
// eigenfunction density, eigenfunction sensitivities via first-order
// perturbation over the full decomposition. Matched modes that are not
// simple within the gap tolerance are frozen (regularization still included).
struct MisfitGradient {
  RealField gradient;
  int frozen_modes = 0;
  bool data_gradient_available = true;
};

MisfitGradient misfit_gradient(const RealField& V, const SpectralDataset& target,
                               const std::vector<double>& weights, double lambda,
                               const MisfitOptions& opts = {});

// On-O estimate extended by harmonic fill (Delta_h V = 0 off the trusted set).
RealField warm_start_potential(const SpectralDataset& ds, const TorusGrid& grid,
                               const ObservationSet& obs, double theta,
                               std::vector<std::uint8_t>* trusted_out = nullptr);

struct RecoveryOptions {
  double lambda0_scale = 1e-3;  // lambda_0 = scale * J_data(V0)
  int max_iter = 400;
  double grad_tol = 1e-8;
  double theta_nodal = 1e-3;
  MisfitOptions misfit;
  int lbfgs_memory = 8;
  int stall_window = 4;          // accepted steps without data progress
  double stall_rel_improve = 1e-5;
};

struct RecoveryResult {
  RealField potential_estimate;
  std::vector<std::uint8_t> recovered_mask;
  std::vector<double> misfit_history;       // J after each accepted step
  std::vector<double> data_misfit_history;  // data term only
  std::optional<ComplexField> initial_f;
  std::optional<ComplexField> initial_h;
  std::vector<cplx> gauges;  // per matched mode at the final iterate
  double final_lambda = 0.0;
  int iterations = 0;
  bool converged = false;
  bool line_search_failed = false;
  std::string note;
};

// Descent with backtracking line search (L-BFGS directions, steepest-descent
// fallback) and lambda continuation halving on data-term stalls.
RecoveryResult recover_potential_global(const SpectralDataset& target, const RealField& V0,
                                        const RecoveryOptions& opts = {});
// Warm start computed from the target dataset itself.
RecoveryResult recover_potential_global(const SpectralDataset& target,
                                        const RecoveryOptions& opts = {});

struct InitialDataResult {
  ComplexField f;
  Eigen::VectorXcd coefficients;
  std::vector<int> unmatched_modes;  // 1-based eigensystem indices set to zero
  bool complete = true;
};

// Projects heat residues (f, psi_k) psi_k|_O back to global coefficients.
InitialDataResult recover_initial_heat(const std::vector<ModeEstimate>& modes,
                                       const EigenSystem& sys, const ObservationSet& obs,
                                       double eig_tol = 1e-6);

struct WaveInitialDataResult {
  ComplexField f;
  ComplexField h;
  Eigen::VectorXcd coefficients_f;
  Eigen::VectorXcd coefficients_h;
  std::vector<int> unmatched_modes;
  bool complete = true;
};

WaveInitialDataResult recover_initial_wave(const std::vector<WaveModeEstimate>& modes,
                                           const EigenSystem& sys, const ObservationSet& obs,
                                           double eig_tol = 1e-6);

}  // namespace speclab
