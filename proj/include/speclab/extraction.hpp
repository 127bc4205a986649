#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "speclab/evolution.hpp"
#include "speclab/spectral_data.hpp"

namespace speclab {

// One separated exponential component of a recording. The rate carries the
// equation convention: heat -mu, Schrodinger -i mu. The residue is the
// multiplicity-summed eigenspace contribution (f, psi_k) psi_k on O.
struct ModeEstimate {
  cplx rate;
  Eigen::VectorXcd residue;
  double confidence = 0.0;  // relative fit residual, in [0, 1]
  bool accepted = false;
};

// Wave components carry frequencies +-sqrt(mu) and the z-linear residue split
// into the initial-position and initial-velocity parts.
struct WaveModeEstimate {
  double mu = 0.0;
  Eigen::VectorXcd residue_f;
  Eigen::VectorXcd residue_h;
  double confidence = 0.0;
  bool accepted = false;
};

struct ExtractionOptions {
  int pencil_max_samples = 1024;
  double rank_rel_tol = 1e-11;
  double accept_residual = 1e-4;  // noiseless acceptance policy; 10*sigma when noisy
  double merge_tol = 1e-8;        // relative eigenvalue merge tolerance
  int max_gn_iterations = 60;
};

struct LaplaceSamples {
  std::vector<cplx> z;
  Eigen::MatrixXcd values;          // one row per z, one column per O cell
  std::vector<double> tail_bound;   // truncation bound per z
  std::vector<bool> tail_dominated; // quadrature resolution flag |z| dt > 0.5
};

// Trapezoid quadrature of int_0^T u(t, .) e^{-zt} dt per cell; the
// paper-faithful diagnostic next to the pencil path.
LaplaceSamples laplace_samples(const PassiveRecording& rec, const std::vector<cplx>& z_list);

std::vector<ModeEstimate> extract_heat_modes(const PassiveRecording& rec, int K_max,
                                             const ExtractionOptions& opts = {});
std::vector<ModeEstimate> extract_schrodinger_modes(const PassiveRecording& rec, int K_max,
                                                    const ExtractionOptions& opts = {});
std::vector<WaveModeEstimate> extract_wave_modes(const PassiveRecording& rec, int K_max,
                                                 const ExtractionOptions& opts = {});

SpectralDataset to_spectral_dataset(const std::vector<ModeEstimate>& modes, Equation eq,
                                    const ObservationSet& obs);
// Per mode, the stronger of the two residue families carries the restriction.
SpectralDataset to_spectral_dataset(const std::vector<WaveModeEstimate>& modes,
                                    const ObservationSet& obs);

struct MatchResult {
  std::vector<std::pair<int, int>> pairs;  // 0-based entry positions (k, b_k)
  double eig_tol = 0.0;
  double fun_tol = 0.0;
  std::vector<cplx> gauges;                   // c* per pair
  std::vector<double> restriction_discrepancies;  // relative L2(O) error per pair
  std::vector<int> unmatched_ds1;
  std::vector<int> unmatched_ds2;
};

// Greedy two-pointer pairing over sorted eigenvalues; a pair is accepted when
// the eigenvalues agree within eig_tol(1+|mu|) and the restrictions agree on O
// after the optimal complex gauge. The index map is strictly increasing in
// both coordinates. fun_tol = infinity pairs by eigenvalue proximity alone.
MatchResult match_datasets(const SpectralDataset& ds1, const SpectralDataset& ds2,
                           double eig_tol, double fun_tol);

}  // namespace speclab
