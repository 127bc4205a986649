#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "speclab/spectral_data.hpp"

namespace speclab {

// Finite truncation of the set Gamma of square-root sums and differences
// derived from an eigenvalue subset.
struct GammaSet {
  std::vector<double> points;  // sorted, deduplicated at 1e-12
  std::string source;
  bool collisions_flagged = false;  // duplicates removed during dedup
};

GammaSet gamma_set(const std::vector<double>& lambda, const std::vector<int>& subset_indices);

// Minimum adjacent difference of the deduplicated truncation.
double uniform_gap(const GammaSet& gamma);

struct DensityEstimate {
  double window = 0.0;
  double density = 0.0;  // sup_s #(Gamma cap (s, s+l)) / l, exact on the truncation
};

std::vector<DensityEstimate> upper_uniform_density(const GammaSet& gamma,
                                                   const std::vector<double>& window_schedule);

enum class SparsityVerdict { sparse, not_sparse, inconclusive };

struct SparsityReport {
  double uniform_gap = 0.0;
  std::vector<DensityEstimate> density_estimates;
  SparsityVerdict verdict = SparsityVerdict::inconclusive;
  int truncation_size = 0;
  bool empty_subset = false;
  std::string note;
};

// Default window schedule {10, 20, 40, 80}; thresholds: sparse when the gap
// exceeds 1e-6 and the last-window density is below 0.02 with a decreasing
// trend, not_sparse when the gap collapses or the density plateaus above
// 0.05. These finite-evidence thresholds are artifact policy.
SparsityReport is_lambda_sparse(const std::vector<double>& lambda,
                                const std::vector<int>& subset_indices,
                                std::vector<double> window_schedule = {});

struct SparseSelection {
  std::vector<int> indices;                          // 1-based, ascending
  std::vector<std::pair<double, double>> blocks;     // (A^{2k}, A^{2k+1}] used
  int covered_blocks = 0;
};

// One eigenvalue index per dyadic-type block (A^{2k}, A^{2k+1}]; stops with an
// error when a block inside the truncation is empty.
SparseSelection select_sparse_subsequence(const std::vector<double>& lambda, double A);

struct Interpolant {
  std::vector<double> t;       // sample positions on J
  Eigen::VectorXcd values;     // h(t)
  double norm = 0.0;           // ||h||_{L^2(J)} via quadrature
  std::vector<double> residuals;
  double condition = 0.0;      // of the sampling Gram system
};

// Minimum-L2-norm band-limited interpolant on J = (t0, t1) with quadrature
// Fourier transform matching F(h)(gamma_k) = c_k.
Interpolant bandlimited_interpolant(const std::vector<double>& gamma,
                                    const std::vector<cplx>& c, double t0, double t1,
                                    int m);

// Extreme singular values of the synthesis map a -> (sum a_k phi_{d_k})|_U in
// measure-weighted norms; D holds 1-based indices.
std::pair<double, double> frame_bounds(const EigenSystem& sys, const std::vector<int>& D,
                                       const ObservationSet& U);

struct MembershipResult {
  bool in_range = false;
  double residual = 0.0;  // relative
  std::optional<double> identified_eigenvalue;
};

// Least-squares projection of Phi (values on U cells) onto the range of the
// synthesis map; an eigenfunction whose eigenvalue is missing from D must
// land outside the range.
MembershipResult membership_test(const EigenSystem& sys, const std::vector<int>& D,
                                 const ObservationSet& U, const Eigen::VectorXcd& Phi,
                                 double lambda);

}  // namespace speclab
