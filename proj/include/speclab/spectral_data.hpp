#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "speclab/schrodinger.hpp"

namespace speclab {

// One measured pair: eigenvalue plus the eigenfunction restricted to the
// cells of O (row-major cell order, no norming constant implied).
struct SpectralEntry {
  int index = 0;  // 1-based spectral index when known, position otherwise
  double eigenvalue = 0.0;
  Eigen::VectorXcd restriction;
};

struct SpectralDataset {
  ObservationSet observation;
  std::vector<SpectralEntry> entries;
  bool orthonormalized = false;

  int size() const { return static_cast<int>(entries.size()); }
};

// Restriction of selected eigenfunctions to O; indices are 1-based spectral
// indices, strictly increasing. Fails when the restricted family is
// numerically dependent (Gram smallest singular value <= 1e-12), which
// signals an O too small for the requested modes at this resolution.
SpectralDataset restrict_modes(const EigenSystem& sys, const ObservationSet& obs,
                               const std::vector<int>& indices);

// Smallest singular value of the measure-weighted Gram matrix of the
// restrictions.
double gram_smallest_singular_value(const SpectralDataset& ds);

SpectralDataset scale_dataset(const SpectralDataset& ds, const std::vector<cplx>& scalars);

// Random gauge scalars with magnitudes in [0.2, 5]; manufactures the
// no-norming-constants regime.
std::vector<cplx> random_gauge_scalars(std::uint64_t seed, int n);
// Gauge scalars drawn from {+-2^j, +-i 2^j}; multiplication by these is exact
// in IEEE arithmetic, so gauge-invariant pipelines can be tested bitwise.
std::vector<cplx> random_dyadic_gauge_scalars(std::uint64_t seed, int n);

// Gram-Schmidt on the global family behind ds1 with the same triangular
// transform applied to ds2's restrictions; equalities on O are preserved.
// Returns the orthonormalized family as an eigensystem over ds1's eigenvalues
// together with the transformed ds2.
std::pair<EigenSystem, SpectralDataset> pair_gram_schmidt(const SpectralDataset& ds1,
                                                          const SpectralDataset& ds2,
                                                          const EigenSystem& full1);

struct ObservabilityReport {
  std::vector<double> per_eigenspace;     // one constant per eigenvalue group
  std::vector<double> group_eigenvalues;  // representative eigenvalue per group
  double overall = 0.0;
  int tested_K = 0;  // certificate covers only this finite prefix
  bool unobservable_flagged = false;
};

// 1/sigma_min of the restriction of each orthonormal eigenspace basis to O;
// the overall constant is the max over eigenspaces.
ObservabilityReport observability_constants(const EigenSystem& sys,
                                            const ObservationSet& obs, int K);

// Minimum-norm field supported in O with prescribed inner products
// <theta, psi_k>_{L^2(O)} = c_k against the dataset restrictions.
ComplexField dual_test_function(const SpectralDataset& ds, const std::vector<cplx>& c);

}  // namespace speclab
