#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "speclab/field.hpp"
#include "speclab/geometry.hpp"

namespace speclab {

// Discrete Schrodinger operator A = -Delta_h + diag(V) with the periodic
// second-order 5-point stencil; symmetric w.r.t. the measure-weighted inner
// product (the weight cancels, so also Euclidean-symmetric).
struct StencilOperator {
  TorusGrid grid;
  RealField potential;

  void apply(const double* in, double* out) const;
  RealField apply(const RealField& u) const;
  Eigen::MatrixXd dense() const;
  double potential_min() const;
  double potential_max() const;
  bool potential_constant() const;
};

StencilOperator assemble_operator(const TorusGrid& grid, const RealField& V);

// Lowest eigenpairs of the discrete operator. Eigenfunction columns are
// orthonormal in the measure-weighted discrete L^2 (Euclidean column norm
// 1/spacing) and sign-fixed for deterministic output.
struct EigenSystem {
  TorusGrid grid;
  std::vector<double> eigenvalues;  // nondecreasing, with multiplicity
  Eigen::MatrixXd modes;            // cell_count x K
  double shift = 0.0;               // tau with min(mu) + tau >= 1
  RealField potential;
  double residual_tol = 1e-9;
  double max_residual = 0.0;

  int size() const { return static_cast<int>(eigenvalues.size()); }
  RealField mode_field(int k) const;  // 0-based column
};

struct EigenSolveOptions {
  std::uint64_t seed = 0;       // start vectors of the iterative path
  double residual_tol = 1e-9;
  int dense_max_n_side = 64;    // full symmetric decomposition below this
  int max_lanczos_steps = 0;    // 0 = automatic
};

EigenSystem eigensolve(const StencilOperator& op, int K,
                       const EigenSolveOptions& opts = {});

// #{k : mu_k <= mu}; requires mu <= mu_K so the count is not truncated.
int weyl_count(const EigenSystem& sys, double mu);

// Coefficient vector <u, phi_k> for k = 0..K-1.
Eigen::VectorXcd analyze(const EigenSystem& sys, const ComplexField& u);
Eigen::VectorXd analyze(const EigenSystem& sys, const RealField& u);

// u = sum_k c_k phi_k.
ComplexField synthesize(const EigenSystem& sys, const Eigen::VectorXcd& c);
RealField synthesize(const EigenSystem& sys, const Eigen::VectorXd& c);

// (sum_k (mu_k + tau)^s |<u, phi_k>|^2)^(1/2); exact Sobolev scale of the
// discrete operator when the eigensystem is complete.
double sobolev_norm(const EigenSystem& sys, const ComplexField& u, double s);
double sobolev_norm(const EigenSystem& sys, const RealField& u, double s);

}  // namespace speclab
