#include "speclab/schrodinger.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "speclab/fourier.hpp"
#include "speclab/kernels.hpp"
#include "speclab/rng.hpp"

namespace speclab {

void StencilOperator::apply(const double* in, double* out) const {
  const int n = grid.n_side;
  kernels::ops().laplacian5(in, out, n, 1.0 / (grid.spacing * grid.spacing));
  const double* V = potential.values.data();
  const std::size_t total = static_cast<std::size_t>(n) * n;
  for (std::size_t i = 0; i < total; ++i) out[i] += V[i] * in[i];
}

RealField StencilOperator::apply(const RealField& u) const {
  RealField out(grid);
  apply(u.values.data(), out.values.data());
  return out;
}

Eigen::MatrixXd StencilOperator::dense() const {
  const int n = grid.n_side;
  const int nn = grid.cell_count();
  const double inv_h2 = 1.0 / (grid.spacing * grid.spacing);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nn, nn);
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const int c = iy * n + ix;
      A(c, c) = 4.0 * inv_h2 + potential[static_cast<std::size_t>(c)];
      A(c, grid.index(ix + 1, iy)) -= inv_h2;
      A(c, grid.index(ix - 1, iy)) -= inv_h2;
      A(c, grid.index(ix, iy + 1)) -= inv_h2;
      A(c, grid.index(ix, iy - 1)) -= inv_h2;
    }
  }
  return A;
}

double StencilOperator::potential_min() const {
  return *std::min_element(potential.values.begin(), potential.values.end());
}

double StencilOperator::potential_max() const {
  return *std::max_element(potential.values.begin(), potential.values.end());
}

bool StencilOperator::potential_constant() const {
  const double lo = potential_min(), hi = potential_max();
  return hi - lo <= 1e-14 * (1.0 + std::max(std::fabs(lo), std::fabs(hi)));
}

StencilOperator assemble_operator(const TorusGrid& grid, const RealField& V) {
  if (static_cast<int>(V.values.size()) != grid.cell_count())
    throw std::invalid_argument("assemble_operator: potential size mismatch");
  return StencilOperator{grid, V};
}

RealField EigenSystem::mode_field(int k) const {
  RealField out(grid);
  Eigen::VectorXd::Map(out.values.data(), modes.rows()) = modes.col(k);
  return out;
}

namespace {

void sign_fix_columns(Eigen::MatrixXd& M) {
  for (Eigen::Index c = 0; c < M.cols(); ++c) {
    const double mx = M.col(c).cwiseAbs().maxCoeff();
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
      if (std::fabs(M(r, c)) > 1e-8 * mx) {
        if (M(r, c) < 0) M.col(c) = -M.col(c);
        break;
      }
    }
  }
}

struct RawSolve {
  std::vector<double> values;
  Eigen::MatrixXd vectors;  // Euclidean-orthonormal columns
};

// Constant potential: the operator is the Kronecker sum of two periodic 1D
// second-difference operators, so the 2D eigenpairs come from a single n x n
// dense solve.
RawSolve solve_constant(const StencilOperator& op, int K) {
  const int n = op.grid.n_side;
  const double inv_h2 = 1.0 / (op.grid.spacing * op.grid.spacing);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    B(i, i) = 2.0 * inv_h2;
    B(i, (i + 1) % n) -= inv_h2;
    B(i, (i + n - 1) % n) -= inv_h2;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigensolve: 1D factor decomposition failed");
  const Eigen::VectorXd th = es.eigenvalues();
  const Eigen::MatrixXd v = es.eigenvectors();

  std::vector<int> order(static_cast<std::size_t>(n) * n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> lam(order.size());
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) lam[static_cast<std::size_t>(q) * n + p] = th(p) + th(q);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return lam[a] < lam[b]; });

  const double c0 = op.potential[0];
  RawSolve out;
  out.values.resize(K);
  out.vectors.resize(op.grid.cell_count(), K);
  for (int k = 0; k < K; ++k) {
    const int id = order[static_cast<std::size_t>(k)];
    const int p = id % n, q = id / n;
    out.values[static_cast<std::size_t>(k)] = lam[id] + c0;
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix)
        out.vectors(iy * n + ix, k) = v(ix, p) * v(iy, q);
  }
  return out;
}

RawSolve solve_dense(const StencilOperator& op, int K) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.dense());
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigensolve: dense decomposition failed");
  RawSolve out;
  out.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + K);
  out.vectors = es.eigenvectors().leftCols(K);
  return out;
}

// Preconditioned CG solve of (A - sigma) x = b; the preconditioner is the
// constant-coefficient operator (-Delta_h + meanV - sigma)^-1 applied via the
// DFT, which leaves only the potential oscillation to the iteration.
class ShiftedSolver {
 public:
  ShiftedSolver(const StencilOperator& op, double sigma)
      : op_(op), sigma_(sigma), fft_(op.grid) {
    const int n = op.grid.n_side;
    const double meanV =
        std::accumulate(op.potential.values.begin(), op.potential.values.end(), 0.0) /
        op.grid.cell_count();
    symbol_inv_.resize(static_cast<std::size_t>(n) * n);
    for (int my = 0; my < n; ++my)
      for (int mx = 0; mx < n; ++mx)
        symbol_inv_[static_cast<std::size_t>(my) * n + mx] =
            1.0 / (fft_.laplacian_symbol(mx, my) + meanV - sigma);
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& b, double rel_tol, int max_iter) const {
    const Eigen::Index nn = b.size();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(nn);
    Eigen::VectorXd r = b;
    Eigen::VectorXd z = precondition(r);
    Eigen::VectorXd p = z;
    Eigen::VectorXd Ap(nn);
    double rz = r.dot(z);
    const double bnorm = b.norm();
    for (int it = 0; it < max_iter; ++it) {
      apply_shifted(p, Ap);
      const double alpha = rz / p.dot(Ap);
      x += alpha * p;
      r -= alpha * Ap;
      if (r.norm() <= rel_tol * bnorm) break;
      z = precondition(r);
      const double rz_new = r.dot(z);
      p = z + (rz_new / rz) * p;
      rz = rz_new;
    }
    return x;
  }

  void apply_shifted(const Eigen::VectorXd& in, Eigen::VectorXd& out) const {
    op_.apply(in.data(), out.data());
    out -= sigma_ * in;
  }

 private:
  Eigen::VectorXd precondition(const Eigen::VectorXd& r) const {
    const std::size_t nn = static_cast<std::size_t>(r.size());
    buf_in_.resize(nn);
    buf_out_.resize(nn);
    for (std::size_t i = 0; i < nn; ++i) buf_in_[i] = r(static_cast<Eigen::Index>(i));
    fft_.forward(buf_in_.data(), buf_out_.data());
    for (std::size_t i = 0; i < nn; ++i) buf_out_[i] *= symbol_inv_[i];
    fft_.inverse(buf_out_.data(), buf_in_.data());
    Eigen::VectorXd z(r.size());
    for (std::size_t i = 0; i < nn; ++i) z(static_cast<Eigen::Index>(i)) = buf_in_[i].real();
    return z;
  }

  const StencilOperator& op_;
  double sigma_;
  Fourier2D fft_;
  std::vector<double> symbol_inv_;
  mutable std::vector<std::complex<double>> buf_in_, buf_out_;
};

// Shift-invert Lanczos with full reorthogonalization for the lowest K pairs
// on grids too large for the dense path.
RawSolve solve_lanczos(const StencilOperator& op, int K, const EigenSolveOptions& opts) {
  const int nn = op.grid.cell_count();
  const double sigma = op.potential_min() - 1.0;
  ShiftedSolver solver(op, sigma);

  int m = opts.max_lanczos_steps > 0 ? opts.max_lanczos_steps
                                     : std::min(nn, std::max(4 * K + 32, 96));
  Rng rng(opts.seed);

  Eigen::MatrixXd Q(nn, m + 1);
  Eigen::VectorXd alpha(m), beta(m);
  Eigen::VectorXd v(nn);
  for (int i = 0; i < nn; ++i) v(i) = rng.uniform(-1.0, 1.0);
  v.normalize();
  Q.col(0) = v;

  int steps = 0;
  for (int j = 0; j < m; ++j) {
    Eigen::VectorXd w = solver.solve(Q.col(j), 1e-13, 400);
    if (j > 0) w -= beta(j - 1) * Q.col(j - 1);
    alpha(j) = w.dot(Q.col(j));
    w -= alpha(j) * Q.col(j);
    // full reorthogonalization, twice
    for (int pass = 0; pass < 2; ++pass)
      w -= Q.leftCols(j + 1) * (Q.leftCols(j + 1).transpose() * w);
    beta(j) = w.norm();
    steps = j + 1;
    if (beta(j) < 1e-14) break;
    Q.col(j + 1) = w / beta(j);
  }

  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(steps, steps);
  for (int j = 0; j < steps; ++j) {
    T(j, j) = alpha(j);
    if (j + 1 < steps) {
      T(j, j + 1) = beta(j);
      T(j + 1, j) = beta(j);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  // Largest Ritz values of (A - sigma)^-1 give the lowest eigenvalues of A.
  RawSolve out;
  out.values.resize(K);
  out.vectors.resize(nn, K);
  for (int k = 0; k < K; ++k) {
    const int idx = steps - 1 - k;
    if (idx < 0) throw std::runtime_error("eigensolve: Lanczos basis exhausted");
    const double theta = es.eigenvalues()(idx);
    out.values[static_cast<std::size_t>(k)] = sigma + 1.0 / theta;
    out.vectors.col(k) = Q.leftCols(steps) * es.eigenvectors().col(idx);
    out.vectors.col(k).normalize();
  }
  // ascending eigenvalue order
  std::vector<int> order(K);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return out.values[static_cast<std::size_t>(a)] < out.values[static_cast<std::size_t>(b)];
  });
  RawSolve sorted;
  sorted.values.resize(K);
  sorted.vectors.resize(nn, K);
  for (int k = 0; k < K; ++k) {
    sorted.values[static_cast<std::size_t>(k)] = out.values[static_cast<std::size_t>(order[k])];
    sorted.vectors.col(k) = out.vectors.col(order[k]);
  }
  return sorted;
}

}  // namespace

EigenSystem eigensolve(const StencilOperator& op, int K, const EigenSolveOptions& opts) {
  if (K < 1 || K > op.grid.cell_count())
    throw std::invalid_argument("eigensolve: K must be in [1, n_side^2]");

  RawSolve raw;
  if (op.potential_constant())
    raw = solve_constant(op, K);
  else if (op.grid.n_side <= opts.dense_max_n_side)
    raw = solve_dense(op, K);
  else
    raw = solve_lanczos(op, K, opts);

  sign_fix_columns(raw.vectors);

  EigenSystem sys;
  sys.grid = op.grid;
  sys.eigenvalues = std::move(raw.values);
  sys.modes = std::move(raw.vectors);
  sys.modes *= 1.0 / op.grid.spacing;  // measure-weighted orthonormal columns
  sys.potential = op.potential;
  sys.residual_tol = opts.residual_tol;
  const double mu1 = sys.eigenvalues.front();
  sys.shift = mu1 >= 1.0 ? 0.0 : 1.0 - mu1;

  // residual certificate
  Eigen::VectorXd Av(op.grid.cell_count());
  for (int k = 0; k < sys.size(); ++k) {
    op.apply(sys.modes.col(k).data(), Av.data());
    const double res = (Av - sys.eigenvalues[static_cast<std::size_t>(k)] * sys.modes.col(k)).norm() /
                       sys.modes.col(k).norm();
    sys.max_residual = std::max(sys.max_residual, res);
    if (res > sys.residual_tol * (std::fabs(sys.eigenvalues[static_cast<std::size_t>(k)]) + 1.0))
      throw std::runtime_error("eigensolve: residual tolerance not met at index " +
                               std::to_string(k + 1));
  }
  return sys;
}

int weyl_count(const EigenSystem& sys, double mu) {
  if (mu > sys.eigenvalues.back())
    throw std::invalid_argument("weyl_count: mu exceeds the computed spectrum");
  return static_cast<int>(std::upper_bound(sys.eigenvalues.begin(), sys.eigenvalues.end(), mu) -
                          sys.eigenvalues.begin());
}

Eigen::VectorXcd analyze(const EigenSystem& sys, const ComplexField& u) {
  const double w2 = sys.grid.spacing * sys.grid.spacing;
  Eigen::VectorXcd c(sys.size());
  for (int k = 0; k < sys.size(); ++k)
    c(k) = w2 * kernels::ops().zdot_real(sys.modes.col(k).data(), u.values.data(), u.size());
  return c;
}

Eigen::VectorXd analyze(const EigenSystem& sys, const RealField& u) {
  const double w2 = sys.grid.spacing * sys.grid.spacing;
  Eigen::VectorXd c(sys.size());
  for (int k = 0; k < sys.size(); ++k)
    c(k) = w2 * kernels::ops().dot(sys.modes.col(k).data(), u.values.data(), u.size());
  return c;
}

ComplexField synthesize(const EigenSystem& sys, const Eigen::VectorXcd& c) {
  ComplexField out(sys.grid);
  for (int k = 0; k < sys.size(); ++k)
    kernels::ops().zaxpy_real(c(k), sys.modes.col(k).data(), out.values.data(), out.size());
  return out;
}

RealField synthesize(const EigenSystem& sys, const Eigen::VectorXd& c) {
  RealField out(sys.grid);
  for (int k = 0; k < sys.size(); ++k)
    kernels::ops().axpy(c(k), sys.modes.col(k).data(), out.values.data(), out.size());
  return out;
}

namespace {
template <class FieldType>
double sobolev_norm_impl(const EigenSystem& sys, const FieldType& u, double s) {
  if (s < 0.0) throw std::invalid_argument("sobolev_norm: s must be >= 0");
  auto c = analyze(sys, u);
  double acc = 0.0;
  for (int k = 0; k < sys.size(); ++k) {
    const double lam = sys.eigenvalues[static_cast<std::size_t>(k)] + sys.shift;
    acc += std::pow(lam, s) * std::norm(std::complex<double>(c(k)));
  }
  return std::sqrt(acc);
}
}  // namespace

double sobolev_norm(const EigenSystem& sys, const ComplexField& u, double s) {
  return sobolev_norm_impl(sys, u, s);
}

double sobolev_norm(const EigenSystem& sys, const RealField& u, double s) {
  return sobolev_norm_impl(sys, u, s);
}

}  // namespace speclab
