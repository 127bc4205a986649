#include "speclab/spectral_data.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "speclab/rng.hpp"

namespace speclab {

namespace {

Eigen::MatrixXcd restriction_matrix(const SpectralDataset& ds) {
  const int cells = ds.size() > 0 ? static_cast<int>(ds.entries.front().restriction.size()) : 0;
  Eigen::MatrixXcd R(cells, ds.size());
  for (int k = 0; k < ds.size(); ++k) R.col(k) = ds.entries[static_cast<std::size_t>(k)].restriction;
  return R;
}

}  // namespace

double gram_smallest_singular_value(const SpectralDataset& ds) {
  if (ds.size() == 0) return 0.0;
  const double w2 = ds.observation.grid.spacing * ds.observation.grid.spacing;
  const Eigen::MatrixXcd R = restriction_matrix(ds);
  const Eigen::MatrixXcd G = w2 * (R.adjoint() * R);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(G);
  return svd.singularValues().minCoeff();
}

SpectralDataset restrict_modes(const EigenSystem& sys, const ObservationSet& obs,
                               const std::vector<int>& indices) {
  if (indices.empty()) throw std::invalid_argument("restrict_modes: empty index list");
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 1 || indices[i] > sys.size())
      throw std::invalid_argument("restrict_modes: index out of range");
    if (i > 0 && indices[i] <= indices[i - 1])
      throw std::invalid_argument("restrict_modes: indices must be strictly increasing");
  }
  const std::vector<int> cells = obs.cells();
  SpectralDataset ds;
  ds.observation = obs;
  ds.orthonormalized = true;
  for (int idx : indices) {
    SpectralEntry e;
    e.index = idx;
    e.eigenvalue = sys.eigenvalues[static_cast<std::size_t>(idx - 1)];
    e.restriction.resize(static_cast<Eigen::Index>(cells.size()));
    for (std::size_t c = 0; c < cells.size(); ++c)
      e.restriction(static_cast<Eigen::Index>(c)) = sys.modes(cells[c], idx - 1);
    ds.entries.push_back(std::move(e));
  }
  if (gram_smallest_singular_value(ds) <= 1e-12)
    throw std::runtime_error(
        "restrict_modes: restricted family numerically dependent; "
        "O too small for the requested modes at this resolution");
  return ds;
}

SpectralDataset scale_dataset(const SpectralDataset& ds, const std::vector<cplx>& scalars) {
  if (static_cast<int>(scalars.size()) != ds.size())
    throw std::invalid_argument("scale_dataset: scalar count mismatch");
  for (const cplx& s : scalars)
    if (std::abs(s) == 0.0) throw std::invalid_argument("scale_dataset: zero scalar");
  SpectralDataset out = ds;
  out.orthonormalized = false;
  for (int k = 0; k < out.size(); ++k)
    out.entries[static_cast<std::size_t>(k)].restriction *= scalars[static_cast<std::size_t>(k)];
  return out;
}

std::vector<cplx> random_gauge_scalars(std::uint64_t seed, int n) {
  Rng rng(seed);
  std::vector<cplx> out(static_cast<std::size_t>(n));
  for (auto& s : out) {
    const double mag = rng.uniform(0.2, 5.0);
    const double ph = rng.uniform(0.0, kTwoPi);
    s = std::polar(mag, ph);
  }
  return out;
}

std::vector<cplx> random_dyadic_gauge_scalars(std::uint64_t seed, int n) {
  Rng rng(seed);
  std::vector<cplx> out(static_cast<std::size_t>(n));
  for (auto& s : out) {
    const double mag = std::ldexp(1.0, rng.uniform_int(-2, 2));  // 0.25 .. 4
    switch (rng.uniform_int(0, 3)) {
      case 0: s = cplx(mag, 0.0); break;
      case 1: s = cplx(-mag, 0.0); break;
      case 2: s = cplx(0.0, mag); break;
      default: s = cplx(0.0, -mag); break;
    }
  }
  return out;
}

std::pair<EigenSystem, SpectralDataset> pair_gram_schmidt(const SpectralDataset& ds1,
                                                          const SpectralDataset& ds2,
                                                          const EigenSystem& full1) {
  if (ds1.size() != ds2.size())
    throw std::invalid_argument("pair_gram_schmidt: dataset length mismatch");
  const int K = ds1.size();
  for (int k = 0; k < K; ++k) {
    const double m1 = ds1.entries[static_cast<std::size_t>(k)].eigenvalue;
    const double m2 = ds2.entries[static_cast<std::size_t>(k)].eigenvalue;
    if (std::fabs(m1 - m2) > 1e-8 * (1.0 + std::fabs(m1)))
      throw std::invalid_argument("pair_gram_schmidt: eigenvalue mismatch between datasets");
  }

  const double w2 = full1.grid.spacing * full1.grid.spacing;
  const std::vector<int> cells = ds1.observation.cells();
  const Eigen::Index nc = static_cast<Eigen::Index>(cells.size());

  // Reconstruct the global functions behind ds1: least squares within the
  // matching eigenspace of full1 (exact when the restrictions come from
  // eigenspace members).
  Eigen::MatrixXcd globals(full1.modes.rows(), K);
  const double eig_tol = 1e-8;
  for (int k = 0; k < K; ++k) {
    const double mu = ds1.entries[static_cast<std::size_t>(k)].eigenvalue;
    std::vector<int> group;
    for (int j = 0; j < full1.size(); ++j)
      if (std::fabs(full1.eigenvalues[static_cast<std::size_t>(j)] - mu) <=
          eig_tol * (1.0 + std::fabs(mu)))
        group.push_back(j);
    if (group.empty())
      throw std::invalid_argument("pair_gram_schmidt: full1 lacks the eigenvalue of entry " +
                                  std::to_string(k + 1));
    Eigen::MatrixXcd basisO(nc, static_cast<Eigen::Index>(group.size()));
    for (std::size_t g = 0; g < group.size(); ++g)
      for (Eigen::Index c = 0; c < nc; ++c)
        basisO(c, static_cast<Eigen::Index>(g)) = full1.modes(cells[static_cast<std::size_t>(c)], group[g]);
    const Eigen::VectorXcd beta =
        basisO.colPivHouseholderQr().solve(ds1.entries[static_cast<std::size_t>(k)].restriction);
    globals.col(k).setZero();
    for (std::size_t g = 0; g < group.size(); ++g)
      globals.col(k) += beta(static_cast<Eigen::Index>(g)) * full1.modes.col(group[g]).cast<cplx>();
  }

  // Modified Gram-Schmidt in discrete L^2(M); W accumulates the triangular
  // coefficient transform q_i = sum_j W(i,j) g_j.
  Eigen::MatrixXcd Q = globals;
  Eigen::MatrixXcd W = Eigen::MatrixXcd::Identity(K, K);
  for (int i = 0; i < K; ++i) {
    for (int j = 0; j < i; ++j) {
      const cplx r = w2 * (Q.col(j).adjoint() * Q.col(i))(0);
      Q.col(i) -= r * Q.col(j);
      W.row(i) -= r * W.row(j);
    }
    const double nrm = std::sqrt(w2) * Q.col(i).norm();
    if (nrm < 1e-12)
      throw std::runtime_error("pair_gram_schmidt: rank-deficient global family at entry " +
                               std::to_string(i + 1));
    Q.col(i) /= nrm;
    W.row(i) /= nrm;
  }

  EigenSystem ortho;
  ortho.grid = full1.grid;
  ortho.potential = full1.potential;
  ortho.residual_tol = full1.residual_tol;
  ortho.shift = full1.shift;
  ortho.eigenvalues.resize(static_cast<std::size_t>(K));
  // Orthonormalized global eigenfunctions stay real up to a unit phase; keep
  // the real part after rotating the leading coefficient to the real axis.
  ortho.modes.resize(full1.modes.rows(), K);
  for (int k = 0; k < K; ++k) {
    ortho.eigenvalues[static_cast<std::size_t>(k)] = ds1.entries[static_cast<std::size_t>(k)].eigenvalue;
    Eigen::Index imax = 0;
    Q.col(k).cwiseAbs().maxCoeff(&imax);
    const cplx lead = Q(imax, k);
    const cplx rot = std::abs(lead) > 0 ? std::conj(lead) / std::abs(lead) : cplx(1.0, 0.0);
    const Eigen::VectorXcd rotated = rot * Q.col(k);
    if (rotated.imag().norm() > 1e-8 * rotated.norm())
      throw std::runtime_error(
          "pair_gram_schmidt: eigenspace mixture is not real up to gauge");
    ortho.modes.col(k) = rotated.real();
    W.row(k) *= rot;
  }

  SpectralDataset ds2t = ds2;
  ds2t.orthonormalized = true;
  Eigen::MatrixXcd R2(nc, K);
  for (int k = 0; k < K; ++k) R2.col(k) = ds2.entries[static_cast<std::size_t>(k)].restriction;
  for (int k = 0; k < K; ++k)
    ds2t.entries[static_cast<std::size_t>(k)].restriction = R2 * W.row(k).transpose();
  return {std::move(ortho), std::move(ds2t)};
}

ObservabilityReport observability_constants(const EigenSystem& sys,
                                            const ObservationSet& obs, int K) {
  if (K < 1 || K > sys.size())
    throw std::invalid_argument("observability_constants: K out of range");
  const std::vector<int> cells = obs.cells();
  const double h = sys.grid.spacing;

  ObservabilityReport rep;
  rep.tested_K = K;
  int k = 0;
  while (k < K) {
    const double mu = sys.eigenvalues[static_cast<std::size_t>(k)];
    int end = k + 1;
    while (end < K && std::fabs(sys.eigenvalues[static_cast<std::size_t>(end)] - mu) <=
                          1e-8 * (1.0 + std::fabs(mu)))
      ++end;
    Eigen::MatrixXd B(static_cast<Eigen::Index>(cells.size()), end - k);
    for (int j = k; j < end; ++j)
      for (std::size_t c = 0; c < cells.size(); ++c)
        B(static_cast<Eigen::Index>(c), j - k) = h * sys.modes(cells[c], j);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(B);
    const double smin = svd.singularValues().minCoeff();
    rep.group_eigenvalues.push_back(mu);
    if (smin <= 1e-14) {
      rep.unobservable_flagged = true;
      rep.per_eigenspace.push_back(std::numeric_limits<double>::infinity());
    } else {
      rep.per_eigenspace.push_back(1.0 / smin);
    }
    k = end;
  }
  rep.overall = *std::max_element(rep.per_eigenspace.begin(), rep.per_eigenspace.end());
  return rep;
}

ComplexField dual_test_function(const SpectralDataset& ds, const std::vector<cplx>& c) {
  if (static_cast<int>(c.size()) != ds.size())
    throw std::invalid_argument("dual_test_function: coefficient count mismatch");
  const double w2 = ds.observation.grid.spacing * ds.observation.grid.spacing;
  const std::vector<int> cells = ds.observation.cells();
  const Eigen::MatrixXcd R = restriction_matrix(ds);

  // Constraints: w2 * R^H theta = c with theta supported on O; the minimum
  // weighted-norm solution is theta = R y with w2 * (R^H R) y = c.
  const Eigen::MatrixXcd G = w2 * (R.adjoint() * R);
  Eigen::VectorXcd rhs(ds.size());
  for (int k = 0; k < ds.size(); ++k) rhs(k) = c[static_cast<std::size_t>(k)];
  Eigen::LDLT<Eigen::MatrixXcd> ldlt(G);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("dual_test_function: singular Gram matrix");
  const Eigen::VectorXcd y = ldlt.solve(rhs);
  const double rel_res = (G * y - rhs).norm() / std::max(1e-300, rhs.norm());
  if (rel_res > 1e-6) throw std::runtime_error("dual_test_function: singular Gram matrix");

  const Eigen::VectorXcd thetaO = R * y;
  ComplexField theta(ds.observation.grid);
  for (std::size_t i = 0; i < cells.size(); ++i)
    theta[static_cast<std::size_t>(cells[i])] = thetaO(static_cast<Eigen::Index>(i));
  return theta;
}

}  // namespace speclab
