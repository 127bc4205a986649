#include "speclab/sparsity.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace speclab {

GammaSet gamma_set(const std::vector<double>& lambda, const std::vector<int>& subset_indices) {
  if (lambda.empty()) throw std::invalid_argument("gamma_set: empty eigenvalue sequence");
  const double lambda1 = *std::min_element(lambda.begin(), lambda.end());

  std::vector<double> roots;
  roots.reserve(subset_indices.size());
  for (int idx : subset_indices) {
    if (idx < 1 || idx > static_cast<int>(lambda.size()))
      throw std::invalid_argument("gamma_set: subset index out of range");
    roots.push_back(std::sqrt(lambda[static_cast<std::size_t>(idx - 1)] - lambda1 + 1.0));
  }

  GammaSet g;
  std::ostringstream src;
  src << "sqrt-combinations of " << subset_indices.size() << " eigenvalues, lambda1=" << lambda1;
  g.source = src.str();
  if (roots.empty()) return g;

  std::vector<double> pts;
  pts.reserve(3 * roots.size() * roots.size());
  for (double a : roots)
    for (double b : roots) {
      pts.push_back(a - b);
      pts.push_back(a + b);
      pts.push_back(-(a + b));
    }
  std::sort(pts.begin(), pts.end());
  for (double v : pts) {
    if (!g.points.empty() && v - g.points.back() <= 1e-12) {
      g.collisions_flagged = g.collisions_flagged || (v != g.points.back());
      continue;
    }
    g.points.push_back(v);
  }
  return g;
}

double uniform_gap(const GammaSet& gamma) {
  if (gamma.points.size() < 2)
    throw std::invalid_argument("uniform_gap: need at least 2 points");
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < gamma.points.size(); ++i)
    gap = std::min(gap, gamma.points[i] - gamma.points[i - 1]);
  return gap;
}

std::vector<DensityEstimate> upper_uniform_density(const GammaSet& gamma,
                                                   const std::vector<double>& window_schedule) {
  const std::vector<double>& p = gamma.points;
  if (p.empty()) return {};
  const double span = p.back() - p.front();
  std::vector<DensityEstimate> out;
  double prev = 0.0;
  for (double l : window_schedule) {
    if (!(l > 0.0) || l < prev)
      throw std::invalid_argument("upper_uniform_density: windows must be positive increasing");
    prev = l;
    if (l > span / 4.0)
      throw std::invalid_argument("upper_uniform_density: window exceeds truncation guard span/4");
    // sup over s of #(p cap (s, s+l)): attained with the window opening just
    // before some point; two-pointer sweep over half-open [p_i, p_i + l).
    int best = 0;
    std::size_t j = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (j < i) j = i;
      while (j < p.size() && p[j] - p[i] < l) ++j;
      best = std::max(best, static_cast<int>(j - i));
    }
    out.push_back({l, best / l});
  }
  return out;
}

SparsityReport is_lambda_sparse(const std::vector<double>& lambda,
                                const std::vector<int>& subset_indices,
                                std::vector<double> window_schedule) {
  if (window_schedule.empty()) window_schedule = {10.0, 20.0, 40.0, 80.0};
  SparsityReport rep;
  if (subset_indices.empty()) {
    rep.verdict = SparsityVerdict::sparse;
    rep.empty_subset = true;
    rep.note = "empty subset is sparse by definition";
    return rep;
  }
  if (subset_indices.size() >= lambda.size())
    throw std::invalid_argument("is_lambda_sparse: subset must be a proper subset");

  const GammaSet g = gamma_set(lambda, subset_indices);
  rep.truncation_size = static_cast<int>(g.points.size());
  rep.uniform_gap = g.points.size() >= 2 ? uniform_gap(g) : 0.0;

  // keep only windows below the truncation guard
  const double span = g.points.empty() ? 0.0 : g.points.back() - g.points.front();
  std::vector<double> usable;
  for (double l : window_schedule)
    if (l <= span / 4.0) usable.push_back(l);
  if (usable.empty()) {
    rep.verdict = SparsityVerdict::inconclusive;
    rep.note = "truncation too short for the window schedule";
    return rep;
  }
  rep.density_estimates = upper_uniform_density(g, usable);

  const double last_density = rep.density_estimates.back().density;
  bool decreasing = true;
  for (std::size_t i = 1; i < rep.density_estimates.size(); ++i)
    if (rep.density_estimates[i].density > rep.density_estimates[i - 1].density * (1.0 + 1e-9))
      decreasing = false;

  if (rep.uniform_gap <= 1e-6 || g.collisions_flagged) {
    rep.verdict = SparsityVerdict::not_sparse;
    rep.note = "uniform discreteness fails (gap collapse)";
  } else if (last_density < 0.02 && decreasing) {
    rep.verdict = SparsityVerdict::sparse;
  } else if (last_density > 0.05 && !decreasing) {
    rep.verdict = SparsityVerdict::not_sparse;
    rep.note = "density plateaus above threshold";
  } else if (last_density > 0.05) {
    rep.verdict = SparsityVerdict::not_sparse;
    rep.note = "density above threshold at the longest window";
  } else {
    rep.verdict = SparsityVerdict::inconclusive;
  }
  return rep;
}

SparseSelection select_sparse_subsequence(const std::vector<double>& lambda, double A) {
  if (!(A > 1.0)) throw std::invalid_argument("select_sparse_subsequence: A must exceed 1");
  if (lambda.size() < 2)
    throw std::invalid_argument("select_sparse_subsequence: truncation too short");
  const double lam_max = lambda.back();

  SparseSelection sel;
  for (int k = 0;; ++k) {
    const double lo = std::pow(A, 2 * k);
    const double hi = std::pow(A, 2 * k + 1);
    if (lo >= lam_max) break;
    // smallest index with eigenvalue in (lo, hi]
    int found = -1;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
      if (lambda[i] > lo && lambda[i] <= hi) {
        found = static_cast<int>(i) + 1;
        break;
      }
      if (lambda[i] > hi) break;
    }
    if (found < 0) {
      if (hi > lam_max) break;  // block extends past the truncation; stop cleanly
      std::ostringstream msg;
      msg << "select_sparse_subsequence: empty block (" << lo << ", " << hi
          << "] inside the truncation; covered " << sel.covered_blocks << " blocks";
      throw std::runtime_error(msg.str());
    }
    sel.indices.push_back(found);
    sel.blocks.emplace_back(lo, hi);
    ++sel.covered_blocks;
  }
  if (sel.indices.empty())
    throw std::runtime_error("select_sparse_subsequence: no block fits the truncation");
  return sel;
}

Interpolant bandlimited_interpolant(const std::vector<double>& gamma,
                                    const std::vector<cplx>& c, double t0, double t1,
                                    int m) {
  const int K = static_cast<int>(gamma.size());
  if (K == 0) throw std::invalid_argument("bandlimited_interpolant: empty node set");
  if (static_cast<int>(c.size()) != K)
    throw std::invalid_argument("bandlimited_interpolant: moment count mismatch");
  if (!(t1 > t0)) throw std::invalid_argument("bandlimited_interpolant: empty interval");
  if (m < 8 * K)
    throw std::invalid_argument("bandlimited_interpolant: need m >= 8 * |Gamma| samples");
  for (int i = 0; i < K; ++i)
    for (int j = i + 1; j < K; ++j)
      if (gamma[static_cast<std::size_t>(i)] == gamma[static_cast<std::size_t>(j)])
        throw std::invalid_argument("bandlimited_interpolant: nodes must be distinct");

  Interpolant out;
  out.t.resize(static_cast<std::size_t>(m));
  const double dt = (t1 - t0) / (m - 1);
  for (int j = 0; j < m; ++j) out.t[static_cast<std::size_t>(j)] = t0 + j * dt;

  // trapezoid weights; F(h)(gamma) = int_J h(t) e^{-i t gamma} dt
  Eigen::VectorXd w(m);
  for (int j = 0; j < m; ++j) w(j) = (j == 0 || j == m - 1) ? dt / 2.0 : dt;
  Eigen::MatrixXcd B(K, m);
  for (int k = 0; k < K; ++k)
    for (int j = 0; j < m; ++j)
      B(k, j) = w(j) * std::exp(cplx(0.0, -gamma[static_cast<std::size_t>(k)] *
                                              out.t[static_cast<std::size_t>(j)]));

  // min sum w_j |h_j|^2 subject to B h = c  =>  h = W^-1 B^H y, (B W^-1 B^H) y = c
  Eigen::MatrixXcd G(K, K);
  for (int a = 0; a < K; ++a)
    for (int b = 0; b < K; ++b) {
      cplx s = 0.0;
      for (int j = 0; j < m; ++j) s += B(a, j) * std::conj(B(b, j)) / w(j);
      G(a, b) = s;
    }
  Eigen::VectorXcd cv(K);
  for (int k = 0; k < K; ++k) cv(k) = c[static_cast<std::size_t>(k)];

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(G, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smax = svd.singularValues().maxCoeff();
  const double smin = svd.singularValues().minCoeff();
  out.condition = smin > 0 ? smax / smin : std::numeric_limits<double>::infinity();
  if (!(smin > smax * 1e-14)) {
    std::ostringstream msg;
    msg << "bandlimited_interpolant: ill-conditioned sampling system, condition "
        << out.condition;
    throw std::runtime_error(msg.str());
  }
  const Eigen::VectorXcd y = svd.solve(cv);

  out.values.resize(m);
  for (int j = 0; j < m; ++j) {
    cplx s = 0.0;
    for (int k = 0; k < K; ++k) s += std::conj(B(k, j)) * y(k);
    out.values(j) = s / w(j);
  }
  double nrm2 = 0.0;
  for (int j = 0; j < m; ++j) nrm2 += w(j) * std::norm(out.values(j));
  out.norm = std::sqrt(nrm2);
  const Eigen::VectorXcd achieved = B * out.values;
  out.residuals.resize(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k)
    out.residuals[static_cast<std::size_t>(k)] = std::abs(achieved(k) - cv(k));
  return out;
}

namespace {

Eigen::MatrixXd synthesis_matrix(const EigenSystem& sys, const std::vector<int>& D,
                                 const ObservationSet& U) {
  const std::vector<int> cells = U.cells();
  if (cells.empty()) throw std::invalid_argument("synthesis map: U is empty");
  Eigen::MatrixXd S(static_cast<Eigen::Index>(cells.size()),
                    static_cast<Eigen::Index>(D.size()));
  const double h = sys.grid.spacing;
  for (std::size_t k = 0; k < D.size(); ++k) {
    const int idx = D[k];
    if (idx < 1 || idx > sys.size())
      throw std::invalid_argument("synthesis map: index out of range");
    for (std::size_t ci = 0; ci < cells.size(); ++ci)
      S(static_cast<Eigen::Index>(ci), static_cast<Eigen::Index>(k)) =
          h * sys.modes(cells[ci], idx - 1);
  }
  return S;
}

}  // namespace

std::pair<double, double> frame_bounds(const EigenSystem& sys, const std::vector<int>& D,
                                       const ObservationSet& U) {
  const Eigen::MatrixXd S = synthesis_matrix(sys, D, U);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(S);
  return {svd.singularValues().minCoeff(), svd.singularValues().maxCoeff()};
}

MembershipResult membership_test(const EigenSystem& sys, const std::vector<int>& D,
                                 const ObservationSet& U, const Eigen::VectorXcd& Phi,
                                 double lambda) {
  const Eigen::MatrixXcd S = synthesis_matrix(sys, D, U).cast<cplx>();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(S, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.singularValues().minCoeff() <= 1e-10)
    throw std::runtime_error("membership_test: frame sigma_min below 1e-10");

  MembershipResult res;
  const double h = sys.grid.spacing;
  const Eigen::VectorXcd target = h * Phi;  // weighted, to match S's scaling
  const double tnorm = target.norm();
  if (tnorm == 0.0) {
    res.in_range = true;
    res.residual = 0.0;
    return res;
  }
  const Eigen::VectorXcd a = svd.solve(target);
  res.residual = (S * a - target).norm() / tnorm;
  res.in_range = res.residual < 1e-6;
  if (res.in_range) {
    for (int idx : D) {
      const double mu = sys.eigenvalues[static_cast<std::size_t>(idx - 1)];
      if (std::fabs(mu - lambda) <= 1e-6 * (1.0 + std::fabs(mu))) {
        res.identified_eigenvalue = mu;
        break;
      }
    }
  }
  return res;
}

}  // namespace speclab
