#include "speclab/recovery.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace speclab {

OnOPotential recover_potential_on_O(const SpectralDataset& ds, const TorusGrid& grid,
                                    const ObservationSet& obs, double theta) {
  const int n = grid.n_side;
  const double inv_h2 = 1.0 / (grid.spacing * grid.spacing);
  const std::vector<int> cells = obs.cells();
  const int K = ds.size();
  if (K == 0) throw std::invalid_argument("recover_potential_on_O: empty dataset");

  // position of each grid cell inside the O cell list (-1 if outside)
  std::vector<int> pos(static_cast<std::size_t>(grid.cell_count()), -1);
  for (std::size_t i = 0; i < cells.size(); ++i) pos[static_cast<std::size_t>(cells[i])] = static_cast<int>(i);

  // Per-mode data in split re/im arrays; all subsequent arithmetic keeps a
  // fixed evaluation order so per-mode rescaling cancels exactly.
  std::vector<std::vector<double>> re(K), im(K);
  std::vector<double> sum_abs2(static_cast<std::size_t>(K), 0.0);
  std::vector<double> max_abs2(static_cast<std::size_t>(K), 0.0);
  for (int k = 0; k < K; ++k) {
    const Eigen::VectorXcd& r = ds.entries[static_cast<std::size_t>(k)].restriction;
    if (r.size() != static_cast<Eigen::Index>(cells.size()))
      throw std::invalid_argument("recover_potential_on_O: restriction size mismatch");
    re[static_cast<std::size_t>(k)].resize(cells.size());
    im[static_cast<std::size_t>(k)].resize(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const double a = r(static_cast<Eigen::Index>(c)).real();
      const double b = r(static_cast<Eigen::Index>(c)).imag();
      re[static_cast<std::size_t>(k)][c] = a;
      im[static_cast<std::size_t>(k)][c] = b;
      const double abs2 = a * a + b * b;
      sum_abs2[static_cast<std::size_t>(k)] += abs2;
      max_abs2[static_cast<std::size_t>(k)] = std::max(max_abs2[static_cast<std::size_t>(k)], abs2);
    }
  }

  OnOPotential out;
  out.values = RealField(grid);
  out.trusted_mask.assign(static_cast<std::size_t>(grid.cell_count()), 0);

  const double theta2 = theta * theta;
  int trusted_count = 0;
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    const int cell = cells[ci];
    const int ix = cell % n, iy = cell / n;
    const int e = pos[static_cast<std::size_t>(grid.index(ix + 1, iy))];
    const int w = pos[static_cast<std::size_t>(grid.index(ix - 1, iy))];
    const int nn = pos[static_cast<std::size_t>(grid.index(ix, iy + 1))];
    const int ss = pos[static_cast<std::size_t>(grid.index(ix, iy - 1))];
    if (e < 0 || w < 0 || nn < 0 || ss < 0) continue;  // stencil must stay in O

    bool any_above_threshold = false;
    double num_acc = 0.0, den_acc = 0.0;
    for (int k = 0; k < K; ++k) {
      const std::vector<double>& kr = re[static_cast<std::size_t>(k)];
      const std::vector<double>& ki = im[static_cast<std::size_t>(k)];
      const double pr = kr[ci], pi = ki[ci];
      const double abs2 = pr * pr + pi * pi;
      if (abs2 >= theta2 * max_abs2[static_cast<std::size_t>(k)]) any_above_threshold = true;
      if (abs2 == 0.0) continue;
      // N = (-Delta_h psi)(x), componentwise in fixed order
      const double nr = (4.0 * kr[ci] - kr[static_cast<std::size_t>(e)] - kr[static_cast<std::size_t>(w)] -
                         kr[static_cast<std::size_t>(nn)] - kr[static_cast<std::size_t>(ss)]) * inv_h2;
      const double ni = (4.0 * ki[ci] - ki[static_cast<std::size_t>(e)] - ki[static_cast<std::size_t>(w)] -
                         ki[static_cast<std::size_t>(nn)] - ki[static_cast<std::size_t>(ss)]) * inv_h2;
      // ratio N / psi computed as (N * conj(psi)) / |psi|^2
      const double ratio_re = (nr * pr + ni * pi) / abs2;
      const double ratio_im = (ni * pr - nr * pi) / abs2;
      out.max_imaginary_leak = std::max(out.max_imaginary_leak, std::fabs(ratio_im));
      const double v_k = ds.entries[static_cast<std::size_t>(k)].eigenvalue - ratio_re;
      const double weight = abs2 / sum_abs2[static_cast<std::size_t>(k)];
      num_acc += weight * v_k;
      den_acc += weight;
    }
    if (!any_above_threshold || den_acc == 0.0) continue;
    out.values[static_cast<std::size_t>(cell)] = num_acc / den_acc;
    out.trusted_mask[static_cast<std::size_t>(cell)] = 1;
    ++trusted_count;
  }
  if (trusted_count == 0)
    throw std::runtime_error("recover_potential_on_O: empty trusted mask");
  return out;
}

namespace {

double regularization_term(const RealField& V) {
  const TorusGrid& g = V.grid;
  const int n = g.n_side;
  double acc = 0.0;
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      const double c = V[static_cast<std::size_t>(g.index(ix, iy))];
      const double de = V[static_cast<std::size_t>(g.index(ix + 1, iy))] - c;
      const double dn = V[static_cast<std::size_t>(g.index(ix, iy + 1))] - c;
      acc += de * de + dn * dn;
    }
  return acc;
}

RealField regularization_gradient(const RealField& V) {
  RealField out = laplacian_neg(V);
  const double h2 = V.grid.spacing * V.grid.spacing;
  for (auto& v : out.values) v *= 2.0 * h2;
  return out;
}

struct MatchedMode {
  int obs_index;   // entry position in the target dataset
  int sys_index;   // 0-based computed mode
  double weight;
  cplx gauge;
  double eig_term;
  double fun_term;
  bool simple;
};

struct MisfitEval {
  EigenSystem sys;
  std::vector<MatchedMode> matched;
  int unmatched = 0;
  MisfitParts parts;
};

int required_mode_count(const SpectralDataset& target, const TorusGrid& grid, int margin) {
  const int want = target.size() * 2 + margin;
  return std::min(grid.cell_count(), std::max(want, target.size() + 2));
}

MisfitEval evaluate_misfit(const RealField& V, const SpectralDataset& target,
                           const std::vector<double>& weights, double lambda,
                           const MisfitOptions& opts) {
  if (target.size() == 0) {
    MisfitEval ev;
    ev.parts.regularization = lambda * regularization_term(V);
    return ev;
  }
  const TorusGrid& grid = V.grid;
  StencilOperator op = assemble_operator(grid, V);
  EigenSolveOptions eopts;
  eopts.seed = opts.seed;
  int K = required_mode_count(target, grid, opts.solve_margin);
  EigenSystem sys = eigensolve(op, K, eopts);
  const double mu_obs_max = target.entries.back().eigenvalue;
  while (sys.eigenvalues.back() < mu_obs_max + 0.5 && K < grid.cell_count()) {
    K = std::min(grid.cell_count(), 2 * K);
    sys = eigensolve(op, K, eopts);
  }

  // synthesize the computed dataset on the same O and pair by eigenvalue
  const std::vector<int> cells = target.observation.cells();
  const std::vector<double>& mu = sys.eigenvalues;

  MisfitEval ev;
  int j0 = 0;
  for (int i = 0; i < target.size(); ++i) {
    const SpectralEntry& e = target.entries[static_cast<std::size_t>(i)];
    const double tol = opts.eig_match_tol * (1.0 + std::fabs(e.eigenvalue));
    int best = -1;
    double best_gap = tol;
    for (int j = j0; j < sys.size(); ++j) {
      const double gap = std::fabs(mu[static_cast<std::size_t>(j)] - e.eigenvalue);
      if (mu[static_cast<std::size_t>(j)] > e.eigenvalue + tol) break;
      if (gap <= best_gap) {
        best_gap = gap;
        best = j;
      }
    }
    const double w = weights.empty() ? 1.0 : weights[static_cast<std::size_t>(i)];
    if (best < 0) {
      ++ev.unmatched;
      ev.parts.data += opts.unmatched_penalty * w;
      continue;
    }
    j0 = best + 1;

    MatchedMode m;
    m.obs_index = i;
    m.sys_index = best;
    m.weight = w;
    const double denom = 1.0 + e.eigenvalue;
    const double dmu = mu[static_cast<std::size_t>(best)] - e.eigenvalue;
    m.eig_term = dmu * dmu / (denom * denom);

    // gauge-aligned restriction error
    Eigen::VectorXcd psi_hat(static_cast<Eigen::Index>(cells.size()));
    for (std::size_t c = 0; c < cells.size(); ++c)
      psi_hat(static_cast<Eigen::Index>(c)) = sys.modes(cells[c], best);
    const double nh2 = psi_hat.squaredNorm();
    const double no2 = e.restriction.squaredNorm();
    const cplx g = nh2 > 0 ? ((psi_hat.adjoint() * e.restriction)(0) / nh2) : cplx(0, 0);
    m.gauge = g;
    m.fun_term = no2 > 0 ? (g * psi_hat - e.restriction).squaredNorm() / no2 : 0.0;

    const double gap_lo = best > 0 ? mu[static_cast<std::size_t>(best)] - mu[static_cast<std::size_t>(best - 1)]
                                   : std::numeric_limits<double>::infinity();
    const double gap_hi = best + 1 < sys.size()
                              ? mu[static_cast<std::size_t>(best + 1)] - mu[static_cast<std::size_t>(best)]
                              : std::numeric_limits<double>::infinity();
    m.simple = std::min(gap_lo, gap_hi) > 1e-6 * (1.0 + std::fabs(mu[static_cast<std::size_t>(best)]));

    ev.parts.data += w * (m.eig_term + m.fun_term);
    ev.matched.push_back(std::move(m));
  }
  ev.parts.matched = static_cast<int>(ev.matched.size());
  ev.parts.unmatched = ev.unmatched;
  ev.parts.regularization = lambda * regularization_term(V);
  ev.sys = std::move(sys);
  return ev;
}

}  // namespace

double spectral_misfit(const RealField& V, const SpectralDataset& target,
                       const std::vector<double>& weights, double lambda,
                       const MisfitOptions& opts, MisfitParts* parts) {
  MisfitEval ev = evaluate_misfit(V, target, weights, lambda, opts);
  if (parts != nullptr) *parts = ev.parts;
  return ev.parts.total();
}

MisfitGradient misfit_gradient(const RealField& V, const SpectralDataset& target,
                               const std::vector<double>& weights, double lambda,
                               const MisfitOptions& opts) {
  MisfitGradient out;
  out.gradient = regularization_gradient(V);
  for (auto& v : out.gradient.values) v *= lambda;
  if (target.size() == 0) return out;

  MisfitEval ev = evaluate_misfit(V, target, weights, lambda, opts);
  const EigenSystem& sys = ev.sys;
  const TorusGrid& grid = V.grid;
  const double h2 = grid.spacing * grid.spacing;
  const std::vector<int> cells = target.observation.cells();

  int usable = 0;
  for (const MatchedMode& m : ev.matched) {
    if (!m.simple) {
      ++out.frozen_modes;
      continue;
    }
    ++usable;
    const int k = m.sys_index;
    const SpectralEntry& e = target.entries[static_cast<std::size_t>(m.obs_index)];
    const double mu_k = sys.eigenvalues[static_cast<std::size_t>(k)];

    // eigenvalue term: dmu/dV(x) = h^2 phi_k(x)^2
    const double denom = 1.0 + e.eigenvalue;
    const double eig_pref = m.weight * 2.0 * (mu_k - e.eigenvalue) / (denom * denom) * h2;
    for (int x = 0; x < grid.cell_count(); ++x) {
      const double p = sys.modes(x, k);
      out.gradient[static_cast<std::size_t>(x)] += eig_pref * p * p;
    }

    // eigenfunction term with the gauge held at its optimum
    const double no2 = e.restriction.squaredNorm();
    if (no2 <= 0.0) continue;
    Eigen::VectorXcd psi_hat(static_cast<Eigen::Index>(cells.size()));
    for (std::size_t c = 0; c < cells.size(); ++c)
      psi_hat(static_cast<Eigen::Index>(c)) = sys.modes(cells[c], k);
    const cplx g = m.gauge;
    // dE/dphi(y) = (2 w / no2) Re[conj(g) (g phi(y) - psi_obs(y))] on O
    Eigen::VectorXd G = Eigen::VectorXd::Zero(grid.cell_count());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const cplx diff = g * psi_hat(static_cast<Eigen::Index>(c)) -
                        e.restriction(static_cast<Eigen::Index>(c));
      G(cells[c]) = 2.0 * m.weight / no2 * (std::conj(g) * diff).real();
    }
    // first-order eigenvector perturbation over the full decomposition
    const Eigen::VectorXd q = sys.modes.transpose() * G;  // q_j = sum_y G(y) phi_j(y)
    Eigen::VectorXd coef = Eigen::VectorXd::Zero(sys.size());
    for (int j = 0; j < sys.size(); ++j) {
      if (j == k) continue;
      const double gap = sys.eigenvalues[static_cast<std::size_t>(k)] -
                         sys.eigenvalues[static_cast<std::size_t>(j)];
      if (std::fabs(gap) < 1e-12) continue;
      coef(j) = q(j) / gap;
    }
    const Eigen::VectorXd corr = sys.modes * coef;
    for (int x = 0; x < grid.cell_count(); ++x)
      out.gradient[static_cast<std::size_t>(x)] += h2 * corr(x) * sys.modes(x, k);
  }
  out.data_gradient_available = usable > 0 || ev.matched.empty();
  return out;
}

RealField warm_start_potential(const SpectralDataset& ds, const TorusGrid& grid,
                               const ObservationSet& obs, double theta,
                               std::vector<std::uint8_t>* trusted_out) {
  OnOPotential on_o = recover_potential_on_O(ds, grid, obs, theta);
  if (trusted_out != nullptr) *trusted_out = on_o.trusted_mask;

  // harmonic fill: Delta_h V = 0 on free cells, trusted values as data
  std::vector<int> free_cells;
  for (int i = 0; i < grid.cell_count(); ++i)
    if (!on_o.trusted_mask[static_cast<std::size_t>(i)]) free_cells.push_back(i);
  if (free_cells.empty()) return on_o.values;

  std::vector<int> fpos(static_cast<std::size_t>(grid.cell_count()), -1);
  for (std::size_t i = 0; i < free_cells.size(); ++i)
    fpos[static_cast<std::size_t>(free_cells[i])] = static_cast<int>(i);

  const int n = grid.n_side;
  const Eigen::Index m = static_cast<Eigen::Index>(free_cells.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const int cell = free_cells[static_cast<std::size_t>(r)];
    const int ix = cell % n, iy = cell / n;
    const int nb[4] = {grid.index(ix + 1, iy), grid.index(ix - 1, iy),
                       grid.index(ix, iy + 1), grid.index(ix, iy - 1)};
    A(r, r) = 4.0;
    for (int q : nb) {
      const int fp = fpos[static_cast<std::size_t>(q)];
      if (fp >= 0)
        A(r, fp) -= 1.0;
      else
        b(r) += on_o.values[static_cast<std::size_t>(q)];
    }
  }
  const Eigen::VectorXd x = A.ldlt().solve(b);
  RealField out = on_o.values;
  for (Eigen::Index r = 0; r < m; ++r)
    out[static_cast<std::size_t>(free_cells[static_cast<std::size_t>(r)])] = x(r);
  return out;
}

RecoveryResult recover_potential_global(const SpectralDataset& target, const RealField& V0,
                                        const RecoveryOptions& opts) {
  RecoveryResult res;
  res.potential_estimate = V0;
  std::vector<double> weights;  // unit weights

  MisfitParts parts;
  spectral_misfit(V0, target, weights, 0.0, opts.misfit, &parts);
  double lambda = opts.lambda0_scale * parts.data;
  const double lambda_floor = 1e-14 * (1.0 + parts.data);

  RealField V = V0;
  double J = spectral_misfit(V, target, weights, lambda, opts.misfit, &parts);
  res.misfit_history.push_back(J);
  res.data_misfit_history.push_back(parts.data);

  const Eigen::Index nn = static_cast<Eigen::Index>(V.size());
  auto to_vec = [&](const RealField& f) {
    return Eigen::Map<const Eigen::VectorXd>(f.values.data(), nn).eval();
  };
  auto grad_vec = [&](const RealField& f) {
    const MisfitGradient g = misfit_gradient(f, target, weights, lambda, opts.misfit);
    return to_vec(g.gradient);
  };

  Eigen::VectorXd x = to_vec(V);
  Eigen::VectorXd g = grad_vec(V);
  std::deque<Eigen::VectorXd> s_hist, y_hist;
  int stall = 0;

  auto value_at = [&](const Eigen::VectorXd& xv, MisfitParts* p) {
    RealField f(V.grid);
    Eigen::Map<Eigen::VectorXd>(f.values.data(), nn) = xv;
    return spectral_misfit(f, target, weights, lambda, opts.misfit, p);
  };

  int it = 0;
  for (; it < opts.max_iter; ++it) {
    if (g.norm() < opts.grad_tol) {
      res.converged = true;
      break;
    }
    // L-BFGS two-loop direction
    Eigen::VectorXd d = -g;
    const int hist = static_cast<int>(s_hist.size());
    std::vector<double> alpha(static_cast<std::size_t>(hist));
    for (int i = hist - 1; i >= 0; --i) {
      const double rho = 1.0 / y_hist[static_cast<std::size_t>(i)].dot(s_hist[static_cast<std::size_t>(i)]);
      alpha[static_cast<std::size_t>(i)] = rho * s_hist[static_cast<std::size_t>(i)].dot(d);
      d -= alpha[static_cast<std::size_t>(i)] * y_hist[static_cast<std::size_t>(i)];
    }
    if (hist > 0) {
      const auto& sl = s_hist.back();
      const auto& yl = y_hist.back();
      d *= sl.dot(yl) / yl.dot(yl);
    }
    for (int i = 0; i < hist; ++i) {
      const double rho = 1.0 / y_hist[static_cast<std::size_t>(i)].dot(s_hist[static_cast<std::size_t>(i)]);
      const double beta = rho * y_hist[static_cast<std::size_t>(i)].dot(d);
      d += (alpha[static_cast<std::size_t>(i)] - beta) * s_hist[static_cast<std::size_t>(i)];
    }
    if (d.dot(g) >= 0.0) d = -g;  // safeguard: descent direction required

    // Armijo backtracking
    double step = 1.0;
    const double slope = d.dot(g);
    bool accepted = false;
    MisfitParts cand_parts;
    Eigen::VectorXd x_new;
    double J_new = J;
    for (int ls = 0; ls < 40; ++ls) {
      x_new = x + step * d;
      J_new = value_at(x_new, &cand_parts);
      if (J_new <= J + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      res.line_search_failed = true;
      res.note = "line search failed; returning best iterate";
      break;
    }

    RealField Vn(V.grid);
    Eigen::Map<Eigen::VectorXd>(Vn.values.data(), nn) = x_new;
    Eigen::VectorXd g_new = grad_vec(Vn);

    const Eigen::VectorXd s = x_new - x;
    const Eigen::VectorXd y = g_new - g;
    if (s.dot(y) > 1e-14 * s.norm() * y.norm()) {
      s_hist.push_back(s);
      y_hist.push_back(y);
      if (static_cast<int>(s_hist.size()) > opts.lbfgs_memory) {
        s_hist.pop_front();
        y_hist.pop_front();
      }
    }

    // accepted steps must strictly decrease J
    if (!(J_new < J))
      throw std::logic_error("recover_potential_global: non-monotone accepted step");
    const double prev_data = res.data_misfit_history.back();
    x = x_new;
    V = Vn;
    g = std::move(g_new);
    J = J_new;
    res.misfit_history.push_back(J);
    res.data_misfit_history.push_back(cand_parts.data);

    // lambda continuation on data-term stalls
    if (prev_data - cand_parts.data < opts.stall_rel_improve * std::max(prev_data, 1e-300))
      ++stall;
    else
      stall = 0;
    if (stall >= opts.stall_window && lambda > lambda_floor) {
      lambda *= 0.5;
      stall = 0;
      MisfitParts p2;
      J = spectral_misfit(V, target, weights, lambda, opts.misfit, &p2);
      g = grad_vec(V);
      s_hist.clear();
      y_hist.clear();
      res.misfit_history.push_back(J);
      res.data_misfit_history.push_back(p2.data);
    }
  }

  res.iterations = it;
  res.potential_estimate = V;
  res.final_lambda = lambda;
  MisfitEval final_ev = evaluate_misfit(V, target, weights, lambda, opts.misfit);
  for (const MatchedMode& m : final_ev.matched) res.gauges.push_back(m.gauge);
  return res;
}

RecoveryResult recover_potential_global(const SpectralDataset& target,
                                        const RecoveryOptions& opts) {
  std::vector<std::uint8_t> trusted;
  const RealField V0 = warm_start_potential(target, target.observation.grid,
                                            target.observation, opts.theta_nodal, &trusted);
  RecoveryResult res = recover_potential_global(target, V0, opts);
  res.recovered_mask = trusted;
  return res;
}

namespace {

// Eigenvalue groups of the system matched against estimated modes; for every
// matched group, least squares of the residue onto the restricted eigenspace
// basis yields the global coefficients.
struct GroupProjection {
  Eigen::VectorXcd coefficients;  // one per eigensystem column
  std::vector<int> unmatched;     // 1-based indices set to zero
};

template <class ModeList, class MuOf, class ResidueOf>
GroupProjection project_residues(const ModeList& modes, const EigenSystem& sys,
                                 const ObservationSet& obs, double eig_tol, MuOf mu_of,
                                 ResidueOf residue_of) {
  const int K = sys.size();
  const std::vector<int> cells = obs.cells();
  GroupProjection out;
  out.coefficients = Eigen::VectorXcd::Zero(K);

  int k = 0;
  while (k < K) {
    const double mu = sys.eigenvalues[static_cast<std::size_t>(k)];
    int end = k + 1;
    while (end < K && std::fabs(sys.eigenvalues[static_cast<std::size_t>(end)] - mu) <=
                          1e-8 * (1.0 + std::fabs(mu)))
      ++end;

    int found = -1;
    for (std::size_t m = 0; m < modes.size(); ++m)
      if (std::fabs(mu_of(modes[m]) - mu) <= eig_tol * (1.0 + std::fabs(mu))) {
        found = static_cast<int>(m);
        break;
      }
    if (found < 0) {
      for (int j = k; j < end; ++j) out.unmatched.push_back(j + 1);
      k = end;
      continue;
    }

    const Eigen::VectorXcd& residue = residue_of(modes[static_cast<std::size_t>(found)]);
    if (residue.size() != static_cast<Eigen::Index>(cells.size()))
      throw std::invalid_argument("recover_initial: residue size does not match O");
    Eigen::MatrixXcd B(static_cast<Eigen::Index>(cells.size()), end - k);
    for (int j = k; j < end; ++j)
      for (std::size_t c = 0; c < cells.size(); ++c)
        B(static_cast<Eigen::Index>(c), j - k) = sys.modes(cells[c], j);
    const Eigen::VectorXcd beta = B.colPivHouseholderQr().solve(residue);
    for (int j = k; j < end; ++j) out.coefficients(j) = beta(j - k);
    k = end;
  }
  return out;
}

}  // namespace

InitialDataResult recover_initial_heat(const std::vector<ModeEstimate>& modes,
                                       const EigenSystem& sys, const ObservationSet& obs,
                                       double eig_tol) {
  GroupProjection proj = project_residues(
      modes, sys, obs, eig_tol, [](const ModeEstimate& m) { return -m.rate.real(); },
      [](const ModeEstimate& m) -> const Eigen::VectorXcd& { return m.residue; });
  InitialDataResult out;
  out.coefficients = proj.coefficients;
  out.unmatched_modes = std::move(proj.unmatched);
  out.complete = out.unmatched_modes.empty();
  out.f = synthesize(sys, out.coefficients);
  return out;
}

WaveInitialDataResult recover_initial_wave(const std::vector<WaveModeEstimate>& modes,
                                           const EigenSystem& sys, const ObservationSet& obs,
                                           double eig_tol) {
  GroupProjection proj_f = project_residues(
      modes, sys, obs, eig_tol, [](const WaveModeEstimate& m) { return m.mu; },
      [](const WaveModeEstimate& m) -> const Eigen::VectorXcd& { return m.residue_f; });
  GroupProjection proj_h = project_residues(
      modes, sys, obs, eig_tol, [](const WaveModeEstimate& m) { return m.mu; },
      [](const WaveModeEstimate& m) -> const Eigen::VectorXcd& { return m.residue_h; });
  WaveInitialDataResult out;
  out.coefficients_f = proj_f.coefficients;
  out.coefficients_h = proj_h.coefficients;
  out.unmatched_modes = std::move(proj_f.unmatched);
  out.complete = out.unmatched_modes.empty();
  out.f = synthesize(sys, out.coefficients_f);
  out.h = synthesize(sys, out.coefficients_h);
  return out;
}

}  // namespace speclab
