#include "speclab/extraction.hpp"

#include <unsupported/Eigen/FFT>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace speclab {

LaplaceSamples laplace_samples(const PassiveRecording& rec, const std::vector<cplx>& z_list) {
  const Eigen::Index nt = rec.values.rows();
  const Eigen::Index nc = rec.values.cols();
  if (nt < 2) throw std::invalid_argument("laplace_samples: recording too short");
  const double dt = rec.dt;
  const double T = rec.times.back();

  LaplaceSamples out;
  out.z = z_list;
  out.values.resize(static_cast<Eigen::Index>(z_list.size()), nc);
  for (std::size_t zi = 0; zi < z_list.size(); ++zi) {
    const cplx z = z_list[zi];
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(nc);
    for (Eigen::Index i = 0; i < nt; ++i) {
      const double w = (i == 0 || i == nt - 1) ? 0.5 : 1.0;
      const cplx e = std::exp(-z * rec.times[static_cast<std::size_t>(i)]);
      acc += (w * e) * rec.values.row(i).transpose();
    }
    out.values.row(static_cast<Eigen::Index>(zi)) = (dt * acc).transpose();

    double tail_amp = 0.0;
    for (Eigen::Index c = 0; c < nc; ++c)
      tail_amp = std::max(tail_amp, std::abs(rec.values(nt - 1, c)));
    const double rez = z.real();
    out.tail_bound.push_back(rez > 0.0
                                 ? tail_amp * std::exp(-rez * T) / rez
                                 : std::numeric_limits<double>::infinity());
    out.tail_dominated.push_back(std::abs(z) * dt > 0.5);
  }
  return out;
}

namespace {

// First principal component of the recording across cells; gauge-free scalar
// trace that maximizes SNR for the rate estimation.
Eigen::VectorXcd pca_trace(const PassiveRecording& rec) {
  const Eigen::MatrixXcd& U = rec.values;
  const Eigen::MatrixXcd G = U.adjoint() * U;  // cells x cells
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G);
  Eigen::VectorXcd w = es.eigenvectors().col(G.rows() - 1);
  // deterministic phase: rotate the largest component to the positive real axis
  Eigen::Index imax = 0;
  w.cwiseAbs().maxCoeff(&imax);
  const cplx lead = w(imax);
  if (std::abs(lead) > 0) w *= std::conj(lead) / std::abs(lead);
  return U * w;
}

// Hankel matrix-pencil roots z of a uniformly sampled exponential sum.
std::vector<cplx> hankel_pencil_roots(const Eigen::VectorXcd& s, int max_order,
                                      double rank_rel_tol) {
  const int N = static_cast<int>(s.size());
  if (N < 4) return {};
  const int L = N / 2;                 // pencil parameter
  const int rows = N - L;
  Eigen::MatrixXcd Y0(rows, L), Y1(rows, L);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < L; ++j) {
      Y0(i, j) = s(i + j);
      Y1(i, j) = s(i + j + 1);
    }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Y0, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(0) <= 0.0) return {};
  int r = 0;
  while (r < sv.size() && sv(r) > rank_rel_tol * sv(0)) ++r;
  r = std::min(r, max_order);
  if (r == 0) return {};
  const Eigen::MatrixXcd A = svd.matrixU().leftCols(r).adjoint() * Y1 *
                             svd.matrixV().leftCols(r) *
                             sv.head(r).cwiseInverse().asDiagonal();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A);
  std::vector<cplx> z(es.eigenvalues().data(), es.eigenvalues().data() + r);
  return z;
}

struct DecimatedTrace {
  Eigen::VectorXcd samples;
  int stride = 1;
};

// Largest significant angular frequency content of the trace, used to keep
// the pencil decimation below the Nyquist limit.
double max_frequency(const Eigen::VectorXcd& s, double dt) {
  Eigen::FFT<double> fft;
  std::vector<cplx> in(s.data(), s.data() + s.size());
  std::vector<cplx> out(in.size());
  fft.fwd(out, in);
  double peak = 0.0;
  for (const cplx& v : out) peak = std::max(peak, std::abs(v));
  if (peak <= 0.0) return 0.0;
  const int N = static_cast<int>(out.size());
  double wmax = 0.0;
  for (int m = 0; m < N; ++m) {
    if (std::abs(out[static_cast<std::size_t>(m)]) < 1e-6 * peak) continue;
    const int folded = m <= N / 2 ? m : m - N;
    const double w = std::fabs(kTwoPi * folded / (N * dt));
    wmax = std::max(wmax, w);
  }
  return wmax;
}

DecimatedTrace decimate(const Eigen::VectorXcd& s, double dt, int max_samples,
                        bool oscillatory) {
  const int N = static_cast<int>(s.size());
  int stride = std::max(1, (N - 1) / max_samples);
  if (oscillatory) {
    const double wmax = max_frequency(s, dt);
    if (wmax > 0.0) {
      const int alias_cap = std::max(1, static_cast<int>(0.6 * M_PI / (wmax * dt)));
      stride = std::min(stride, alias_cap);
    }
  }
  const int M = std::min((N - 1) / stride + 1, 4 * max_samples);
  DecimatedTrace out;
  out.stride = stride;
  out.samples.resize(M);
  for (int i = 0; i < M; ++i) out.samples(i) = s(static_cast<Eigen::Index>(i) * stride);
  return out;
}

enum class BasisKind { decaying, oscillatory };

Eigen::MatrixXcd exp_basis(const std::vector<double>& theta, const std::vector<double>& t,
                           BasisKind kind) {
  Eigen::MatrixXcd B(static_cast<Eigen::Index>(t.size()),
                     static_cast<Eigen::Index>(theta.size()));
  for (std::size_t k = 0; k < theta.size(); ++k)
    for (std::size_t i = 0; i < t.size(); ++i)
      B(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          kind == BasisKind::decaying ? cplx(std::exp(-theta[k] * t[i]), 0.0)
                                      : std::exp(cplx(0.0, -theta[k] * t[i]));
  return B;
}

// Variable-projection Gauss-Newton over the real rate/frequency parameters;
// exact data drives the fit to roundoff regardless of pencil conditioning.
struct VarproResult {
  std::vector<double> theta;
  double rel_residual = 0.0;
};

VarproResult varpro_refine(const Eigen::VectorXcd& s, const std::vector<double>& t,
                           std::vector<double> theta, BasisKind kind, int max_iter) {
  const Eigen::Index T = s.size();
  const int K = static_cast<int>(theta.size());
  const double snorm = s.norm();
  auto residual = [&](const std::vector<double>& th, Eigen::VectorXcd& amps) {
    const Eigen::MatrixXcd B = exp_basis(th, t, kind);
    amps = B.colPivHouseholderQr().solve(s);
    return (s - B * amps).eval();
  };

  Eigen::VectorXcd amps;
  Eigen::VectorXcd r = residual(theta, amps);
  double best = r.norm();
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::MatrixXcd B = exp_basis(theta, t, kind);
    Eigen::MatrixXcd J(T, K);  // d r / d theta_k = -a_k dphi_k/dtheta
    for (int k = 0; k < K; ++k)
      for (Eigen::Index i = 0; i < T; ++i) {
        const cplx dphi = kind == BasisKind::decaying
                              ? cplx(-t[static_cast<std::size_t>(i)], 0.0) * B(i, k)
                              : cplx(0.0, -t[static_cast<std::size_t>(i)]) * B(i, k);
        J(i, k) = -amps(k) * dphi;
      }
    Eigen::MatrixXd Jr(2 * T, K);
    Eigen::VectorXd rr(2 * T);
    Jr.topRows(T) = J.real();
    Jr.bottomRows(T) = J.imag();
    rr.head(T) = r.real();
    rr.tail(T) = r.imag();
    const Eigen::VectorXd step = Jr.colPivHouseholderQr().solve(-rr);

    double scale = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 12; ++ls) {
      std::vector<double> cand = theta;
      for (int k = 0; k < K; ++k) cand[static_cast<std::size_t>(k)] += scale * step(k);
      Eigen::VectorXcd amps_c;
      const Eigen::VectorXcd rc = residual(cand, amps_c);
      if (rc.norm() < best) {
        theta = std::move(cand);
        amps = amps_c;
        r = rc;
        best = r.norm();
        improved = true;
        break;
      }
      scale *= 0.5;
    }
    if (!improved || step.norm() * scale < 1e-14) break;
  }
  return {theta, snorm > 0 ? best / snorm : 0.0};
}

struct ScalarModes {
  std::vector<double> mu;       // rates (heat) or frequencies (schrodinger)
  double rel_residual = 0.0;
};

ScalarModes estimate_scalar_modes(const PassiveRecording& rec, int K_max,
                                  const ExtractionOptions& opts, bool oscillatory) {
  const Eigen::VectorXcd s = pca_trace(rec);
  const DecimatedTrace dec = decimate(s, rec.dt, opts.pencil_max_samples, oscillatory);
  const double dtp = rec.dt * dec.stride;

  std::vector<cplx> z = hankel_pencil_roots(dec.samples, K_max, opts.rank_rel_tol);
  std::vector<double> theta;
  for (const cplx& zi : z) {
    if (!std::isfinite(std::abs(zi)) || std::abs(zi) == 0.0) continue;
    if (oscillatory) {
      theta.push_back(-std::arg(zi) / dtp);
    } else {
      if (zi.real() <= 0.0) continue;  // spurious for a real exponential sum
      theta.push_back(-std::log(std::abs(zi)) / dtp);
    }
  }
  if (theta.empty()) return {};
  std::sort(theta.begin(), theta.end());

  // drop initialization modes that carry no amplitude before refining
  std::vector<double> tfull(rec.times.begin(), rec.times.end());
  const BasisKind kind = oscillatory ? BasisKind::oscillatory : BasisKind::decaying;
  {
    const Eigen::MatrixXcd B = exp_basis(theta, tfull, kind);
    const Eigen::VectorXcd a = B.colPivHouseholderQr().solve(s);
    const double amax = a.cwiseAbs().maxCoeff();
    std::vector<double> kept;
    for (int k = 0; k < static_cast<int>(theta.size()); ++k)
      if (std::abs(a(k)) > 1e-10 * amax) kept.push_back(theta[static_cast<std::size_t>(k)]);
    if (!kept.empty()) theta = std::move(kept);
  }

  VarproResult vr = varpro_refine(s, tfull, theta, kind, opts.max_gn_iterations);
  ScalarModes out;
  out.mu = std::move(vr.theta);
  out.rel_residual = vr.rel_residual;
  std::sort(out.mu.begin(), out.mu.end());
  return out;
}

// Merge parameters within the relative tolerance; returns representative
// values (mean of the merged cluster).
std::vector<double> merge_close(const std::vector<double>& v, double rel_tol) {
  std::vector<double> out;
  std::size_t i = 0;
  while (i < v.size()) {
    std::size_t j = i + 1;
    double acc = v[i];
    while (j < v.size() && std::fabs(v[j] - v[i]) <= rel_tol * (1.0 + std::fabs(v[i]))) {
      acc += v[j];
      ++j;
    }
    out.push_back(acc / static_cast<double>(j - i));
    i = j;
  }
  return out;
}

double accept_threshold(const PassiveRecording& rec, const ExtractionOptions& opts) {
  return rec.sigma > 0.0 ? 10.0 * rec.sigma : opts.accept_residual;
}

}  // namespace

std::vector<ModeEstimate> extract_heat_modes(const PassiveRecording& rec, int K_max,
                                             const ExtractionOptions& opts) {
  if (rec.equation != Equation::heat)
    throw std::invalid_argument("extract_heat_modes: recording is not a heat recording");
  ScalarModes sm = estimate_scalar_modes(rec, K_max, opts, false);
  sm.mu = merge_close(sm.mu, opts.merge_tol);

  std::vector<double> tfull(rec.times.begin(), rec.times.end());
  const Eigen::MatrixXcd B = exp_basis(sm.mu, tfull, BasisKind::decaying);
  const Eigen::MatrixXcd residues = B.colPivHouseholderQr().solve(rec.values);
  const double rel_fit = (rec.values - B * residues).norm() / std::max(1e-300, rec.values.norm());
  const double thresh = accept_threshold(rec, opts);

  std::vector<ModeEstimate> out;
  for (std::size_t k = 0; k < sm.mu.size(); ++k) {
    ModeEstimate m;
    m.rate = cplx(-sm.mu[k], 0.0);
    m.residue = residues.row(static_cast<Eigen::Index>(k)).transpose();
    m.confidence = std::min(1.0, rel_fit);
    m.accepted = rel_fit < thresh && m.residue.norm() > 0.0;
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<ModeEstimate> extract_schrodinger_modes(const PassiveRecording& rec, int K_max,
                                                    const ExtractionOptions& opts) {
  if (rec.equation != Equation::schrodinger)
    throw std::invalid_argument(
        "extract_schrodinger_modes: recording is not a schrodinger recording");
  ScalarModes sm = estimate_scalar_modes(rec, K_max, opts, true);
  sm.mu = merge_close(sm.mu, opts.merge_tol);

  std::vector<double> tfull(rec.times.begin(), rec.times.end());
  const Eigen::MatrixXcd B = exp_basis(sm.mu, tfull, BasisKind::oscillatory);
  const Eigen::MatrixXcd residues = B.colPivHouseholderQr().solve(rec.values);
  const double rel_fit = (rec.values - B * residues).norm() / std::max(1e-300, rec.values.norm());
  const double thresh = accept_threshold(rec, opts);

  std::vector<ModeEstimate> out;
  for (std::size_t k = 0; k < sm.mu.size(); ++k) {
    ModeEstimate m;
    m.rate = cplx(0.0, -sm.mu[k]);
    m.residue = residues.row(static_cast<Eigen::Index>(k)).transpose();
    m.confidence = std::min(1.0, rel_fit);
    m.accepted = rel_fit < thresh && m.residue.norm() > 0.0;
    out.push_back(std::move(m));
  }
  return out;
}

namespace {

// Wave basis {cos(w t), sin(w t)} per positive frequency; {1, t} for w = 0.
Eigen::MatrixXd wave_basis(const std::vector<double>& omega, const std::vector<double>& t) {
  Eigen::MatrixXd B(static_cast<Eigen::Index>(t.size()),
                    2 * static_cast<Eigen::Index>(omega.size()));
  for (std::size_t k = 0; k < omega.size(); ++k)
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double w = omega[k];
      if (w > 0.0) {
        B(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(2 * k)) = std::cos(w * t[i]);
        B(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(2 * k + 1)) =
            std::sin(w * t[i]);
      } else {
        B(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(2 * k)) = 1.0;
        B(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(2 * k + 1)) = t[i];
      }
    }
  return B;
}

struct WaveFreqs {
  std::vector<double> omega;
  double rel_residual = 0.0;
};

WaveFreqs wave_varpro(const Eigen::VectorXcd& s, const std::vector<double>& t,
                      std::vector<double> omega, int max_iter) {
  const Eigen::Index T = s.size();
  const double snorm = s.norm();
  auto solve_amps = [&](const std::vector<double>& w, Eigen::VectorXcd& amps) {
    const Eigen::MatrixXd B = wave_basis(w, t);
    amps = B.cast<cplx>().colPivHouseholderQr().solve(s);
    return (s - B.cast<cplx>() * amps).eval();
  };

  Eigen::VectorXcd amps;
  Eigen::VectorXcd r = solve_amps(omega, amps);
  double best = r.norm();
  const int K = static_cast<int>(omega.size());
  for (int it = 0; it < max_iter; ++it) {
    // Jacobian w.r.t. omega_k (zero-frequency columns frozen)
    Eigen::MatrixXcd J(T, K);
    for (int k = 0; k < K; ++k) {
      const double w = omega[static_cast<std::size_t>(k)];
      for (Eigen::Index i = 0; i < T; ++i) {
        const double ti = t[static_cast<std::size_t>(i)];
        if (w > 0.0) {
          const cplx d = amps(2 * k) * (-ti * std::sin(w * ti)) +
                         amps(2 * k + 1) * (ti * std::cos(w * ti));
          J(i, k) = -d;
        } else {
          J(i, k) = 0.0;
        }
      }
    }
    Eigen::MatrixXd Jr(2 * T, K);
    Eigen::VectorXd rr(2 * T);
    Jr.topRows(T) = J.real();
    Jr.bottomRows(T) = J.imag();
    rr.head(T) = r.real();
    rr.tail(T) = r.imag();
    const Eigen::VectorXd step = Jr.colPivHouseholderQr().solve(-rr);

    double scale = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 12; ++ls) {
      std::vector<double> cand = omega;
      for (int k = 0; k < K; ++k)
        if (cand[static_cast<std::size_t>(k)] > 0.0)
          cand[static_cast<std::size_t>(k)] =
              std::max(0.0, cand[static_cast<std::size_t>(k)] + scale * step(k));
      Eigen::VectorXcd amps_c;
      const Eigen::VectorXcd rc = solve_amps(cand, amps_c);
      if (rc.norm() < best) {
        omega = std::move(cand);
        amps = amps_c;
        r = rc;
        best = r.norm();
        improved = true;
        break;
      }
      scale *= 0.5;
    }
    if (!improved || step.norm() * scale < 1e-14) break;
  }
  return {omega, snorm > 0 ? best / snorm : 0.0};
}

}  // namespace

std::vector<WaveModeEstimate> extract_wave_modes(const PassiveRecording& rec, int K_max,
                                                 const ExtractionOptions& opts) {
  if (rec.equation != Equation::wave)
    throw std::invalid_argument("extract_wave_modes: recording is not a wave recording");

  const Eigen::VectorXcd s = pca_trace(rec);
  const DecimatedTrace dec = decimate(s, rec.dt, opts.pencil_max_samples, true);
  const double dtp = rec.dt * dec.stride;

  // each real eigenvalue mu > 0 contributes the pair z = e^{+-i sqrt(mu) dt}
  std::vector<cplx> z = hankel_pencil_roots(dec.samples, 2 * K_max + 2, opts.rank_rel_tol);
  std::vector<double> omega;
  for (const cplx& zi : z) {
    if (!std::isfinite(std::abs(zi)) || std::abs(zi) == 0.0) continue;
    omega.push_back(std::fabs(std::arg(zi)) / dtp);
  }
  std::sort(omega.begin(), omega.end());
  omega = merge_close(omega, 1e-6);
  if (omega.empty()) return {};
  if (static_cast<int>(omega.size()) > K_max) omega.resize(static_cast<std::size_t>(K_max));

  std::vector<double> tfull(rec.times.begin(), rec.times.end());
  WaveFreqs wf = wave_varpro(s, tfull, omega, opts.max_gn_iterations);
  std::sort(wf.omega.begin(), wf.omega.end());
  wf.omega = merge_close(wf.omega, opts.merge_tol);

  // per-cell split into cos and sin components
  const Eigen::MatrixXd B = wave_basis(wf.omega, tfull);
  const Eigen::MatrixXcd coef = B.cast<cplx>().colPivHouseholderQr().solve(rec.values);
  const double rel_fit =
      (rec.values - B.cast<cplx>() * coef).norm() / std::max(1e-300, rec.values.norm());
  const double thresh = accept_threshold(rec, opts);

  std::vector<WaveModeEstimate> out;
  for (std::size_t k = 0; k < wf.omega.size(); ++k) {
    const double w = wf.omega[k];
    WaveModeEstimate m;
    m.mu = w * w;
    m.residue_f = coef.row(static_cast<Eigen::Index>(2 * k)).transpose();
    // u carries sin(w t)/w for the velocity part; the regression used sin(w t)
    m.residue_h = w > 0.0
                      ? (w * coef.row(static_cast<Eigen::Index>(2 * k + 1)).transpose()).eval()
                      : coef.row(static_cast<Eigen::Index>(2 * k + 1)).transpose().eval();
    m.confidence = std::min(1.0, rel_fit);
    m.accepted = rel_fit < thresh;
    out.push_back(std::move(m));
  }
  return out;
}

SpectralDataset to_spectral_dataset(const std::vector<ModeEstimate>& modes, Equation eq,
                                    const ObservationSet& obs) {
  SpectralDataset ds;
  ds.observation = obs;
  ds.orthonormalized = false;
  int pos = 0;
  for (const ModeEstimate& m : modes) {
    SpectralEntry e;
    e.index = ++pos;
    switch (eq) {
      case Equation::heat: e.eigenvalue = -m.rate.real(); break;
      case Equation::schrodinger: e.eigenvalue = -m.rate.imag(); break;
      case Equation::wave: e.eigenvalue = std::norm(m.rate); break;
    }
    e.restriction = m.residue;
    ds.entries.push_back(std::move(e));
  }
  std::sort(ds.entries.begin(), ds.entries.end(),
            [](const SpectralEntry& a, const SpectralEntry& b) {
              return a.eigenvalue < b.eigenvalue;
            });
  for (int k = 0; k < ds.size(); ++k) ds.entries[static_cast<std::size_t>(k)].index = k + 1;
  return ds;
}

SpectralDataset to_spectral_dataset(const std::vector<WaveModeEstimate>& modes,
                                    const ObservationSet& obs) {
  SpectralDataset ds;
  ds.observation = obs;
  ds.orthonormalized = false;
  int pos = 0;
  for (const WaveModeEstimate& m : modes) {
    SpectralEntry e;
    e.index = ++pos;
    e.eigenvalue = m.mu;
    e.restriction = m.residue_f.norm() >= m.residue_h.norm() ? m.residue_f : m.residue_h;
    ds.entries.push_back(std::move(e));
  }
  std::sort(ds.entries.begin(), ds.entries.end(),
            [](const SpectralEntry& a, const SpectralEntry& b) {
              return a.eigenvalue < b.eigenvalue;
            });
  for (int k = 0; k < ds.size(); ++k) ds.entries[static_cast<std::size_t>(k)].index = k + 1;
  return ds;
}

MatchResult match_datasets(const SpectralDataset& ds1, const SpectralDataset& ds2,
                           double eig_tol, double fun_tol) {
  MatchResult res;
  res.eig_tol = eig_tol;
  res.fun_tol = fun_tol;

  std::vector<char> used2(static_cast<std::size_t>(ds2.size()), 0);
  int j0 = 0;
  for (int i = 0; i < ds1.size(); ++i) {
    const SpectralEntry& e1 = ds1.entries[static_cast<std::size_t>(i)];
    const double tol = eig_tol * (1.0 + std::fabs(e1.eigenvalue));
    int found = -1;
    cplx gauge(0.0, 0.0);
    double disc = 0.0;
    for (int j = j0; j < ds2.size(); ++j) {
      const SpectralEntry& e2 = ds2.entries[static_cast<std::size_t>(j)];
      if (e2.eigenvalue > e1.eigenvalue + tol) break;
      if (std::fabs(e2.eigenvalue - e1.eigenvalue) > tol) continue;
      if (std::isinf(fun_tol)) {
        found = j;
        gauge = cplx(1.0, 0.0);
        disc = 0.0;
        break;
      }
      // optimal gauge c* scaling e1's restriction onto e2's
      const Eigen::VectorXcd& p = e1.restriction;
      const Eigen::VectorXcd& q = e2.restriction;
      const double pn2 = p.squaredNorm();
      if (pn2 == 0.0 || q.size() != p.size()) continue;
      const cplx c = (p.adjoint() * q)(0) / pn2;
      const double qn = q.norm();
      const double rel = qn > 0 ? (c * p - q).norm() / qn : (c * p - q).norm();
      if (rel <= fun_tol) {
        found = j;
        gauge = c;
        disc = rel;
        break;
      }
    }
    if (found >= 0) {
      res.pairs.emplace_back(i, found);
      res.gauges.push_back(gauge);
      res.restriction_discrepancies.push_back(disc);
      used2[static_cast<std::size_t>(found)] = 1;
      j0 = found + 1;
    } else {
      res.unmatched_ds1.push_back(i);
    }
  }
  for (int j = 0; j < ds2.size(); ++j)
    if (!used2[static_cast<std::size_t>(j)]) res.unmatched_ds2.push_back(j);
  return res;
}

}  // namespace speclab
