#include "speclab/evolution.hpp"

#include <cmath>
#include <stdexcept>

#include "speclab/kernels.hpp"
#include "speclab/rng.hpp"

namespace speclab {

std::string equation_name(Equation eq) {
  switch (eq) {
    case Equation::heat: return "heat";
    case Equation::schrodinger: return "schrodinger";
    default: return "wave";
  }
}

Equation equation_from_name(const std::string& name) {
  if (name == "heat") return Equation::heat;
  if (name == "schrodinger") return Equation::schrodinger;
  if (name == "wave") return Equation::wave;
  throw std::invalid_argument("unknown equation tag: " + name);
}

double wave_s_factor(double mu, double t) {
  if (mu > 0.0) {
    const double r = std::sqrt(mu);
    return std::sin(r * t) / r;
  }
  if (mu == 0.0) return t;
  const double r = std::sqrt(-mu);
  return std::sinh(r * t) / r;
}

double wave_s_dt_factor(double mu, double t) {
  if (mu > 0.0) return std::cos(std::sqrt(mu) * t);
  if (mu == 0.0) return 1.0;
  return std::cosh(std::sqrt(-mu) * t);
}

namespace {

cplx heat_factor(double mu, double t, double /*shift*/) { return std::exp(-mu * t); }

cplx schrodinger_factor(double mu, double t, double /*shift*/) {
  return std::exp(cplx(0.0, -mu * t));
}

cplx wave_f_factor(double mu, double t, double /*shift*/) { return wave_s_dt_factor(mu, t); }

cplx wave_h_factor(double mu, double t, double /*shift*/) { return wave_s_factor(mu, t); }

cplx wave_vel_f_factor(double mu, double t, double /*shift*/) {
  // d/dt of the dt-branch: -mu * s(mu, t) for every sign of mu
  return -mu * wave_s_factor(mu, t);
}

cplx wave_vel_h_factor(double mu, double t, double /*shift*/) { return wave_s_dt_factor(mu, t); }

}  // namespace

std::vector<ComplexField> ModeBasisPropagator::evolve(const ComplexField& f,
                                                      const ComplexField* g,
                                                      cplx (*a)(double, double, double),
                                                      cplx (*b)(double, double, double),
                                                      double shift,
                                                      std::span<const double> times) const {
  const EigenSystem& sys = *sys_;
  const Eigen::VectorXcd cf = analyze(sys, f);
  Eigen::VectorXcd cg;
  if (g != nullptr) cg = analyze(sys, *g);

  std::vector<ComplexField> out;
  out.reserve(times.size());
  for (double t : times) {
    ComplexField u(sys.grid);
    for (int k = 0; k < sys.size(); ++k) {
      const double mu = sys.eigenvalues[static_cast<std::size_t>(k)] + shift;
      cplx coeff = a(mu, t, shift) * cf(k);
      if (g != nullptr) coeff += b(mu, t, shift) * cg(k);
      kernels::ops().zaxpy_real(coeff, sys.modes.col(k).data(), u.values.data(), u.size());
    }
    out.push_back(std::move(u));
  }
  return out;
}

Eigen::MatrixXcd ModeBasisPropagator::evolve_on(const ObservationSet& obs,
                                                const ComplexField& f, const ComplexField* g,
                                                cplx (*a)(double, double, double),
                                                cplx (*b)(double, double, double),
                                                double shift,
                                                std::span<const double> times) const {
  const EigenSystem& sys = *sys_;
  const Eigen::VectorXcd cf = analyze(sys, f);
  Eigen::VectorXcd cg;
  if (g != nullptr) cg = analyze(sys, *g);

  const std::vector<int> cells = obs.cells();
  // contiguous per-mode restrictions, one row per mode
  Eigen::MatrixXd restr(sys.size(), static_cast<Eigen::Index>(cells.size()));
  for (int k = 0; k < sys.size(); ++k)
    for (std::size_t c = 0; c < cells.size(); ++c)
      restr(k, static_cast<Eigen::Index>(c)) = sys.modes(cells[c], k);

  Eigen::MatrixXcd out(static_cast<Eigen::Index>(times.size()),
                       static_cast<Eigen::Index>(cells.size()));
  std::vector<cplx> row(cells.size());
  for (std::size_t ti = 0; ti < times.size(); ++ti) {
    std::fill(row.begin(), row.end(), cplx(0.0, 0.0));
    for (int k = 0; k < sys.size(); ++k) {
      const double mu = sys.eigenvalues[static_cast<std::size_t>(k)] + shift;
      cplx coeff = a(mu, times[ti], shift) * cf(k);
      if (g != nullptr) coeff += b(mu, times[ti], shift) * cg(k);
      kernels::ops().zaxpy_real(coeff, restr.row(k).data(), row.data(), row.size());
    }
    for (std::size_t c = 0; c < cells.size(); ++c)
      out(static_cast<Eigen::Index>(ti), static_cast<Eigen::Index>(c)) = row[c];
  }
  return out;
}

FourierPropagator::FourierPropagator(const TorusGrid& grid, double constant_potential)
    : fft_(new Fourier2D(grid)), v0_(constant_potential) {
  const int n = grid.n_side;
  symbols_.resize(static_cast<std::size_t>(n) * n);
  for (int my = 0; my < n; ++my)
    for (int mx = 0; mx < n; ++mx)
      symbols_[static_cast<std::size_t>(my) * n + mx] = fft_->laplacian_symbol(mx, my) + v0_;
}

const TorusGrid& FourierPropagator::grid() const { return fft_->grid(); }

int FourierPropagator::mode_count() const { return fft_->grid().cell_count(); }

std::vector<ComplexField> FourierPropagator::evolve(const ComplexField& f,
                                                    const ComplexField* g,
                                                    cplx (*a)(double, double, double),
                                                    cplx (*b)(double, double, double),
                                                    double shift,
                                                    std::span<const double> times) const {
  const std::size_t nn = f.size();
  std::vector<cplx> fhat(nn), ghat, work(nn);
  fft_->forward(f.values.data(), fhat.data());
  if (g != nullptr) {
    ghat.resize(nn);
    fft_->forward(g->values.data(), ghat.data());
  }
  std::vector<ComplexField> out;
  out.reserve(times.size());
  for (double t : times) {
    for (std::size_t i = 0; i < nn; ++i) {
      const double mu = symbols_[i] + shift;
      cplx v = a(mu, t, shift) * fhat[i];
      if (g != nullptr) v += b(mu, t, shift) * ghat[i];
      work[i] = v;
    }
    ComplexField u(grid());
    fft_->inverse(work.data(), u.values.data());
    out.push_back(std::move(u));
  }
  return out;
}

Eigen::MatrixXcd FourierPropagator::evolve_on(const ObservationSet& obs, const ComplexField& f,
                                              const ComplexField* g,
                                              cplx (*a)(double, double, double),
                                              cplx (*b)(double, double, double), double shift,
                                              std::span<const double> times) const {
  const std::vector<ComplexField> fields = evolve(f, g, a, b, shift, times);
  const std::vector<int> cells = obs.cells();
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(times.size()),
                       static_cast<Eigen::Index>(cells.size()));
  for (std::size_t ti = 0; ti < times.size(); ++ti)
    for (std::size_t c = 0; c < cells.size(); ++c)
      out(static_cast<Eigen::Index>(ti), static_cast<Eigen::Index>(c)) =
          fields[ti].values[static_cast<std::size_t>(cells[c])];
  return out;
}

namespace {

void validate_times(std::span<const double> times, bool nonnegative) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (nonnegative && times[i] < 0.0)
      throw std::invalid_argument("evolution: times must be nonnegative");
    if (i > 0 && !(times[i] > times[i - 1]))
      throw std::invalid_argument("evolution: times must be strictly increasing");
  }
}

}  // namespace

std::vector<ComplexField> heat_solve(const EigenSystem& sys, const ComplexField& f,
                                     std::span<const double> times) {
  validate_times(times, true);
  return ModeBasisPropagator(sys).evolve(f, nullptr, heat_factor, nullptr, 0.0, times);
}

std::vector<ComplexField> schrodinger_solve(const EigenSystem& sys, const ComplexField& f,
                                            std::span<const double> times) {
  validate_times(times, true);
  return ModeBasisPropagator(sys).evolve(f, nullptr, schrodinger_factor, nullptr, 0.0, times);
}

std::vector<ComplexField> wave_solve(const EigenSystem& sys, const ComplexField& f,
                                     const ComplexField& h, std::span<const double> times) {
  validate_times(times, true);
  return ModeBasisPropagator(sys).evolve(f, &h, wave_f_factor, wave_h_factor, 0.0, times);
}

std::vector<ComplexField> wave_velocity(const EigenSystem& sys, const ComplexField& f,
                                        const ComplexField& h, std::span<const double> times) {
  validate_times(times, true);
  return ModeBasisPropagator(sys).evolve(f, &h, wave_vel_f_factor, wave_vel_h_factor, 0.0,
                                         times);
}

std::vector<ComplexField> wave_source_solve(const EigenSystem& sys,
                                            const std::vector<ComplexField>& F, double dt) {
  if (F.empty()) return {};
  if (!(dt > 0.0)) throw std::invalid_argument("wave_source_solve: dt must be positive");
  const int nt = static_cast<int>(F.size());
  const int K = sys.size();

  // per-mode source series q_k(t_j) = <F(t_j), phi_k>
  Eigen::MatrixXcd q(nt, K);
  for (int j = 0; j < nt; ++j) q.row(j) = analyze(sys, F[static_cast<std::size_t>(j)]).transpose();

  // Duhamel: coefficient_k(t_i) = int_0^{t_i} q_k(tau) s_k(t_i - tau) dtau,
  // trapezoid on the source grid.
  std::vector<ComplexField> out;
  out.reserve(F.size());
  Eigen::VectorXcd coeff(K);
  for (int i = 0; i < nt; ++i) {
    for (int k = 0; k < K; ++k) {
      const double mu = sys.eigenvalues[static_cast<std::size_t>(k)];
      cplx acc = 0.0;
      for (int j = 0; j <= i; ++j) {
        const double w = (j == 0 || j == i) ? 0.5 : 1.0;
        acc += w * q(j, k) * wave_s_factor(mu, (i - j) * dt);
      }
      coeff(k) = acc * dt;
    }
    out.push_back(synthesize(sys, coeff));
  }
  return out;
}

PassiveRecording record(const std::vector<ComplexField>& fields,
                        std::span<const double> times, const ObservationSet& obs,
                        Equation eq, double sigma, std::uint64_t seed) {
  if (fields.size() != times.size())
    throw std::invalid_argument("record: field/time count mismatch");
  if (times.size() < 2) throw std::invalid_argument("record: need at least 2 samples");
  validate_times(times, false);
  const double dt = times[1] - times[0];
  for (std::size_t i = 1; i < times.size(); ++i)
    if (std::fabs((times[i] - times[i - 1]) - dt) > 1e-12 * (1.0 + std::fabs(dt)))
      throw std::invalid_argument("record: time grid must be uniform");

  const std::vector<int> cells = obs.cells();
  PassiveRecording rec;
  rec.equation = eq;
  rec.times.assign(times.begin(), times.end());
  rec.observation = obs;
  rec.dt = dt;
  rec.sigma = sigma;
  rec.seed = seed;
  rec.values.resize(static_cast<Eigen::Index>(times.size()),
                    static_cast<Eigen::Index>(cells.size()));
  for (std::size_t ti = 0; ti < times.size(); ++ti)
    for (std::size_t c = 0; c < cells.size(); ++c)
      rec.values(static_cast<Eigen::Index>(ti), static_cast<Eigen::Index>(c)) =
          fields[ti].values[static_cast<std::size_t>(cells[c])];
  if (sigma > 0.0) {
    Rng rng(seed);
    const bool complex_noise = (eq == Equation::schrodinger);
    for (Eigen::Index i = 0; i < rec.values.rows(); ++i)
      for (Eigen::Index j = 0; j < rec.values.cols(); ++j) {
        const double re = sigma * rng.gaussian();
        const double im = complex_noise ? sigma * rng.gaussian() : 0.0;
        rec.values(i, j) += cplx(re, im);
      }
  }
  return rec;
}

PassiveRecording simulate_recording(const SpectralPropagator& prop, const EigenSystem* /*sys*/,
                                    const ObservationSet& obs, Equation eq,
                                    const ComplexField& f, const ComplexField* h,
                                    std::span<const double> times, double sigma,
                                    std::uint64_t seed) {
  validate_times(times, true);
  if (times.size() < 2)
    throw std::invalid_argument("simulate_recording: need at least 2 samples");
  Eigen::MatrixXcd vals;
  switch (eq) {
    case Equation::heat:
      vals = prop.evolve_on(obs, f, nullptr, heat_factor, nullptr, 0.0, times);
      break;
    case Equation::schrodinger:
      vals = prop.evolve_on(obs, f, nullptr, schrodinger_factor, nullptr, 0.0, times);
      break;
    case Equation::wave:
      if (h == nullptr)
        throw std::invalid_argument("simulate_recording: wave needs velocity data");
      vals = prop.evolve_on(obs, f, h, wave_f_factor, wave_h_factor, 0.0, times);
      break;
  }
  PassiveRecording rec;
  rec.equation = eq;
  rec.times.assign(times.begin(), times.end());
  rec.observation = obs;
  rec.dt = times[1] - times[0];
  rec.sigma = sigma;
  rec.seed = seed;
  rec.values = std::move(vals);
  if (sigma > 0.0) {
    Rng rng(seed);
    const bool complex_noise = (eq == Equation::schrodinger);
    for (Eigen::Index i = 0; i < rec.values.rows(); ++i)
      for (Eigen::Index j = 0; j < rec.values.cols(); ++j) {
        const double re = sigma * rng.gaussian();
        const double im = complex_noise ? sigma * rng.gaussian() : 0.0;
        rec.values(i, j) += cplx(re, im);
      }
  }
  return rec;
}

PassiveRecording simulate_recording(const EigenSystem& sys, const ObservationSet& obs,
                                    Equation eq, const ComplexField& f, const ComplexField* h,
                                    std::span<const double> times, double sigma,
                                    std::uint64_t seed) {
  ModeBasisPropagator prop(sys);
  return simulate_recording(prop, &sys, obs, eq, f, h, times, sigma, seed);
}

std::vector<double> uniform_times(double t0, double t1, int count) {
  if (count < 2 || !(t1 > t0)) throw std::invalid_argument("uniform_times: bad arguments");
  std::vector<double> out(static_cast<std::size_t>(count));
  const double dt = (t1 - t0) / (count - 1);
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = t0 + i * dt;
  return out;
}

double finite_speed_check(const SpectralPropagator& prop, double shift, const ComplexField& f,
                          const ObservationSet& W, double T, double support_distance,
                          int time_samples) {
  if (!(T < support_distance))
    throw std::invalid_argument(
        "finite_speed_check: require T < dist(support(f), W)");
  const std::vector<double> times = uniform_times(0.0, T, time_samples);
  const Eigen::MatrixXcd vals =
      prop.evolve_on(W, f, nullptr, wave_f_factor, nullptr, shift, times);
  double leak = 0.0;
  for (Eigen::Index i = 0; i < vals.rows(); ++i)
    for (Eigen::Index j = 0; j < vals.cols(); ++j) leak = std::max(leak, std::abs(vals(i, j)));
  return leak;
}

double finite_speed_check(const EigenSystem& sys, const ComplexField& f,
                          const ObservationSet& W, double T, double support_distance,
                          int time_samples) {
  ModeBasisPropagator prop(sys);
  return finite_speed_check(prop, sys.shift, f, W, T, support_distance, time_samples);
}

}  // namespace speclab
