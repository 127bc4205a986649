#include "speclab/field.hpp"

#include <cmath>

#include "speclab/kernels.hpp"
#include "speclab/rng.hpp"

namespace speclab {

namespace {
inline double w2(const TorusGrid& g) { return g.spacing * g.spacing; }
}  // namespace

double l2_norm(const RealField& u) {
  return std::sqrt(w2(u.grid) * kernels::ops().nrm2sq(u.values.data(), u.size()));
}

double l2_norm(const ComplexField& u) {
  return std::sqrt(w2(u.grid) * kernels::ops().znrm2sq(u.values.data(), u.size()));
}

double inner(const RealField& a, const RealField& b) {
  return w2(a.grid) * kernels::ops().dot(a.values.data(), b.values.data(), a.size());
}

cplx inner(const ComplexField& a, const ComplexField& b) {
  // zdotc conjugates its first argument; inner conjugates the second.
  return w2(a.grid) * std::conj(kernels::ops().zdotc(a.values.data(), b.values.data(), a.size()));
}

cplx inner(const RealField& a, const ComplexField& b) {
  return w2(a.grid) * std::conj(kernels::ops().zdot_real(a.values.data(), b.values.data(), a.size()));
}

ComplexField to_complex(const RealField& u) {
  ComplexField out(u.grid);
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = cplx(u[i], 0.0);
  return out;
}

RealField real_part(const ComplexField& u) {
  RealField out(u.grid);
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i].real();
  return out;
}

double max_abs(const ComplexField& u) {
  double m = 0.0;
  for (const auto& v : u.values) m = std::max(m, std::abs(v));
  return m;
}

double max_abs(const RealField& u) {
  double m = 0.0;
  for (const auto& v : u.values) m = std::max(m, std::fabs(v));
  return m;
}

RealField laplacian_neg(const RealField& u) {
  RealField out(u.grid);
  const double inv_h2 = 1.0 / w2(u.grid);
  kernels::ops().laplacian5(u.values.data(), out.values.data(), u.grid.n_side, inv_h2);
  return out;
}

RealField bump_field(const TorusGrid& grid, const Point2& center, double width_x,
                     double width_y, double amplitude) {
  RealField out(grid);
  const double L = grid.side_length;
  const double pi_over_L = 3.14159265358979323846 / L;
  for (int i = 0; i < grid.cell_count(); ++i) {
    const Point2 p = grid.node(i);
    const double sx = (L / 3.14159265358979323846) * std::sin(pi_over_L * (p.x - center.x)) / width_x;
    const double sy = (L / 3.14159265358979323846) * std::sin(pi_over_L * (p.y - center.y)) / width_y;
    out[i] = amplitude * std::exp(-0.5 * (sx * sx + sy * sy));
  }
  return out;
}

RealField random_smooth_field(const TorusGrid& grid, std::uint64_t seed, int cutoff,
                              double amplitude) {
  Rng rng(seed);
  RealField out(grid);
  const double k0 = kTwoPi / grid.side_length;
  for (int mx = 0; mx <= cutoff; ++mx) {
    for (int my = -cutoff; my <= cutoff; ++my) {
      if (mx == 0 && my < 0) continue;
      const double decay = 1.0 / ((1.0 + mx * mx + my * my) * (1.0 + mx * mx + my * my));
      const double a = decay * rng.uniform(-1.0, 1.0);
      const double b = decay * rng.uniform(-1.0, 1.0);
      for (int i = 0; i < grid.cell_count(); ++i) {
        const Point2 p = grid.node(i);
        const double ph = k0 * (mx * p.x + my * p.y);
        out[i] += a * std::cos(ph) + b * std::sin(ph);
      }
    }
  }
  const double m = max_abs(out);
  if (m > 0.0)
    for (auto& v : out.values) v *= amplitude / m;
  return out;
}

RealField constant_field(const TorusGrid& grid, double value) {
  return RealField(grid, value);
}

}  // namespace speclab
