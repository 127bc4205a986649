#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "speclab/geometry.hpp"

namespace speclab {

using cplx = std::complex<double>;

// Grid function on the torus; values indexed like the grid cells. All norms
// and inner products carry the measure weight spacing^2 so that continuum
// comparisons are direct.
template <class T>
struct FieldT {
  TorusGrid grid;
  std::vector<T> values;

  FieldT() = default;
  explicit FieldT(const TorusGrid& g, T fill = T{})
      : grid(g), values(static_cast<std::size_t>(g.cell_count()), fill) {}

  T& operator[](std::size_t i) { return values[i]; }
  const T& operator[](std::size_t i) const { return values[i]; }
  std::size_t size() const { return values.size(); }
};

using RealField = FieldT<double>;
using ComplexField = FieldT<cplx>;

double l2_norm(const RealField& u);
double l2_norm(const ComplexField& u);
// inner(a, b) = spacing^2 * sum a_i * conj(b_i); linear in the first slot.
double inner(const RealField& a, const RealField& b);
cplx inner(const ComplexField& a, const ComplexField& b);
cplx inner(const RealField& a, const ComplexField& b);

ComplexField to_complex(const RealField& u);
RealField real_part(const ComplexField& u);
double max_abs(const ComplexField& u);
double max_abs(const RealField& u);

// -Delta_h u via the periodic second-order 5-point stencil.
RealField laplacian_neg(const RealField& u);

// Smooth periodic bump exp(-(sx^2 + sy^2)/2) with sx = (L/pi) sin(pi dx / L) / wx,
// scaled by amplitude; C^inf on the torus by construction.
RealField bump_field(const TorusGrid& grid, const Point2& center, double width_x,
                     double width_y, double amplitude);

// Real trigonometric polynomial with seeded random coefficients decaying like
// (1 + |m|^2)^-2, frequencies |m_x|, |m_y| <= cutoff, sup-normalized to
// amplitude.
RealField random_smooth_field(const TorusGrid& grid, std::uint64_t seed, int cutoff,
                              double amplitude);

RealField constant_field(const TorusGrid& grid, double value);

}  // namespace speclab
