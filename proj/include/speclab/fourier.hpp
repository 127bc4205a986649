#pragma once

#include <complex>
#include <memory>

#include "speclab/geometry.hpp"

namespace speclab {

// Row-column 2D DFT on the torus grid. The discrete Fourier basis
// diagonalizes the periodic 5-point Laplacian exactly, with symbol
// (4/h^2)(sin^2(pi mx / n) + sin^2(pi my / n)).
class Fourier2D {
 public:
  explicit Fourier2D(const TorusGrid& grid);
  ~Fourier2D();
  Fourier2D(const Fourier2D&) = delete;
  Fourier2D& operator=(const Fourier2D&) = delete;

  void forward(const std::complex<double>* in, std::complex<double>* out) const;
  void inverse(const std::complex<double>* in, std::complex<double>* out) const;

  double laplacian_symbol(int mx, int my) const;
  const TorusGrid& grid() const { return grid_; }

 private:
  TorusGrid grid_;
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace speclab
