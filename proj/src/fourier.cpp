#include "speclab/fourier.hpp"

#include <unsupported/Eigen/FFT>
#include <cmath>
#include <vector>

namespace speclab {

struct Fourier2D::Impl {
  mutable Eigen::FFT<double> fft;
  mutable std::vector<std::complex<double>> row_in, row_out;
};

Fourier2D::Fourier2D(const TorusGrid& grid) : grid_(grid), impl_(new Impl) {
  impl_->row_in.resize(static_cast<std::size_t>(grid.n_side));
  impl_->row_out.resize(static_cast<std::size_t>(grid.n_side));
}

Fourier2D::~Fourier2D() = default;

namespace {

void pass_rows(Eigen::FFT<double>& fft, std::complex<double>* data, int n, bool inv,
               std::vector<std::complex<double>>& in, std::vector<std::complex<double>>& out) {
  for (int iy = 0; iy < n; ++iy) {
    std::complex<double>* row = data + static_cast<std::size_t>(iy) * n;
    if (inv)
      fft.inv(out.data(), row, n);
    else
      fft.fwd(out.data(), row, n);
    for (int i = 0; i < n; ++i) row[i] = out[i];
  }
  (void)in;
}

void pass_cols(Eigen::FFT<double>& fft, std::complex<double>* data, int n, bool inv,
               std::vector<std::complex<double>>& in, std::vector<std::complex<double>>& out) {
  for (int ix = 0; ix < n; ++ix) {
    for (int iy = 0; iy < n; ++iy) in[static_cast<std::size_t>(iy)] = data[static_cast<std::size_t>(iy) * n + ix];
    if (inv)
      fft.inv(out.data(), in.data(), n);
    else
      fft.fwd(out.data(), in.data(), n);
    for (int iy = 0; iy < n; ++iy) data[static_cast<std::size_t>(iy) * n + ix] = out[static_cast<std::size_t>(iy)];
  }
}

}  // namespace

void Fourier2D::forward(const std::complex<double>* in, std::complex<double>* out) const {
  const int n = grid_.n_side;
  const std::size_t nn = static_cast<std::size_t>(n) * n;
  if (out != in) std::copy(in, in + nn, out);
  pass_rows(impl_->fft, out, n, false, impl_->row_in, impl_->row_out);
  pass_cols(impl_->fft, out, n, false, impl_->row_in, impl_->row_out);
}

void Fourier2D::inverse(const std::complex<double>* in, std::complex<double>* out) const {
  const int n = grid_.n_side;
  const std::size_t nn = static_cast<std::size_t>(n) * n;
  if (out != in) std::copy(in, in + nn, out);
  pass_rows(impl_->fft, out, n, true, impl_->row_in, impl_->row_out);
  pass_cols(impl_->fft, out, n, true, impl_->row_in, impl_->row_out);
}

double Fourier2D::laplacian_symbol(int mx, int my) const {
  const int n = grid_.n_side;
  const double h = grid_.spacing;
  const double sx = std::sin(M_PI * mx / n);
  const double sy = std::sin(M_PI * my / n);
  return 4.0 / (h * h) * (sx * sx + sy * sy);
}

}  // namespace speclab
