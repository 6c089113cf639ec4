#pragma once

#include <complex>
#include <mutex>
#include <vector>

#include "qtensor/dynamics.hpp"

namespace qtensor::detail {

using Cplx = std::complex<double>;

// Real-to-complex 2D transform workspace for one periodic grid.  Real
// fields are length nx*ny (x fastest), spectra length (nx/2+1)*ny with the
// positive-kx half stored.  Plans use FFTW_ESTIMATE so layouts are
// reproducible run to run.  forward/backward serialize on an internal
// mutex; callers may share a workspace across threads but transforms do
// not overlap.
class Spectral2D {
 public:
  explicit Spectral2D(const GridShape& g);
  ~Spectral2D();
  Spectral2D(const Spectral2D&) = delete;
  Spectral2D& operator=(const Spectral2D&) = delete;

  int nx, ny, nkx;
  double lx, ly;
  std::vector<double> kx;   // size nkx, >= 0
  std::vector<double> ky;   // size ny, signed
  std::vector<double> k2;   // per spectral slot
  std::vector<char> keep;   // 2/3-rule mask per spectral slot

  int cells() const { return nx * ny; }
  int nk() const { return nkx * ny; }

  void forward(const std::vector<double>& f, std::vector<Cplx>& out);
  // normalizes by 1/(nx*ny)
  void backward(const std::vector<Cplx>& in, std::vector<double>& out);

  std::vector<double> deriv_x(const std::vector<double>& f);
  std::vector<double> deriv_y(const std::vector<double>& f);
  std::vector<double> laplacian(const std::vector<double>& f);
  void dealias(std::vector<double>& f);

 private:
  void* fwd_ = nullptr;  // fftw_plan
  void* bwd_ = nullptr;
  double* rbuf_ = nullptr;
  Cplx* cbuf_ = nullptr;
  std::mutex mu_;
};

// Shared workspace per grid shape, created on first use.
Spectral2D& spectral_for(const GridShape& g);

// component extraction helpers for SymTraceless3 fields
std::vector<double> comp_of(const std::vector<SymTraceless3>& f, int c);
void set_comp(std::vector<SymTraceless3>& f, int c,
              const std::vector<double>& v);

}  // namespace qtensor::detail
