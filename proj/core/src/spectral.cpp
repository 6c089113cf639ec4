#include "spectral_detail.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <stdexcept>

namespace qtensor::detail {

namespace {
// FFTW planning is not thread-safe; all plan creation/destruction holds this.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Spectral2D::Spectral2D(const GridShape& g)
    : nx(g.nx), ny(g.ny), lx(g.lx), ly(g.ly) {
  if (nx < 4 || ny < 4 || !(lx > 0) || !(ly > 0))
    throw std::invalid_argument("grid must be at least 4x4 with positive box");
  nkx = nx / 2 + 1;
  kx.resize(nkx);
  ky.resize(ny);
  const double fx = 2.0 * std::numbers::pi / lx;
  const double fy = 2.0 * std::numbers::pi / ly;
  for (int i = 0; i < nkx; ++i) kx[i] = fx * i;
  for (int j = 0; j < ny; ++j) ky[j] = fy * (j <= ny / 2 ? j : j - ny);
  k2.resize(nk());
  keep.resize(nk());
  for (int j = 0; j < ny; ++j) {
    int mj = j <= ny / 2 ? j : j - ny;
    for (int i = 0; i < nkx; ++i) {
      int s = i + nkx * j;
      k2[s] = kx[i] * kx[i] + ky[j] * ky[j];
      keep[s] = (i <= nx / 3 && std::abs(mj) <= ny / 3) ? 1 : 0;
    }
  }
  std::lock_guard lk(plan_mutex());
  rbuf_ = fftw_alloc_real(static_cast<size_t>(nx) * ny);
  cbuf_ = reinterpret_cast<Cplx*>(fftw_alloc_complex(nk()));
  fwd_ = fftw_plan_dft_r2c_2d(ny, nx, rbuf_,
                              reinterpret_cast<fftw_complex*>(cbuf_),
                              FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft_c2r_2d(ny, nx, reinterpret_cast<fftw_complex*>(cbuf_),
                              rbuf_, FFTW_ESTIMATE);
  if (!fwd_ || !bwd_) throw std::runtime_error("fftw plan creation failed");
}

Spectral2D::~Spectral2D() {
  std::lock_guard lk(plan_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
  fftw_free(rbuf_);
  fftw_free(cbuf_);
}

void Spectral2D::forward(const std::vector<double>& f, std::vector<Cplx>& out) {
  std::lock_guard lk(mu_);
  std::copy(f.begin(), f.end(), rbuf_);
  fftw_execute(static_cast<fftw_plan>(fwd_));
  out.assign(cbuf_, cbuf_ + nk());
}

void Spectral2D::backward(const std::vector<Cplx>& in,
                          std::vector<double>& out) {
  std::lock_guard lk(mu_);
  std::copy(in.begin(), in.end(), cbuf_);
  fftw_execute(static_cast<fftw_plan>(bwd_));
  out.resize(static_cast<size_t>(nx) * ny);
  const double scale = 1.0 / (static_cast<double>(nx) * ny);
  for (int i = 0; i < cells(); ++i) out[i] = rbuf_[i] * scale;
}

std::vector<double> Spectral2D::deriv_x(const std::vector<double>& f) {
  std::vector<Cplx> fk;
  forward(f, fk);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nkx; ++i) fk[i + nkx * j] *= Cplx(0.0, kx[i]);
  std::vector<double> out;
  backward(fk, out);
  return out;
}

std::vector<double> Spectral2D::deriv_y(const std::vector<double>& f) {
  std::vector<Cplx> fk;
  forward(f, fk);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nkx; ++i) fk[i + nkx * j] *= Cplx(0.0, ky[j]);
  std::vector<double> out;
  backward(fk, out);
  return out;
}

std::vector<double> Spectral2D::laplacian(const std::vector<double>& f) {
  std::vector<Cplx> fk;
  forward(f, fk);
  for (int s = 0; s < nk(); ++s) fk[s] *= -k2[s];
  std::vector<double> out;
  backward(fk, out);
  return out;
}

void Spectral2D::dealias(std::vector<double>& f) {
  std::vector<Cplx> fk;
  forward(f, fk);
  for (int s = 0; s < nk(); ++s)
    if (!keep[s]) fk[s] = 0.0;
  backward(fk, f);
}

Spectral2D& spectral_for(const GridShape& g) {
  static std::mutex mu;
  static std::map<std::array<double, 4>, std::unique_ptr<Spectral2D>> cache;
  std::array<double, 4> key = {double(g.nx), double(g.ny), g.lx, g.ly};
  std::lock_guard lk(mu);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::make_unique<Spectral2D>(g)).first;
  return *it->second;
}

std::vector<double> comp_of(const std::vector<SymTraceless3>& f, int c) {
  std::vector<double> v(f.size());
  for (size_t i = 0; i < f.size(); ++i) v[i] = f[i].c[c];
  return v;
}

void set_comp(std::vector<SymTraceless3>& f, int c,
              const std::vector<double>& v) {
  for (size_t i = 0; i < f.size(); ++i) f[i].c[c] = v[i];
}

}  // namespace qtensor::detail
