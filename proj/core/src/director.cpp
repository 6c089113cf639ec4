#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qtensor/dynamics.hpp"

namespace qtensor {

namespace {

Vec3 matvec(const Mat3& m, const Vec3& v) {
  return {m(0, 0) * v[0] + m(0, 1) * v[1] + m(0, 2) * v[2],
          m(1, 0) * v[0] + m(1, 1) * v[1] + m(1, 2) * v[2],
          m(2, 0) * v[0] + m(2, 1) * v[1] + m(2, 2) * v[2]};
}

Vec3 axpy(const Vec3& x, double a, const Vec3& y) {
  return {x[0] + a * y[0], x[1] + a * y[1], x[2] + a * y[2]};
}

}  // namespace

Vec3 el_director_rhs(const Vec3& n, const Mat3& kappa, const Vec3& h,
                     const LeslieCoefficients& c) {
  if (std::fabs(norm(n) - 1.0) > 1e-8)
    throw std::invalid_argument("director must be a unit vector");
  if (!(c.gamma1 > 0))
    throw std::invalid_argument("gamma1 must be positive");
  const Mat3 omega = 0.5 * (transpose(kappa) - kappa);
  const Mat3 dmat = 0.5 * (kappa + transpose(kappa));
  Vec3 drive = axpy(h, -c.gamma2, matvec(dmat, n));
  drive = axpy(drive, -dot(n, drive), n);  // (I - nn) projection
  const Vec3 rot = matvec(omega, n);
  return {-rot[0] + drive[0] / c.gamma1, -rot[1] + drive[1] / c.gamma1,
          -rot[2] + drive[2] / c.gamma1};
}

Vec3 el_step(const Vec3& n, const Mat3& kappa, const Vec3& h,
             const LeslieCoefficients& c, double dt) {
  if (!(dt > 0)) throw std::invalid_argument("dt must be positive");
  const Vec3 k1 = el_director_rhs(n, kappa, h, c);
  const Vec3 k2 = el_director_rhs(normalized(axpy(n, 0.5 * dt, k1)), kappa, h, c);
  const Vec3 k3 = el_director_rhs(normalized(axpy(n, 0.5 * dt, k2)), kappa, h, c);
  const Vec3 k4 = el_director_rhs(normalized(axpy(n, dt, k3)), kappa, h, c);
  Vec3 out = n;
  out = axpy(out, dt / 6.0, k1);
  out = axpy(out, dt / 3.0, k2);
  out = axpy(out, dt / 3.0, k3);
  out = axpy(out, dt / 6.0, k4);
  return normalized(out);
}

ShearResponse shear_director_response(const LeslieCoefficients& c,
                                      double rate) {
  if (!(rate > 0)) throw std::invalid_argument("shear rate must be positive");
  Mat3 kappa = Mat3::zero();
  kappa(0, 1) = rate;
  const Vec3 h{0, 0, 0};
  const double dt = 1e-3 / rate;

  ShearResponse out{};
  out.aligning = std::fabs(c.lambda) > 1.0;

  double theta = 0.3;
  Vec3 n{std::cos(theta), std::sin(theta), 0.0};
  if (out.aligning) {
    double prev = theta;
    for (long k = 0; k < 20000000; ++k) {
      n = el_step(n, kappa, h, c, dt);
      theta = std::atan2(n[1], n[0]);
      if (k > 10 && std::fabs(theta - prev) < 1e-15) break;
      prev = theta;
    }
    while (theta > 0.5 * std::numbers::pi) theta -= std::numbers::pi;
    while (theta <= -0.5 * std::numbers::pi) theta += std::numbers::pi;
    out.theta = theta;
    out.period = 0.0;
  } else {
    // the in-plane angle decreases monotonically; one director period is a
    // rotation by pi
    const double target = theta - std::numbers::pi;
    double cont = theta, t = 0;
    for (long k = 0; k < 200000000; ++k) {
      n = el_step(n, kappa, h, c, dt);
      const double th = std::atan2(n[1], n[0]);
      double d = th - std::fmod(cont, 2.0 * std::numbers::pi);
      d = std::remainder(d, 2.0 * std::numbers::pi);
      const double next = cont + d;
      if (next <= target) {
        t += dt * (cont - target) / (cont - next);
        cont = next;
        break;
      }
      cont = next;
      t += dt;
    }
    if (cont > target)
      throw std::runtime_error("tumbling period search did not close");
    out.theta = 0.0;
    out.period = t;
  }
  return out;
}

}  // namespace qtensor
