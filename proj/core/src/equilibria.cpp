#include "qtensor/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace qtensor {

namespace {

// 15-point Kronrod rule with the embedded 7-point Gauss rule
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {0.129484966168870, 0.279705391489277,
                           0.381830050505119, 0.417959183673469};

struct GkEstimate {
  double value;
  double error;
};

template <class F>
GkEstimate gk15(const F& f, double a, double b) {
  double h = 0.5 * (b - a), c = 0.5 * (a + b);
  double fc = f(c);
  double resk = kWgk[7] * fc, resg = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    double fv = f(c - h * kXgk[i]) + f(c + h * kXgk[i]);
    resk += kWgk[i] * fv;
    if (i % 2 == 1) resg += kWg[i / 2] * fv;
  }
  return {resk * h, std::fabs(resk - resg) * h};
}

struct Segment {
  double a, b, value, error;
};

// Worklist refinement: always split the segment with the largest error
// estimate.  Stops when the summed estimate meets the target or the worst
// segment is at the rounding floor of its own value, where splitting can
// no longer help (the Kronrod-Gauss difference of a resolved segment is
// noise proportional to the segment value).
template <class F>
double integrate(const F& f, double a, double b, double epsabs,
                 double epsrel) {
  std::vector<Segment> segs;
  GkEstimate w = gk15(f, a, b);
  segs.push_back({a, b, w.value, w.error});
  for (int it = 0; it < 2000; ++it) {
    double total = 0, err = 0;
    for (const Segment& s : segs) {
      total += s.value;
      err += s.error;
    }
    if (err <= std::max(epsabs, epsrel * std::fabs(total))) break;
    size_t worst = 0;
    for (size_t i = 1; i < segs.size(); ++i)
      if (segs[i].error > segs[worst].error) worst = i;
    Segment s = segs[worst];
    if (s.error <= 5e-15 * std::fabs(s.value)) break;
    double m = 0.5 * (s.a + s.b);
    GkEstimate l = gk15(f, s.a, m), r = gk15(f, m, s.b);
    segs[worst] = {s.a, m, l.value, l.error};
    segs.push_back({m, s.b, r.value, r.error});
  }
  double total = 0;
  for (const Segment& s : segs) total += s.value;
  return total;
}

}  // namespace

double ak(int k, double eta) {
  if (k != 0 && k != 2 && k != 4 && k != 6)
    throw std::invalid_argument("ak: k must be one of 0, 2, 4, 6");
  if (!(std::fabs(eta) <= 500))
    throw std::invalid_argument("ak: |eta| must be <= 500");
  auto f = [k, eta](double x) {
    double xk = 1;
    for (int p = 0; p < k; p += 2) xk *= x * x;
    return xk * std::exp(eta * x * x);
  };
  return integrate(f, 0, 1, 1e-13, 1e-14);
}

double eta_residual(double eta, double alpha) {
  return 3.0 * std::exp(eta) / ak(0, eta) -
         (3.0 + 2.0 * eta + 4.0 * eta * eta / alpha);
}

namespace {

double refine_root(double lo, double hi, double alpha) {
  double flo = eta_residual(lo, alpha);
  for (int it = 0; it < 80 && hi - lo > 1e-12; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = eta_residual(mid, alpha);
    if ((flo < 0) == (fm < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

BranchRoot make_root(double eta) {
  BranchRoot r;
  r.eta = eta;
  r.a0 = ak(0, eta);
  r.a2 = ak(2, eta);
  r.a4 = ak(4, eta);
  r.s2 = (3 * r.a2 - r.a0) / (2 * r.a0);
  r.s4 = (35 * r.a4 - 30 * r.a2 + 3 * r.a0) / (8 * r.a0);
  return r;
}

}  // namespace

EquilibriumBranch solve_branches(double alpha) {
  if (!(alpha > 0) || !(alpha <= 100))
    throw std::invalid_argument("solve_branches: alpha must be in (0, 100]");
  EquilibriumBranch out;
  out.alpha = alpha;
  out.roots.push_back(make_root(0.0));

  // eta1 tracks alpha - 3/2 for strong coupling and the oblate roots reach
  // about -alpha/2, so widen the scan with alpha
  double lo = std::min(-40.0, -0.55 * alpha - 10.0);
  double hi = std::max(80.0, alpha + 5.0);
  const double step = 1e-2;
  std::vector<double> roots;
  double x0 = lo, f0 = eta_residual(x0, alpha);
  for (double x = lo + step; x < hi + 0.5 * step; x += step) {
    double f1 = eta_residual(x, alpha);
    if ((f0 < 0) != (f1 < 0)) roots.push_back(refine_root(x0, x, alpha));
    x0 = x;
    f0 = f1;
  }
  // drop rediscoveries of the isotropic double root
  roots.erase(std::remove_if(roots.begin(), roots.end(),
                             [](double e) { return std::fabs(e) < 1e-6; }),
              roots.end());
  std::sort(roots.begin(), roots.end(), std::greater<>());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double a, double b) {
                            return std::fabs(a - b) < 1e-9;
                          }),
              roots.end());
  for (double e : roots) out.roots.push_back(make_root(e));
  return out;
}

const CriticalPoint& critical_alpha() {
  static const CriticalPoint cp = [] {
    // on the nematic branch alpha(eta) = 4 eta^2 / (3 e^eta / A0 - 3 - 2 eta);
    // the fold sits at its minimum
    auto alpha_of = [](double eta) {
      return 4 * eta * eta /
             (3 * std::exp(eta) / ak(0, eta) - 3 - 2 * eta);
    };
    double eta = 1.0, best = alpha_of(1.0);
    for (double e = 1.0; e <= 4.0; e += 0.02) {
      double a = alpha_of(e);
      if (a < best) {
        best = a;
        eta = e;
      }
    }
    double alpha = best;
    // residual and its eta-derivative must vanish together
    auto f = [](double al, double et, double& r, double& rq) {
      double a0 = ak(0, et), a2 = ak(2, et), ee = std::exp(et);
      r = 3 * ee / a0 - (3 + 2 * et + 4 * et * et / al);
      rq = 3 * ee / a0 - 3 * ee * a2 / (a0 * a0) - 2 - 8 * et / al;
    };
    double ba = alpha, be = eta, bres = 1e300;
    for (int it = 0; it < 50; ++it) {
      double r, rq;
      f(alpha, eta, r, rq);
      double res = std::max(std::fabs(r), std::fabs(rq));
      if (res < bres) {
        bres = res;
        ba = alpha;
        be = eta;
      }
      if (res <= 1e-12) break;
      double da = 1e-7 * std::max(1.0, std::fabs(alpha));
      double de = 1e-7 * std::max(1.0, std::fabs(eta));
      double r1, rq1, r2, rq2;
      f(alpha + da, eta, r1, rq1);
      f(alpha, eta + de, r2, rq2);
      double j11 = (r1 - r) / da, j12 = (r2 - r) / de;
      double j21 = (rq1 - rq) / da, j22 = (rq2 - rq) / de;
      double det = j11 * j22 - j12 * j21;
      alpha -= (j22 * r - j12 * rq) / det;
      eta -= (-j21 * r + j11 * rq) / det;
    }
    return CriticalPoint{ba, be};
  }();
  return cp;
}

OrderParams order_parameters(double eta) {
  double a0 = ak(0, eta), a2 = ak(2, eta), a4 = ak(4, eta);
  return {(3 * a2 - a0) / (2 * a0), (35 * a4 - 30 * a2 + 3 * a0) / (8 * a0)};
}

Sym4Moment uniaxial_m4(double s2, double s4, const Vec3& n) {
  double c1 = s4;
  double c2 = (s2 - s4) / 7.0;
  double c3 = s4 / 35.0 - 2.0 * s2 / 21.0 + 1.0 / 15.0;
  Sym4Moment m;
  for (int s = 0; s < 15; ++s) {
    auto [i, j, k, l] = sym4_tuples[s];
    auto d = [](int a, int b) { return a == b ? 1.0 : 0.0; };
    double dnn = d(i, j) * n[k] * n[l] + d(i, k) * n[j] * n[l] +
                 d(i, l) * n[j] * n[k] + d(j, k) * n[i] * n[l] +
                 d(j, l) * n[i] * n[k] + d(k, l) * n[i] * n[j];
    double dd = d(i, j) * d(k, l) + d(i, k) * d(j, l) + d(i, l) * d(j, k);
    m.c[s] = c1 * n[i] * n[j] * n[k] * n[l] + c2 * dnn + c3 * dd;
  }
  return m;
}

EquilibriumData equilibrium_data(double alpha, const Vec3& n) {
  if (std::fabs(norm(n) - 1.0) > 1e-12)
    throw std::invalid_argument("equilibrium_data: n must be a unit vector");
  EquilibriumBranch br = solve_branches(alpha);
  if (br.roots.size() < 2 || br.roots[1].eta <= 0)
    throw SubCritical("equilibrium_data: no nematic root at this alpha");
  const BranchRoot& r = br.roots[1];
  EquilibriumData eq;
  eq.alpha = alpha;
  eq.eta = r.eta;
  eq.s2 = r.s2;
  eq.s4 = r.s4;
  eq.n = n;
  eq.q0 = uniaxial(r.s2, n);
  eq.b0 = uniaxial(r.eta, n);
  eq.m4 = uniaxial_m4(r.s2, r.s4, n);
  MomentSet m = moments_of(eq.b0, default_rule());
  eq.m6 = m.m6;
  eq.z = m.z;
  return eq;
}

}  // namespace qtensor
