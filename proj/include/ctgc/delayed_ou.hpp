#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "ctgc/ctvar.hpp"
#include "ctgc/specfac.hpp"
#include "ctgc/var_core.hpp"
#include "ctgc/var_model.hpp"

// Closed-form engine for a bivariate Ornstein-Uhlenbeck pair with delayed
// unidirectional feedback:
//
//   dX(t) = -a X(t) dt + c Y(t - tau) dt + dWx(t)
//   dY(t) = -b Y(t) dt                   + dWy(t)
//
// with residual correlation rho between Wx and Wy. Everything here -- the MA
// kernel, autocovariance, CPSD, finite-horizon prediction errors, and the
// full spectral factorization of the dt-subsampled process (rho = 0) -- is
// analytic, so the model doubles as a ground-truth oracle for the numerical
// pathways in the rest of the library.

namespace ctgc {

struct DelayedOuParams {
  double a, b, c;  // rate constants (1/ms); 1/a, 1/b are relaxation times
  double rho;      // residual noise correlation
  double tau;      // feedback delay (ms)

  DelayedOuParams(double a_, double b_, double c_, double rho_, double tau_)
      : a(a_), b(b_), c(c_), rho(rho_), tau(tau_) {
    if (a <= 0.0 || b <= 0.0)
      throw InputError("DelayedOuParams: a and b must be positive");
    if (a == b)
      throw InputError("DelayedOuParams: a == b is excluded (degenerate closed forms)");
    if (rho <= -1.0 || rho >= 1.0)
      throw InputError("DelayedOuParams: rho must lie in (-1, 1)");
    if (tau < 0.0) throw InputError("DelayedOuParams: tau must be nonnegative");
  }

  double theta() const { return c / (b - a); }
  double eta() const { return c / (a + b); }

  Mat sigma() const {
    Mat s(2, 2);
    s << 1.0, rho, rho, 1.0;
    return s;
  }

  // relaxation times 5, 6 ms, feedback time 8 ms, delay 30 ms, rho = 0
  static DelayedOuParams reference() {
    return DelayedOuParams(0.2, 1.0 / 6.0, 0.125, 0.0, 30.0);
  }
};

inline DelayKernel kernel(const DelayedOuParams& p) {
  Mat a0(2, 2), c0(2, 2);
  a0 << -p.a, 0.0, 0.0, -p.b;
  c0 << 0.0, p.c, 0.0, 0.0;
  if (p.tau > 0.0)
    return DelayKernel({{0.0, a0}, {p.tau, c0}}, p.sigma());
  return DelayKernel({{0.0, a0 + c0}}, p.sigma());
}

// B(u) = e^{-Au} + Theta(u - tau) q(u - tau) C,
// q(u) = (e^{-au} - e^{-bu})/(b - a); Theta(0) = 1
inline Eigen::Matrix2d ct_ma_kernel(const DelayedOuParams& p, double u) {
  Eigen::Matrix2d b = Eigen::Matrix2d::Zero();
  b(0, 0) = std::exp(-p.a * u);
  b(1, 1) = std::exp(-p.b * u);
  if (u >= p.tau) {
    const double s = u - p.tau;
    b(0, 1) = p.c * (std::exp(-p.a * s) - std::exp(-p.b * s)) / (p.b - p.a);
  }
  return b;
}

// continuous-time CPSD at ordinary frequency lambda (kHz)
inline Eigen::Matrix2cd ct_cpsd(const DelayedOuParams& p, double lambda) {
  const double w = 2.0 * std::numbers::pi * lambda;
  const double ups = p.b * std::cos(p.tau * w) - w * std::sin(p.tau * w);
  const double den = (p.a * p.a + w * w) * (p.b * p.b + w * w);
  Eigen::Matrix2cd s;
  s(0, 0) = (p.b * p.b + 2.0 * p.rho * p.c * ups + p.c * p.c + w * w) / den;
  s(0, 1) = (p.a - std::complex<double>(0.0, w)) *
            (p.c * std::exp(std::complex<double>(0.0, -p.tau * w)) +
             p.rho * (p.b + std::complex<double>(0.0, w))) /
            den;
  s(1, 0) = std::conj(s(0, 1));
  s(1, 1) = 1.0 / (p.b * p.b + w * w);
  return s;
}

// Lagged covariance Gamma(t) = cov(X(t+s), X(s)). The pre- and post-delay
// branch corrections agree at t == tau, so the split is exclusive there.
inline Eigen::Matrix2d ct_autocov(const DelayedOuParams& p, double t) {
  if (t < 0.0)
    return Eigen::Matrix2d(ct_autocov(p, -t).transpose());
  const double th = p.theta(), et = p.eta();
  const double a = p.a, b = p.b, rho = p.rho, tau = p.tau;
  Eigen::Matrix2d g;
  g(0, 0) = (1.0 + th * et) / (2.0 * a) * std::exp(-a * t) -
            th * et / (2.0 * b) * std::exp(-b * t) +
            rho * et / (2.0 * a) * std::exp(-a * (t + tau));
  g(0, 1) = rho / (a + b) * std::exp(-a * t);
  g(1, 0) = rho / (a + b) * std::exp(-b * t) +
            et / (2.0 * b) * std::exp(-b * (t + tau));
  g(1, 1) = 1.0 / (2.0 * b) * std::exp(-b * t);
  if (t <= tau) {
    const double s = tau - t;
    g(0, 0) += rho * et / (2.0 * a) * std::exp(-a * s);
    g(0, 1) += et / (2.0 * b) * std::exp(-b * s);
  } else {
    const double s = t - tau;
    g(0, 0) += rho * th * (std::exp(-a * s) / (2.0 * a) -
                           std::exp(-b * s) / (a + b));
    g(0, 1) += th * (std::exp(-a * s) / (a + b) -
                     std::exp(-b * s) / (2.0 * b));
  }
  return g;
}

// full-regression MSE_xx(h); the delayed feedback contributes only past the
// delay
inline double mse_full_xx(const DelayedOuParams& p, double h) {
  if (h < 0.0) throw InputError("mse_full_xx: negative horizon");
  const double a = p.a, b = p.b;
  double v = (1.0 - std::exp(-2.0 * a * h)) / (2.0 * a);
  if (h > p.tau) {
    const double s = h - p.tau;
    const double th = p.theta();
    const double e2a = (1.0 - std::exp(-2.0 * a * s)) / (2.0 * a);
    const double eab = (1.0 - std::exp(-(a + b) * s)) / (a + b);
    const double e2b = (1.0 - std::exp(-2.0 * b * s)) / (2.0 * b);
    v += 2.0 * p.rho * th * std::exp(-a * p.tau) * (e2a - eab) +
         th * th * (e2a - 2.0 * eab + e2b);
  }
  return v;
}

// reduced (X-only) transfer function H'_xx at scaled frequency omega = 2 pi
// lambda; satisfies |H'_xx|^2 = S_xx with unit reduced noise intensity
inline std::complex<double> reduced_transfer(const DelayedOuParams& p,
                                             double omega) {
  const double m = std::sqrt((1.0 - p.rho * p.rho) * p.c * p.c +
                             std::pow(p.b + p.rho * p.c * std::cos(p.tau * omega), 2));
  const std::complex<double> num(m, omega - p.rho * p.c * std::sin(p.tau * omega));
  return num / (std::complex<double>(p.a, omega) * std::complex<double>(p.b, omega));
}

// sine integral Si(x) = int_0^x sin(t)/t dt
inline double sine_integral(double x) {
  if (x < 0.0) return -sine_integral(-x);
  if (x == 0.0) return 0.0;
  if (x <= 20.0) {
    // power series
    double term = x, sum = x;
    for (int k = 1; k < 200; ++k) {
      term *= -x * x / ((2.0 * k) * (2.0 * k + 1.0));
      sum += term / (2.0 * k + 1.0);
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  // asymptotic auxiliary functions f, g with terms t_k = (2k)!/x^{2k},
  // truncated at the smallest term
  double f = 0.0, g = 0.0, t = 1.0;
  for (int k = 0;; ++k) {
    f += (k % 2 == 0 ? 1.0 : -1.0) * t;
    g += (k % 2 == 0 ? 1.0 : -1.0) * t * (2.0 * k + 1.0);
    const double t_next = t * (2.0 * k + 1.0) * (2.0 * k + 2.0) / (x * x);
    if (t_next >= t || t_next < 1e-18) break;
    t = t_next;
  }
  f /= x;
  g /= x * x;
  return std::numbers::pi / 2.0 - f * std::cos(x) - g * std::sin(x);
}

// Reduced MA kernel B'_xx(u) by numerical inverse Fourier transform with a
// frequency cutoff W. The leading 1/(i omega) tail integrates to the sine-
// integral correction; the next-order 1/omega^2 tail (with the oscillatory
// part of the numerator averaged out) is corrected by parts.
inline std::vector<double> reduced_kernel_numeric(
    const DelayedOuParams& p, const std::vector<double>& u_grid, double W) {
  const double wmin = 50.0 * std::max({p.a, p.b, std::abs(p.rho * p.c)});
  if (W < wmin)
    throw InputError("reduced_kernel_numeric: cutoff W below 50x the fastest rate");
  double u_max = 1.0;
  for (double u : u_grid) {
    if (u < 0.0) throw InputError("reduced_kernel_numeric: negative u");
    u_max = std::max(u_max, u);
  }
  // mean of the numerator modulus over one delay period
  double sbar = 0.0;
  const int nphi = 256;
  for (int i = 0; i < nphi; ++i) {
    const double phi = 2.0 * std::numbers::pi * i / nphi;
    sbar += std::sqrt((1.0 - p.rho * p.rho) * p.c * p.c +
                      std::pow(p.b + p.rho * p.c * std::cos(phi), 2));
  }
  sbar /= nphi;
  const double sig2 = p.a + p.b - sbar;

  // Simpson grid; anti-aliasing requires dω well below 2 pi / u_max
  const double dw_target = 2.0 * std::numbers::pi / (8.0 * u_max);
  int nw = static_cast<int>(std::ceil(W / dw_target));
  nw = std::max(nw, 4000);
  if (nw % 2 == 1) ++nw;
  const double dw = W / nw;
  std::vector<std::complex<double>> hvals(nw + 1);
  for (int i = 0; i <= nw; ++i) hvals[i] = reduced_transfer(p, i * dw);

  std::vector<double> out;
  out.reserve(u_grid.size());
  for (double u : u_grid) {
    double integral = 0.0;
    for (int i = 0; i <= nw; ++i) {
      const double w = i * dw;
      const double f = (hvals[i] * std::exp(std::complex<double>(0.0, w * u))).real();
      const double wgt = (i == 0 || i == nw) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      integral += wgt * f;
    }
    integral *= dw / 3.0;
    const double si = sine_integral(W * u);
    const double tail2 = std::cos(W * u) / W -
                         u * (std::numbers::pi / 2.0 - si);
    out.push_back(integral / std::numbers::pi + 0.5 -
                  si / std::numbers::pi +
                  sig2 * tail2 / std::numbers::pi);
  }
  return out;
}

// reduced-regression MSE'_xx(h): closed form for rho = 0, numeric quadrature
// of the reduced kernel otherwise
inline double mse_reduced_xx(const DelayedOuParams& p, double h) {
  if (h < 0.0) throw InputError("mse_reduced_xx: negative horizon");
  if (h == 0.0) return 0.0;
  const double a = p.a, b = p.b;
  if (p.rho == 0.0) {
    const double k = std::sqrt(b * b + p.c * p.c);
    const double d = b - a;
    return ((k - a) * (k - a) / (2.0 * a) * (1.0 - std::exp(-2.0 * a * h)) -
            2.0 * (k - a) * (k - b) / (a + b) * (1.0 - std::exp(-(a + b) * h)) +
            (k - b) * (k - b) / (2.0 * b) * (1.0 - std::exp(-2.0 * b * h))) /
           (d * d);
  }
  const int nu = 2000;
  const double du = h / nu;
  std::vector<double> us(nu + 1);
  for (int i = 0; i <= nu; ++i) us[i] = i * du;
  const double W = std::max(20.0, 50.0 * std::max({a, b, std::abs(p.rho * p.c)}));
  auto bred = reduced_kernel_numeric(p, us, W);
  double acc = 0.0;
  for (int i = 0; i <= nu; ++i) {
    const double wgt = (i == 0 || i == nu) ? 0.5 : 1.0;
    acc += wgt * bred[i] * bred[i];
  }
  return acc * du;
}

// finite-horizon causality from Y to X; 0 at h = 0 by convention
inline double gc_horizon(const DelayedOuParams& p, double h) {
  if (h < 0.0) throw InputError("gc_horizon: negative horizon");
  if (h == 0.0) return 0.0;
  const double v = std::log(mse_reduced_xx(p, h) / mse_full_xx(p, h));
  return std::max(v, 0.0);
}

// zero-horizon causality rate, closed form (rho = 0): sqrt(b^2 + c^2) - b
inline double rate_closed_rho0(const DelayedOuParams& p) {
  if (p.rho != 0.0)
    throw InputError("rate_closed_rho0: requires rho = 0 (use rate_numeric)");
  return std::sqrt(p.b * p.b + p.c * p.c) - p.b;
}

// zero-horizon spectral causality at scaled frequency omega
inline double spectral_gc_zero_horizon(const DelayedOuParams& p, double omega) {
  const double ups = p.b * std::cos(p.tau * omega) - omega * std::sin(p.tau * omega);
  return std::log(1.0 + (1.0 - p.rho * p.rho) * p.c * p.c /
                            (p.b * p.b + 2.0 * p.rho * p.c * ups +
                             p.rho * p.rho * p.c * p.c + omega * omega));
}

// zero-horizon rate by quadrature of its spectral decomposition over [0, W],
// with the O(1/W) tail added in closed form
inline double rate_numeric(const DelayedOuParams& p, double W) {
  const double wmin = 50.0 * std::max(p.b, std::abs(p.rho * p.c));
  if (W < wmin) throw InputError("rate_numeric: cutoff W too small");
  // resolve the delay-period oscillation of the integrand
  const double dw_target =
      std::min(2.0 * std::numbers::pi / (40.0 * std::max(p.tau, 1.0)), W / 20000.0);
  int nw = static_cast<int>(std::ceil(W / dw_target));
  if (nw % 2 == 1) ++nw;
  const double dw = W / nw;
  double acc = 0.0;
  for (int i = 0; i <= nw; ++i) {
    const double wgt = (i == 0 || i == nw) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    acc += wgt * spectral_gc_zero_horizon(p, i * dw);
  }
  acc *= dw / 3.0;
  return acc / std::numbers::pi +
         (1.0 - p.rho * p.rho) * p.c * p.c / (std::numbers::pi * W);
}

// ---------------------------------------------------------------------------
// dt-subsampling closed forms (rho = 0)
// ---------------------------------------------------------------------------

struct SubsampleQuantities {
  double alpha, beta, gamma;  // e^{-a dt}, e^{-b dt}, e^{b dt}
  int q;                      // ceil(tau/dt), floored at 1
  double kappa;               // q - tau/dt (1 only in the degenerate tau = 0 case)
  double u1, u2, w, v1, v2, v3;
};

inline SubsampleQuantities subsample_quantities(const DelayedOuParams& p,
                                                double dt) {
  if (dt <= 0.0) throw InputError("subsample_quantities: dt must be positive");
  SubsampleQuantities s;
  s.alpha = std::exp(-p.a * dt);
  s.beta = std::exp(-p.b * dt);
  s.gamma = 1.0 / s.beta;
  const double r = p.tau / dt;
  s.q = std::max(1, static_cast<int>(std::ceil(r - 1e-9)));
  s.kappa = s.q - r;
  if (s.kappa < 0.0) s.kappa = 0.0;
  const double th = p.theta(), et = p.eta();
  s.u1 = (1.0 + th * et) / (2.0 * p.a) * (1.0 - s.alpha * s.alpha);
  s.u2 = -th * et / (2.0 * p.b) * (1.0 - s.beta * s.beta);
  s.w = (1.0 - s.beta * s.beta) / (2.0 * p.b);
  s.v1 = th * et / p.c * std::pow(s.alpha, s.kappa);
  s.v2 = -th / (2.0 * p.b) * std::pow(s.beta, s.kappa);
  s.v3 = -et / (2.0 * p.b) * std::pow(s.gamma, s.kappa);
  return s;
}

// CPSD of the dt-subsampled process at a point z on the unit circle
// (z = e^{-i omega}, omega = 2 pi dt lambda), scaled by dt so that values
// converge to the continuous-time CPSD as dt -> 0. Closed form for rho = 0.
inline Eigen::Matrix2cd subsampled_cpsd_z(const DelayedOuParams& p, double dt,
                                          std::complex<double> z) {
  if (p.rho != 0.0)
    throw InputError("subsampled_cpsd_z: closed form requires rho = 0");
  const auto s = subsample_quantities(p, dt);
  Eigen::Matrix2cd out;
  out(0, 0) = s.u1 / std::norm(1.0 - s.alpha * z) +
              s.u2 / std::norm(1.0 - s.beta * z);
  out(0, 1) = (s.v1 / (1.0 - s.alpha * z) + s.v2 / (1.0 - s.beta * z) +
               s.v3 / (1.0 - s.gamma * z)) *
              std::pow(z, s.q);
  out(1, 0) = std::conj(out(0, 1));
  out(1, 1) = s.w / std::norm(1.0 - s.beta * z);
  return dt * out;
}

inline Eigen::Matrix2cd subsampled_cpsd(const DelayedOuParams& p, double dt,
                                        double lambda) {
  const std::complex<double> z =
      std::exp(std::complex<double>(0.0, -2.0 * std::numbers::pi * dt * lambda));
  return subsampled_cpsd_z(p, dt, z);
}

// Closed-form spectral factorization of the subsampled process (rho = 0).
// The joint process is VARMA(2, q+1); sigma_* are the residual covariances
// of the per-step innovations (multiply by 1/dt for intensities). sigma_r_xx
// is the reduced-regression residual variance and p_ma the reduced MA root
// coefficient.
struct ClosedFactorization {
  SubsampleQuantities sq;
  double dt = 0.0;
  double P, Q, R;        // cross-term polynomial L(z) = beta (P - Q z + R z^2)
  double phi, psi;       // |M(z)|^2 = 2 w (phi - psi cos omega)
  double fa, fb, fc, fd;
  double D;              // det of the residual covariance
  double U, V;           // B_xx(z) = 1 - U z + V z^2
  double sigma_xx, sigma_xy, sigma_yy;
  double sigma_r_xx;
  double p_ma;
  bool minimum_phase = true;
};

namespace detail {

inline double guarded_sqrt(double disc, const char* what) {
  if (disc < -1e-12)
    throw NumericalError(std::string(what) + ": negative discriminant");
  return std::sqrt(std::max(disc, 0.0));
}

}  // namespace detail

inline ClosedFactorization subsampled_factorize_closed(const DelayedOuParams& p,
                                                       double dt) {
  if (p.rho != 0.0)
    throw InputError("subsampled_factorize_closed: requires rho = 0 "
                     "(use the numeric route for rho != 0)");
  ClosedFactorization f;
  f.sq = subsample_quantities(p, dt);
  f.dt = dt;
  const auto& s = f.sq;
  f.P = s.v1 + s.v2 + s.v3;
  f.Q = s.v1 * (s.beta + s.gamma) + s.v2 * (s.gamma + s.alpha) +
        s.v3 * (s.alpha + s.beta);
  f.R = s.v1 * s.beta * s.gamma + s.v2 * s.gamma * s.alpha +
        s.v3 * s.alpha * s.beta;
  f.phi = 0.5 * (s.u2 * (1.0 + s.alpha * s.alpha) + s.u1 * (1.0 + s.beta * s.beta));
  f.psi = s.u2 * s.alpha + s.u1 * s.beta;
  const double b2 = s.beta * s.beta;
  f.fa = s.w * f.phi - 0.5 * b2 * (f.P * f.P + f.Q * f.Q + f.R * f.R);
  f.fb = s.w * f.psi - b2 * f.Q * (f.P + f.R);
  f.fc = -b2 * f.P * f.R;
  // largest-root branch throughout
  f.fd = 0.5 * (f.fa - f.fc +
                detail::guarded_sqrt((f.fa + f.fc) * (f.fa + f.fc) - f.fb * f.fb,
                                     "subsampled_factorize_closed"));
  f.D = f.fd + detail::guarded_sqrt(f.fd * f.fd - f.fc * f.fc,
                                    "subsampled_factorize_closed");
  f.U = f.fb / (f.D + f.fc);
  f.V = f.fc / f.D;
  f.sigma_yy = s.w;
  f.sigma_xy = (s.q == 1) ? -s.beta * f.P : 0.0;
  f.sigma_xx = (f.D + f.sigma_xy * f.sigma_xy) / f.sigma_yy;
  const double disc = detail::guarded_sqrt(f.phi * f.phi - f.psi * f.psi,
                                           "subsampled_factorize_closed");
  f.sigma_r_xx = f.phi + disc;
  f.p_ma = (f.psi != 0.0) ? (f.phi - disc) / f.psi : 0.0;
  // minimum phase of the joint process: roots of 1 - U z + V z^2 outside
  // the unit disc
  if (std::abs(f.V) > 1e-300) {
    const std::complex<double> sq =
        std::sqrt(std::complex<double>(f.U * f.U - 4.0 * f.V, 0.0));
    const std::complex<double> r1 = (f.U + sq) / (2.0 * f.V);
    const std::complex<double> r2 = (f.U - sq) / (2.0 * f.V);
    f.minimum_phase = std::min(std::abs(r1), std::abs(r2)) > 1.0 + 1e-9;
  } else if (std::abs(f.U) > 1e-300) {
    f.minimum_phase = std::abs(1.0 / f.U) > 1.0 + 1e-9;
  }
  return f;
}

struct SubsampledGc {
  double gc_yx = 0.0;
  double gc_xy = 0.0;
  double gc_instant = 0.0;
};

inline SubsampledGc subsampled_gc(const DelayedOuParams& p, double dt) {
  const auto f = subsampled_factorize_closed(p, dt);
  if (!f.minimum_phase)
    throw NumericalError("subsampled_gc: joint subsampled process not minimum-phase");
  SubsampledGc g;
  g.gc_yx = std::log(f.sigma_r_xx / f.sigma_xx);
  g.gc_xy = 0.0;
  const double rho2 =
      f.sigma_xy * f.sigma_xy / (f.sigma_xx * f.sigma_yy);
  g.gc_instant = -std::log1p(-rho2);
  return g;
}

// spectral causality of the subsampled process at z on the unit circle;
// integrates over the Nyquist band to the time-domain value
inline double subsampled_spectral_gc(const ClosedFactorization& f,
                                     std::complex<double> z) {
  const std::complex<double> bxx = 1.0 - f.U * z + f.V * z * z;
  const std::complex<double> lz =
      f.sq.beta * (f.P - f.Q * z + f.R * z * z);
  const std::complex<double> num =
      f.sigma_xy * bxx + lz * std::pow(z, f.sq.q - 1);
  const double den = f.D * std::norm(bxx) + std::norm(lz);
  const double val = -std::log1p(-std::norm(num) / den);
  return std::max(val, 0.0);
}

inline double subsampled_spectral_gc(const DelayedOuParams& p, double dt,
                                     std::complex<double> z) {
  return subsampled_spectral_gc(subsampled_factorize_closed(p, dt), z);
}

// ---------------------------------------------------------------------------
// numeric subsampling route (any rho): sample the analytic autocovariance,
// factorize with the Whittle recursion, reduce with the Riccati solver
// ---------------------------------------------------------------------------

// analytic autocovariance sampled at lags 0, dt, 2 dt, ..., extended until
// decay below tol relative to Gamma(0)
inline AutocovSequence sampled_autocov(const DelayedOuParams& p, double dt,
                                       double tol = 1e-15) {
  const double rate = std::min(p.a, p.b);
  int nlags = static_cast<int>(std::ceil(std::log(1.0 / tol) / (rate * dt))) + 2;
  AutocovSequence acov;
  acov.dt = dt;
  acov.lags.reserve(nlags + 1);
  for (int k = 0; k <= nlags; ++k)
    acov.lags.push_back(ct_autocov(p, k * dt));
  return acov;
}

inline SubsampledGc subsampled_gc_numeric(const DelayedOuParams& p, double dt) {
  auto acov = sampled_autocov(p, dt);
  const int order = acov.max_lag() - 1;
  auto report = whittle_factorize(acov, order);
  const Mat sigma_cov = report.model.dt * report.model.sigma;
  auto red_x = reduce_model(report.model, {0}, 1);
  auto red_y = reduce_model(report.model, {1}, 1);
  SubsampledGc g;
  g.gc_yx = std::max(
      std::log(red_x.model.sigma(0, 0) / report.model.sigma(0, 0)), 0.0);
  g.gc_xy = std::max(
      std::log(red_y.model.sigma(0, 0) / report.model.sigma(1, 1)), 0.0);
  const double rho2 = sigma_cov(0, 1) * sigma_cov(0, 1) /
                      (sigma_cov(0, 0) * sigma_cov(1, 1));
  g.gc_instant = -std::log1p(-rho2);
  return g;
}

// Applying the causal invertible filter diag((a + zeta)/(g + zeta), 1) to
// the process replaces the relaxation rate a by g. Finite-horizon causality
// depends on a, so it shifts; the zero-horizon rate does not involve a and
// is invariant.
struct HorizonCurve {
  std::vector<double> h;
  std::vector<double> gc;
};

inline std::pair<HorizonCurve, HorizonCurve> filter_noninvariance_probe(
    const DelayedOuParams& p, double g, const std::vector<double>& h_grid) {
  if (g <= 0.0) throw InputError("filter_noninvariance_probe: g must be positive");
  DelayedOuParams filtered(g, p.b, p.c, p.rho, p.tau);
  HorizonCurve before, after;
  for (double h : h_grid) {
    before.h.push_back(h);
    before.gc.push_back(gc_horizon(p, h));
    after.h.push_back(h);
    after.gc.push_back(gc_horizon(filtered, h));
  }
  return {before, after};
}

}  // namespace ctgc
