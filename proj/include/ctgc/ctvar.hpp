#pragma once

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "ctgc/var_model.hpp"

namespace ctgc {

// Continuous-time AR kernel restricted to a finite sum of point delays:
// A(u) = sum_j A_j delta(u - tau_j). Smooth distributed kernels are out of
// scope; point delays keep the MA-kernel ODE exact between breakpoints.
struct DelayKernel {
  struct Term {
    double delay = 0.0;  // ms
    Mat matrix;
  };
  std::vector<Term> terms;
  Mat sigma;  // noise intensity (x^2/ms)

  DelayKernel(std::vector<Term> terms_, Mat sigma_)
      : terms(std::move(terms_)), sigma(std::move(sigma_)) {
    if (terms.empty()) throw InputError("DelayKernel: no terms");
    const int n = dim();
    double prev = -1.0;
    for (const auto& t : terms) {
      if (t.delay < 0.0) throw InputError("DelayKernel: negative delay");
      if (t.delay <= prev)
        throw InputError("DelayKernel: delays must be strictly increasing");
      prev = t.delay;
      if (t.matrix.rows() != n || t.matrix.cols() != n)
        throw InputError("DelayKernel: matrix size mismatch");
    }
    if (sigma.rows() != n || sigma.cols() != n ||
        !detail::is_symmetric(sigma) || detail::min_eigenvalue_sym(sigma) <= 0.0)
      throw InputError("DelayKernel: sigma must be symmetric positive-definite");
  }

  int dim() const { return static_cast<int>(terms[0].matrix.rows()); }
  double max_delay() const { return terms.back().delay; }
  double min_positive_delay() const {
    for (const auto& t : terms)
      if (t.delay > 0.0) return t.delay;
    return 0.0;
  }
  double max_rate() const {
    double r = 0.0;
    for (const auto& t : terms)
      r = std::max(r, t.matrix.cwiseAbs().maxCoeff());
    return r;
  }
};

// H(lambda) = (2 pi i lambda I - sum_j A_j e^{-2 pi i lambda tau_j})^{-1}
inline CMat ct_transfer(const DelayKernel& kernel, double lambda) {
  const int n = kernel.dim();
  const std::complex<double> iw(0.0, 2.0 * std::numbers::pi * lambda);
  CMat phi = iw * CMat::Identity(n, n);
  for (const auto& t : kernel.terms)
    phi -= t.matrix.cast<std::complex<double>>() * std::exp(-iw * t.delay);
  Eigen::FullPivLU<CMat> lu(phi);
  if (!lu.isInvertible())
    throw NumericalError("ct_transfer: singular AR symbol");
  return lu.inverse();
}

inline CMat ct_cpsd(const DelayKernel& kernel, double lambda) {
  CMat h = ct_transfer(kernel, lambda);
  return h * kernel.sigma.cast<std::complex<double>>() * h.adjoint();
}

// Heuristic stability screen: samples |det Phi(zeta)| on a rectangle of the
// closed right half-plane and flags near-zeros. Documented heuristic, not a
// proof.
inline bool kernel_stable(const DelayKernel& kernel) {
  const int n = kernel.dim();
  const double mr = kernel.max_rate();
  if (mr <= 0.0) return false;  // zero kernel: Phi(0) singular
  const double bound = 10.0 * mr;
  const int nre = 100, nim = 101;
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < nre; ++i) {
    const double re = bound * i / (nre - 1);
    for (int j = 0; j < nim; ++j) {
      const double im = -bound + 2.0 * bound * j / (nim - 1);
      const std::complex<double> zeta(re, im);
      CMat phi = zeta * CMat::Identity(n, n);
      for (const auto& t : kernel.terms)
        phi -= t.matrix.cast<std::complex<double>>() * std::exp(-zeta * t.delay);
      const double d = std::abs(Eigen::PartialPivLU<CMat>(phi).determinant());
      const double norm = std::pow(std::abs(zeta) + mr, n);
      worst = std::min(worst, d / norm);
    }
  }
  return worst > 1e-8;
}

// MA kernel samples B(0), B(du), ..., with B(0) = I
struct KernelSamples {
  double du = 0.0;
  std::vector<Mat> samples;

  int dim() const { return static_cast<int>(samples.at(0).rows()); }
  double range() const { return du * (static_cast<double>(samples.size()) - 1.0); }
};

struct AutocovFunction {
  double step = 0.0;
  std::vector<Mat> samples;  // Gamma(0), Gamma(step), ...
};

namespace detail {

// cubic Hermite on one grid interval
inline Mat hermite(const Mat& b0, const Mat& d0, const Mat& b1, const Mat& d1,
                   double theta, double h) {
  const double t2 = theta * theta, t3 = t2 * theta;
  return (2 * t3 - 3 * t2 + 1) * b0 + (t3 - 2 * t2 + theta) * h * d0 +
         (-2 * t3 + 3 * t2) * b1 + (t3 - t2) * h * d1;
}

}  // namespace detail

// Solve dB/du = sum_j A_j B(u - tau_j) [u >= tau_j], B(0) = I, with classical
// RK4 between delay breakpoints. Delays are snapped to the integration grid
// (choose du dividing the delays for exactness); delayed stage values come
// from cubic Hermite dense output, which preserves the 4th-order accuracy.
inline KernelSamples ma_kernel_solve(const DelayKernel& kernel, double u_max,
                                     double du) {
  if (u_max <= 0.0 || du <= 0.0) throw InputError("ma_kernel_solve: bad grid");
  const double min_delay = kernel.min_positive_delay();
  if (min_delay > 0.0) {
    if (du > min_delay / 50.0 + 1e-12)
      throw InputError("ma_kernel_solve: du must be <= min positive delay / 50");
  } else if (du > u_max / 1000.0 + 1e-12) {
    throw InputError("ma_kernel_solve: du must be <= u_max / 1000 for zero-delay kernels");
  }
  const int n = kernel.dim();
  const int nsteps = static_cast<int>(std::ceil(u_max / du - 1e-9));
  const double h = du;

  struct Lagged {
    int offset;  // delay in grid units
    Mat a;
  };
  std::vector<Lagged> lagged;
  Mat a0 = Mat::Zero(n, n);  // zero-delay part
  for (const auto& t : kernel.terms) {
    const int m = static_cast<int>(std::llround(t.delay / h));
    if (m == 0)
      a0 += t.matrix;
    else
      lagged.push_back({m, t.matrix});
  }

  std::vector<Mat> b(nsteps + 1), dr(nsteps + 1), dl(nsteps + 1);
  b[0] = Mat::Identity(n, n);

  // history lookup at grid position pos (units of h, >= 0), for a step that
  // started at node `start`; intervals use their own end-derivatives so the
  // interpolation stays piecewise-smooth across breakpoints
  auto hist = [&](double pos) -> Mat {
    const int i = static_cast<int>(std::floor(pos + 1e-9));
    const double theta = pos - i;
    if (theta < 1e-9) return b[i];
    return detail::hermite(b[i], dr[i], b[i + 1], dl[i + 1], theta, h);
  };
  // rhs at grid position pos for the step starting at node `start`; a lagged
  // term is active only when the step begins at or after its breakpoint
  auto rhs = [&](int start, double pos, const Mat& value) -> Mat {
    Mat r = a0 * value;
    for (const auto& lg : lagged)
      if (start >= lg.offset) r += lg.a * hist(pos - lg.offset);
    return r;
  };

  dr[0] = rhs(0, 0.0, b[0]);
  for (int k = 0; k < nsteps; ++k) {
    const Mat& k1 = dr[k];
    const Mat k2 = rhs(k, k + 0.5, b[k] + 0.5 * h * k1);
    const Mat k3 = rhs(k, k + 0.5, b[k] + 0.5 * h * k2);
    const Mat k4 = rhs(k, k + 1.0, b[k] + h * k3);
    b[k + 1] = b[k] + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    dl[k + 1] = rhs(k, k + 1.0, b[k + 1]);      // left-limit derivative
    dr[k + 1] = rhs(k + 1, k + 1.0, b[k + 1]);  // right derivative
    if (b[k + 1].cwiseAbs().maxCoeff() > 1e6)
      throw StabilityError("ma_kernel_solve: kernel norm growth exceeds 1e6");
  }
  return {h, std::move(b)};
}

namespace detail {

inline void require_decayed_tail(const KernelSamples& samples) {
  if (samples.samples.back().cwiseAbs().maxCoeff() > 1e-10)
    throw TruncationError("kernel samples not decayed below 1e-10 at the tail");
}

}  // namespace detail

// Gamma(t) = integral B(t+u) sigma B(u)^T du by trapezoid on the sample grid;
// t must lie on the grid (negative t via the transpose)
inline Mat autocov_at(const KernelSamples& samples, const Mat& sigma, double t) {
  if (t < 0.0) return autocov_at(samples, sigma, -t).transpose();
  detail::require_decayed_tail(samples);
  const int kt = static_cast<int>(std::llround(t / samples.du));
  if (std::abs(kt * samples.du - t) > 1e-6 * std::max(1.0, t))
    throw InputError("autocov_at: t not on the sample grid");
  const int len = static_cast<int>(samples.samples.size());
  if (kt >= len) throw InputError("autocov_at: t beyond covered range");
  const int n = samples.dim();
  Mat acc = Mat::Zero(n, n);
  for (int l = 0; kt + l < len; ++l) {
    Mat term = samples.samples[kt + l] * sigma * samples.samples[l].transpose();
    const bool edge = (l == 0) || (kt + l == len - 1);
    acc += edge ? 0.5 * term : term;
  }
  return samples.du * acc;
}

inline AutocovFunction autocov_quadrature(const KernelSamples& samples,
                                          const Mat& sigma, double t_max,
                                          double t_step = 0.0) {
  if (t_step <= 0.0) t_step = samples.du;
  AutocovFunction out;
  out.step = t_step;
  const int nt = static_cast<int>(std::floor(t_max / t_step + 1e-9));
  out.samples.reserve(nt + 1);
  for (int k = 0; k <= nt; ++k)
    out.samples.push_back(autocov_at(samples, sigma, k * t_step));
  return out;
}

// MSE(h) = integral_0^h B(u) sigma B(u)^T du (trapezoid; fractional last
// interval by linear interpolation of the integrand)
inline Mat ct_mspe(const KernelSamples& samples, const Mat& sigma, double h) {
  if (h < 0.0) throw InputError("ct_mspe: negative horizon");
  if (h > samples.range() + 1e-9)
    throw InputError("ct_mspe: horizon beyond covered sample range");
  const int n = samples.dim();
  if (h == 0.0) return Mat::Zero(n, n);
  const double du = samples.du;
  const int full = std::min(static_cast<int>(std::floor(h / du + 1e-12)),
                            static_cast<int>(samples.samples.size()) - 1);
  auto integrand = [&](int k) -> Mat {
    return samples.samples[k] * sigma * samples.samples[k].transpose();
  };
  Mat acc = Mat::Zero(n, n);
  Mat prev = integrand(0);
  for (int k = 1; k <= full; ++k) {
    Mat cur = integrand(k);
    acc += 0.5 * du * (prev + cur);
    prev = cur;
  }
  const double rem = h - full * du;
  if (rem > 1e-12 && full + 1 < static_cast<int>(samples.samples.size())) {
    Mat next = integrand(full + 1);
    const double theta = rem / du;
    Mat mid = (1.0 - theta) * prev + theta * next;
    acc += 0.5 * rem * (prev + mid);
  }
  return acc;
}

// Gamma(0) from A Gamma + Gamma A^T + sigma = 0 (Kronecker solve)
inline Mat lyapunov_continuous_solve(const Mat& a, const Mat& sigma) {
  const int n = static_cast<int>(a.rows());
  if (sigma.rows() != n || sigma.cols() != n)
    throw InputError("lyapunov_continuous_solve: size mismatch");
  Mat kron = Mat::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        kron(i * n + j, k * n + j) += a(i, k);  // A Gamma
        kron(i * n + j, i * n + k) += a(j, k);  // Gamma A^T
      }
  Eigen::FullPivLU<Mat> lu(kron);
  if (!lu.isInvertible())
    throw SingularityError(
        "lyapunov_continuous_solve: eigenvalue pair summing to zero");
  Vec rhs(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) rhs(i * n + j) = -sigma(i, j);
  Vec x = lu.solve(rhs);
  Mat gamma(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gamma(i, j) = x(i * n + j);
  gamma = 0.5 * (gamma + gamma.transpose());
  if ((a * gamma + gamma * a.transpose() + sigma).cwiseAbs().maxCoeff() > 1e-10)
    throw NumericalError("lyapunov_continuous_solve: residual above tolerance");
  return gamma;
}

inline Mat matrix_exponential(const Mat& m) { return m.exp(); }

// Exact subsampling of the Ornstein-Uhlenbeck process dX = A X dt + dW:
// coefficient e^{dt A} and residual intensity [Gamma(0) - e^{dt A} Gamma(0)
// e^{dt A^T}]/dt, with Gamma(0) from the continuous Lyapunov equation.
inline VarModel vou_subsample(const Mat& a, const Mat& sigma, double dt) {
  if (dt <= 0.0) throw InputError("vou_subsample: dt must be positive");
  for (const auto& ev : a.eigenvalues())
    if (ev.real() >= 0.0)
      throw StabilityError("vou_subsample: A has an eigenvalue with nonnegative real part");
  Mat gamma0 = lyapunov_continuous_solve(a, sigma);
  Mat e = matrix_exponential(dt * a);
  Mat s = (gamma0 - e * gamma0 * e.transpose()) / dt;
  return VarModel({e}, 0.5 * (s + s.transpose()), dt);
}

// Zero-horizon GC rate (nats/ms) from one-sided kernel derivatives at 0:
//   Pi = (1/2)[Bdot(0) sigma + sigma Bdot(0)^T],
//   rate = trace(sigma_xx^{-1} [Pi'_xx - Pi_xx])
inline double zero_horizon_rate(const KernelSamples& full,
                                const KernelSamples& reduced, const Mat& sigma,
                                const std::vector<int>& target) {
  auto fwd_deriv = [](const KernelSamples& ks) -> Mat {
    if (ks.samples.size() < 3)
      throw InputError("zero_horizon_rate: need at least three kernel samples");
    return (-3.0 * ks.samples[0] + 4.0 * ks.samples[1] - ks.samples[2]) /
           (2.0 * ks.du);
  };
  const Mat bdot = fwd_deriv(full);
  const Mat bdot_r = fwd_deriv(reduced);
  Mat sigma_xx = detail::submatrix(sigma, target, target);
  Mat pi_full = 0.5 * (bdot * sigma + sigma * bdot.transpose());
  Mat pi_xx = detail::submatrix(pi_full, target, target);
  Mat pi_red = 0.5 * (bdot_r * sigma_xx + sigma_xx * bdot_r.transpose());
  Eigen::LDLT<Mat> fac(0.5 * (sigma_xx + sigma_xx.transpose()));
  if (fac.info() != Eigen::Success || !fac.isPositive())
    throw NumericalError("zero_horizon_rate: singular target noise intensity");
  const double rate = fac.solve(pi_red - pi_xx).trace();
  if (rate < -1e-8)
    throw NumericalError("zero_horizon_rate: negative rate beyond tolerance");
  return std::max(rate, 0.0);
}

// Least-squares fit of the subsampled-CPSD defect against dt^2 at a fixed
// frequency; for small dt the coefficient approaches sigma/12.
struct AsymptoticExpansion {
  Mat coeff;                // fitted dt^2 coefficient (real part)
  double rel_error = 0.0;   // max-norm relative error against sigma/12
};

inline AsymptoticExpansion smallDt_expansion_check(
    const std::vector<CMat>& subsampled, const CMat& ct_value,
    const std::vector<double>& dts, const Mat& sigma) {
  if (subsampled.size() != dts.size() || subsampled.empty())
    throw InputError("smallDt_expansion_check: size mismatch");
  double denom = 0.0;
  Mat num = Mat::Zero(sigma.rows(), sigma.cols());
  for (size_t i = 0; i < dts.size(); ++i) {
    const double w = dts[i] * dts[i];
    num += w * (subsampled[i] - ct_value).real();
    denom += w * w;
  }
  if (denom <= 0.0)
    throw NumericalError("smallDt_expansion_check: ill-conditioned fit (no nonzero dt)");
  AsymptoticExpansion out;
  out.coeff = num / denom;
  const Mat ref = sigma / 12.0;
  out.rel_error = (out.coeff - ref).cwiseAbs().maxCoeff() /
                  std::max(ref.cwiseAbs().maxCoeff(), 1e-300);
  return out;
}

}  // namespace ctgc
