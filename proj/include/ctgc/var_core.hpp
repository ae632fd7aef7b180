#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "ctgc/matpoly.hpp"
#include "ctgc/var_model.hpp"

namespace ctgc {

namespace detail {

constexpr double kMaTruncRel = 1e-15;
constexpr std::size_t kMaTruncCap = 1000000;

// extend the MA recursion until terms decay below kMaTruncRel relative to
// the leading term, or the cap is hit
inline std::vector<Mat> ma_terms_to_decay(const VarModel& model,
                                          int min_terms = 0) {
  const int n = model.dim();
  const int p = model.order();
  std::vector<Mat> b{Mat::Identity(n, n)};
  for (std::size_t k = 1;; ++k) {
    Mat term = Mat::Zero(n, n);
    for (int l = 1; l <= std::min<int>(static_cast<int>(k), p); ++l)
      term += model.coeffs[l - 1] * b[k - l];
    b.push_back(term);
    if (static_cast<int>(k) >= min_terms &&
        term.cwiseAbs().maxCoeff() < kMaTruncRel)
      return b;
    if (k >= kMaTruncCap)
      throw TruncationError("MA expansion: term cap hit before decay");
  }
}

}  // namespace detail

// B_0 = I, B_k = sum_{l=1..min(k,p)} A_l B_{k-l}
inline MaSequence ma_from_var(const VarModel& model, int n_terms) {
  if (n_terms < 1) throw InputError("ma_from_var: n_terms must be >= 1");
  const int n = model.dim();
  const int p = model.order();
  MaSequence ma;
  ma.dt = model.dt;
  ma.terms.reserve(n_terms);
  ma.terms.push_back(Mat::Identity(n, n));
  for (int k = 1; k < n_terms; ++k) {
    Mat term = Mat::Zero(n, n);
    for (int l = 1; l <= std::min(k, p); ++l)
      term += model.coeffs[l - 1] * ma.terms[k - l];
    ma.terms.push_back(term);
  }
  return ma;
}

// Gamma_k = dt * sum_{l>=0} B_{k+l} sigma B_l^T, truncated once the MA terms
// have decayed
inline AutocovSequence autocov_from_var(const VarModel& model, int n_lags) {
  if (n_lags < 0) throw InputError("autocov_from_var: n_lags must be >= 0");
  auto b = detail::ma_terms_to_decay(model, n_lags);
  const int len = static_cast<int>(b.size());
  const int n = model.dim();
  std::vector<Mat> bs(len);  // B_l * sigma
  for (int l = 0; l < len; ++l) bs[l] = b[l] * model.sigma;
  AutocovSequence acov;
  acov.dt = model.dt;
  acov.lags.reserve(n_lags + 1);
  for (int k = 0; k <= n_lags; ++k) {
    Mat g = Mat::Zero(n, n);
    for (int l = 0; l + k < len; ++l) g += bs[k + l] * b[l].transpose();
    acov.lags.push_back(model.dt * g);
  }
  return acov;
}

// H(lambda) = dt (I - sum A_l e^{-2 pi i dt lambda l})^{-1},  S = H sigma H*
inline std::pair<SpectralGrid, SpectralGrid> var_spectrum(
    const VarModel& model, const std::vector<double>& freqs) {
  const int n = model.dim();
  const double nyq = 0.5 / model.dt;
  SpectralGrid transfer{freqs, {}, SpectralKind::transfer};
  SpectralGrid cpsd{freqs, {}, SpectralKind::cpsd};
  transfer.values.reserve(freqs.size());
  cpsd.values.reserve(freqs.size());
  for (double lam : freqs) {
    if (lam < -nyq - 1e-12 || lam > nyq + 1e-12)
      throw InputError("var_spectrum: frequency outside the Nyquist band");
    const std::complex<double> z =
        std::exp(std::complex<double>(0.0, -2.0 * std::numbers::pi * model.dt * lam));
    CMat phi = CMat::Identity(n, n);
    std::complex<double> zl = 1.0;
    for (const auto& a : model.coeffs) {
      zl *= z;
      phi -= a.cast<std::complex<double>>() * zl;
    }
    Eigen::FullPivLU<CMat> lu(phi);
    if (!lu.isInvertible())
      throw NumericalError("var_spectrum: singular AR polynomial at grid point");
    CMat h = model.dt * lu.inverse();
    transfer.values.push_back(h);
    cpsd.values.push_back(h * model.sigma.cast<std::complex<double>>() *
                          h.adjoint());
  }
  return {std::move(transfer), std::move(cpsd)};
}

// S(lambda) = dt [Gamma_0 + sum_{k>=1} (Gamma_k z^k + Gamma_k^T z^-k)],
// z = e^{-2 pi i dt lambda}
inline SpectralGrid cpsd_from_autocov(const AutocovSequence& acov,
                                      const std::vector<double>& freqs) {
  const int K = acov.max_lag();
  const double scale = acov.lags[0].cwiseAbs().maxCoeff();
  if (K >= 1 && acov.lags[K].cwiseAbs().maxCoeff() > 1e-14 * scale)
    throw TruncationError("cpsd_from_autocov: sequence not decayed at final lag");
  SpectralGrid out{freqs, {}, SpectralKind::cpsd};
  out.values.reserve(freqs.size());
  for (double lam : freqs) {
    const std::complex<double> z =
        std::exp(std::complex<double>(0.0, -2.0 * std::numbers::pi * acov.dt * lam));
    CMat s = acov.lags[0].cast<std::complex<double>>();
    std::complex<double> zk = 1.0;
    for (int k = 1; k <= K; ++k) {
      zk *= z;
      CMat g = acov.lags[k].cast<std::complex<double>>();
      s += g * zk + g.adjoint() * std::conj(zk);
    }
    out.values.push_back(acov.dt * s);
  }
  return out;
}

// MSE_m = dt sum_{l=0}^{m-1} B_l sigma B_l^T
inline MsPredictionError mspe_multistep(const VarModel& model, int m) {
  if (m < 1) throw InputError("mspe_multistep: horizon must be >= 1");
  MaSequence ma = ma_from_var(model, m);
  Mat mse = Mat::Zero(model.dim(), model.dim());
  for (int l = 0; l < m; ++l)
    mse += ma.terms[l] * model.sigma * ma.terms[l].transpose();
  return {m, model.dt * mse};
}

inline MsPredictionError mspe_multistep(const SubprocessModel& sub, int m) {
  if (m < 1) throw InputError("mspe_multistep: horizon must be >= 1");
  if (static_cast<int>(sub.ma.size()) < m)
    throw InputError("mspe_multistep: subprocess MA sequence shorter than horizon");
  const int n = static_cast<int>(sub.sigma.rows());
  Mat mse = Mat::Zero(n, n);
  for (int l = 0; l < m; ++l)
    mse += sub.ma[l] * sub.sigma * sub.ma[l].transpose();
  return {m, sub.dt * mse};
}

namespace detail {

inline double gc_from_mse(const Mat& mse_reduced, const Mat& mse_full,
                          const char* what) {
  double v = log_det_ratio(mse_reduced, mse_full, what);
  if (v < -1e-12)
    throw NumericalError(std::string(what) +
                         ": reduced prediction error below full");
  return std::max(v, 0.0);
}

}  // namespace detail

// log det MSE'_{m,xx} / det MSE_{m,xx}; the reduced model describes the
// target subprocess alone
inline GcValue gc_multistep(const VarModel& full, const SubprocessModel& reduced,
                            const Partition& part, int m) {
  part.validate(full.dim());
  if (static_cast<int>(reduced.sigma.rows()) !=
      static_cast<int>(part.target.size()))
    throw InputError("gc_multistep: reduced model dimension mismatch");
  Mat mse_full =
      detail::submatrix(mspe_multistep(full, m).matrix, part.target, part.target);
  Mat mse_red = mspe_multistep(reduced, m).matrix;
  return {detail::gc_from_mse(mse_red, mse_full, "gc_multistep"), part, m};
}

inline GcValue gc_multistep(const VarModel& full, const VarModel& reduced,
                            const Partition& part, int m) {
  SubprocessModel sub{ma_from_var(reduced, m).terms, reduced.sigma, reduced.dt};
  return gc_multistep(full, sub, part, m);
}

// log det(Sigma_xx) det(Sigma_yy) / det(Sigma); zero iff the cross block is
inline GcValue gc_instantaneous(const Mat& sigma, const Partition& part) {
  part.validate(static_cast<int>(sigma.rows()));
  Mat sxx = detail::submatrix(sigma, part.target, part.target);
  Mat syy = detail::submatrix(sigma, part.source, part.source);
  double num = detail::det_symmetrized(sxx, "gc_instantaneous") *
               detail::det_symmetrized(syy, "gc_instantaneous");
  double den = detail::det_symmetrized(sigma, "gc_instantaneous");
  if (den <= 0.0 || num <= 0.0)
    throw NumericalError("gc_instantaneous: singular covariance");
  double v = std::log(num / den);
  return {std::max(v, 0.0), part, 1};
}

// log det(Sigma'_xx) / det(Sigma_xx|y); equals 1-step GC + instantaneous GC
inline GcValue gc_strong(const Mat& sigma, const Mat& reduced_sigma_xx,
                         const Partition& part) {
  part.validate(static_cast<int>(sigma.rows()));
  Mat sxx = detail::submatrix(sigma, part.target, part.target);
  Mat sxy = detail::submatrix(sigma, part.target, part.source);
  Mat syy = detail::submatrix(sigma, part.source, part.source);
  Eigen::LDLT<Mat> ldlt(0.5 * (syy + syy.transpose()));
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    throw NumericalError("gc_strong: singular source covariance");
  Mat partial = sxx - sxy * ldlt.solve(sxy.transpose());
  return {detail::gc_from_mse(reduced_sigma_xx, partial, "gc_strong"), part, 1};
}

// Spectral GC at each frequency, from the full model only:
// f(lambda) = log det S_xx / det(S_xx - H_xy Sigma_yy|x H_xy*)
inline std::vector<double> gc_spectral(const VarModel& full,
                                       const Partition& part,
                                       const std::vector<double>& freqs) {
  part.validate(full.dim());
  Mat sxx = detail::submatrix(full.sigma, part.target, part.target);
  Mat sxy = detail::submatrix(full.sigma, part.target, part.source);
  Mat syy = detail::submatrix(full.sigma, part.source, part.source);
  Eigen::LDLT<Mat> ldlt(0.5 * (sxx + sxx.transpose()));
  if (ldlt.info() != Eigen::Success)
    throw NumericalError("gc_spectral: singular target residual covariance");
  Mat syy_px = syy - sxy.transpose() * ldlt.solve(sxy);
  auto [transfer, cpsd] = var_spectrum(full, freqs);
  std::vector<double> out;
  out.reserve(freqs.size());
  for (size_t j = 0; j < freqs.size(); ++j) {
    CMat s_xx = detail::submatrix(cpsd.values[j], part.target, part.target);
    CMat h_xy = detail::submatrix(transfer.values[j], part.target, part.source);
    CMat denom = s_xx - h_xy * syy_px.cast<std::complex<double>>() * h_xy.adjoint();
    double dn = detail::det_symmetrized(s_xx.real(), "gc_spectral");
    double dd = detail::det_symmetrized(denom.real(), "gc_spectral");
    if (dn <= 0.0 || dd <= 0.0)
      throw NumericalError("gc_spectral: singular spectral matrix");
    double v = std::log(dn / dd);
    if (v < -1e-10)
      throw NumericalError("gc_spectral: negative spectral causality");
    out.push_back(std::max(v, 0.0));
  }
  return out;
}

// dt * trapezoid integral of per-frequency values over a uniform full-band
// grid (periodic, so the plain mean)
inline double integrate_nyquist(const std::vector<double>& values) {
  if (values.empty()) throw InputError("integrate_nyquist: empty grid");
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

// Convolve an MA representation with a causal minimum-phase filter
// (G_0 = I): Btilde_l = sum_k G_k B_{l-k}
inline MaSequence apply_causal_filter(const MaSequence& ma,
                                      const std::vector<Mat>& filter) {
  if (filter.empty() || !filter[0].isIdentity(1e-14))
    throw InputError("apply_causal_filter: filter must start with G_0 = I");
  auto mp = minimum_phase_check(filter);
  if (!mp.minimum_phase)
    throw FilterError("apply_causal_filter: filter is not minimum-phase");
  const int n = ma.dim();
  const int lb = static_cast<int>(ma.terms.size());
  const int lg = static_cast<int>(filter.size());
  MaSequence out;
  out.dt = ma.dt;
  out.terms.assign(lb + lg - 1, Mat::Zero(n, n));
  for (int k = 0; k < lg; ++k)
    for (int l = 0; l < lb; ++l) out.terms[k + l] += filter[k] * ma.terms[l];
  return out;
}

struct UnidirVar1Gc {
  double one_step = 0.0;
  double two_step = 0.0;
};

// Closed-form 1- and 2-step GC for the unidirectional VAR(1)
//   X_k = a X_{k-1} + c Y_{k-1} + ex,  Y_k = b Y_{k-1} + ey,  Sigma = I.
// The reduced X process is ARMA(2,1) with innovations variance
// upsilon = D + sqrt(D^2 - b^2), D = (1 + b^2 + c^2)/2, and MA root
// parameter h = b/upsilon.
inline UnidirVar1Gc unidir_var1_gc_closed(double a, double b, double c) {
  if (std::abs(a) >= 1.0 || std::abs(b) >= 1.0)
    throw InputError("unidir_var1_gc_closed: |a|, |b| must be < 1");
  const double d = 0.5 * (1.0 + b * b + c * c);
  const double disc = d * d - b * b;
  const double ups = d + std::sqrt(std::max(disc, 0.0));
  const double h = b / ups;
  UnidirVar1Gc out;
  out.one_step = std::log(ups);
  const double abh = a + b - h;
  out.two_step = std::log(ups * (1.0 + abh * abh) / (1.0 + a * a + c * c));
  return out;
}

}  // namespace ctgc
