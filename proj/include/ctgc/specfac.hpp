#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "ctgc/matpoly.hpp"
#include "ctgc/var_core.hpp"
#include "ctgc/var_model.hpp"

namespace ctgc {

struct FactorizationReport {
  VarModel model;
  int iterations = 0;    // recursion order actually used
  double residual = 0.0; // max-norm Yule-Walker defect over supplied lags
};

namespace detail {

// relative Yule-Walker defect of (A_1..A_p, V) against the supplied lags
inline double yule_walker_defect(const AutocovSequence& acov,
                                 const std::vector<Mat>& coeffs) {
  const int K = acov.max_lag();
  const int p = static_cast<int>(coeffs.size());
  const double scale = acov.lags[0].cwiseAbs().maxCoeff();
  double worst = 0.0;
  for (int j = 1; j <= K; ++j) {
    Mat m = acov.lags[j];
    for (int l = 1; l <= p; ++l) {
      const Mat g = (j - l >= 0) ? acov.lags[j - l]
                                 : Mat(acov.lags[l - j].transpose());
      m -= coeffs[l - 1] * g;
    }
    worst = std::max(worst, m.cwiseAbs().maxCoeff() / scale);
  }
  return worst;
}

}  // namespace detail

// Whittle's time-domain factorization: the multivariate Levinson recursion on
// an autocovariance sequence. The recursion steps the order upward and stops
// as soon as the Yule-Walker defect over all supplied lags drops below tol,
// or the requested order p is reached. More lags than p must be supplied for
// the defect to be meaningful.
inline FactorizationReport whittle_factorize(const AutocovSequence& acov,
                                             int p, double tol = 1e-12,
                                             int max_iter = 200) {
  const int K = acov.max_lag();
  const int n = acov.dim();
  if (p < 1) throw InputError("whittle_factorize: order must be >= 1");
  if (K < 1) throw InputError("whittle_factorize: need at least lag 1");
  if (detail::min_eigenvalue_sym(acov.lags[0]) <= 0.0)
    throw NumericalError("whittle_factorize: Gamma_0 not positive-definite");

  const int target = std::min(p, K);
  std::vector<Mat> fwd, bwd;  // forward/backward coefficients
  Mat v = acov.lags[0];       // forward prediction error covariance
  Mat w = acov.lags[0];       // backward
  int order = 0;
  double defect = detail::yule_walker_defect(acov, fwd);
  while (order < target && defect >= tol) {
    if (order >= max_iter)
      throw ConvergenceError("whittle_factorize: max_iter exceeded before tolerance");
    const int k = order + 1;
    Mat delta = acov.lags[k];
    for (int l = 1; l < k; ++l) delta -= fwd[l - 1] * acov.lags[k - l];
    Eigen::LDLT<Mat> wfac(0.5 * (w + w.transpose()));
    Eigen::LDLT<Mat> vfac(0.5 * (v + v.transpose()));
    if (wfac.info() != Eigen::Success || vfac.info() != Eigen::Success ||
        !wfac.isPositive() || !vfac.isPositive())
      throw NumericalError("whittle_factorize: indefinite intermediate covariance");
    Mat ak = wfac.solve(delta.transpose()).transpose();  // delta W^-1
    Mat bk = vfac.solve(delta).transpose();              // delta^T V^-1
    std::vector<Mat> fwd_next(k), bwd_next(k);
    fwd_next[k - 1] = ak;
    bwd_next[k - 1] = bk;
    for (int l = 1; l < k; ++l) {
      fwd_next[l - 1] = fwd[l - 1] - ak * bwd[k - l - 1];
      bwd_next[l - 1] = bwd[l - 1] - bk * fwd[k - l - 1];
    }
    v -= ak * delta.transpose();
    w -= bk * delta;
    fwd = std::move(fwd_next);
    bwd = std::move(bwd_next);
    order = k;
    defect = detail::yule_walker_defect(acov, fwd);
  }
  if (order == 0) {
    // white noise: defect already below tolerance with no coefficients
    fwd.assign(1, Mat::Zero(n, n));
    order = 1;
  }
  VarModel model(fwd, v / acov.dt, acov.dt);
  return {std::move(model), order, defect};
}

// Innovations-form state space of a VAR(p):
//   xi_{k+1} = A xi_k + K e_k,   X_k = C xi_k + e_k,
// with xi_k = [X_{k-1}; ...; X_{k-p}], A the companion matrix, C = [A_1..A_p].
struct InnovationsStateSpace {
  Mat transition;
  Mat observation;
  Mat gain;
  Mat innovations_sigma;  // intensity (x^2/ms)
  double dt = 1.0;
};

inline InnovationsStateSpace var_to_innovations_ss(const VarModel& model) {
  const int n = model.dim();
  const int p = model.order();
  InnovationsStateSpace ss;
  ss.transition = detail::companion(model.coeffs);
  ss.observation = Mat::Zero(n, n * p);
  for (int l = 0; l < p; ++l)
    ss.observation.block(0, l * n, n, n) = model.coeffs[l];
  ss.gain = Mat::Zero(n * p, n);
  ss.gain.topLeftCorner(n, n) = Mat::Identity(n, n);
  ss.innovations_sigma = model.sigma;
  ss.dt = model.dt;
  return ss;
}

// Stabilizing solution of the filter-form discrete algebraic Riccati equation
//   P = A P A' + Q - (A P C' + S)(C P C' + R)^{-1}(A P C' + S)'
// by structure-preserving doubling. The fixed-point residual of the returned
// solution is below tol (max-norm).
inline Mat solve_dare(const Mat& transition, const Mat& observation,
                      const Mat& q, const Mat& r, const Mat& s,
                      double tol = 1e-10, int max_iter = 100,
                      int* iterations = nullptr) {
  const auto nx = transition.rows();
  Eigen::LDLT<Mat> rfac(0.5 * (r + r.transpose()));
  if (rfac.info() != Eigen::Success || !rfac.isPositive())
    throw NumericalError("solve_dare: observation noise covariance not PD");
  Mat a = (transition - s * rfac.solve(observation)).transpose();
  Mat g = observation.transpose() * rfac.solve(observation);
  Mat h = q - s * rfac.solve(s.transpose());
  const Mat eye = Mat::Identity(nx, nx);
  int it = 0;
  for (; it < max_iter; ++it) {
    Eigen::PartialPivLU<Mat> lu(eye + g * h);
    Mat ia = lu.solve(a);              // (I + G H)^-1 A
    Mat a_next = a * ia;
    Mat g_next = g + a * lu.solve(g * a.transpose());
    Mat h_next = h + a.transpose() * h * ia;
    h_next = 0.5 * (h_next + h_next.transpose());
    double step = (h_next - h).cwiseAbs().maxCoeff();
    a = std::move(a_next);
    g = std::move(g_next);
    h = std::move(h_next);
    if (step < 0.1 * tol) break;
  }
  if (iterations) *iterations = it;
  // fixed-point residual check
  Mat apc = transition * h * observation.transpose() + s;
  Mat cpc = observation * h * observation.transpose() + r;
  Mat res = transition * h * transition.transpose() + q -
            apc * Eigen::LDLT<Mat>(0.5 * (cpc + cpc.transpose())).solve(apc.transpose()) - h;
  if (res.cwiseAbs().maxCoeff() >= tol)
    throw ConvergenceError("solve_dare: residual above tolerance");
  if (detail::min_eigenvalue_sym(h) < -tol)
    throw NumericalError("solve_dare: solution not positive semidefinite");
  return h;
}

struct Reduction {
  SubprocessModel model;      // sigma is the innovations intensity
  double dare_residual = 0.0;
  int dare_iterations = 0;
};

// Reduced (target-subprocess) innovations model of a joint VAR, obtained by
// solving a single DARE for the stationary Kalman filter of the subprocess
// observation. Feeding model.sigma into the 1-step log-ratio gives GC; the
// MA terms support multistep GC.
inline Reduction reduce_model(const VarModel& model,
                              const std::vector<int>& target,
                              int n_ma_terms = -1) {
  const int n = model.dim();
  {
    std::vector<char> seen(n, 0);
    if (target.empty()) throw InputError("reduce_model: empty target");
    for (int i : target) {
      if (i < 0 || i >= n || seen[i])
        throw InputError("reduce_model: bad target indices");
      seen[i] = 1;
    }
  }
  auto ss = var_to_innovations_ss(model);
  const int nx = static_cast<int>(ss.transition.rows());
  const int ntg = static_cast<int>(target.size());
  Mat ex = Mat::Zero(n, ntg);
  for (int j = 0; j < ntg; ++j) ex(target[j], j) = 1.0;
  const Mat ecov = model.dt * model.sigma;  // innovations covariance of the joint model
  Mat cx = ex.transpose() * ss.observation;
  Mat q = ss.gain * ecov * ss.gain.transpose();
  Mat r = ex.transpose() * ecov * ex;
  Mat s = ss.gain * ecov * ex;

  Reduction red;
  Mat p = solve_dare(ss.transition, cx, q, r, s, 1e-10, 100, &red.dare_iterations);
  Mat apc = ss.transition * p * cx.transpose() + s;
  Mat cpc = cx * p * cx.transpose() + r;
  cpc = 0.5 * (cpc + cpc.transpose());
  Eigen::LDLT<Mat> cpc_fac(cpc);
  if (cpc_fac.info() != Eigen::Success || !cpc_fac.isPositive())
    throw NumericalError("reduce_model: reduced innovations covariance not PD");
  {
    Mat res = ss.transition * p * ss.transition.transpose() + q -
              apc * cpc_fac.solve(apc.transpose()) - p;
    red.dare_residual = res.cwiseAbs().maxCoeff();
  }
  Mat gain = cpc_fac.solve(apc.transpose()).transpose();  // apc * cpc^-1

  red.model.dt = model.dt;
  red.model.sigma = cpc / model.dt;

  // reduced MA terms B'_0 = I, B'_l = Cx A^{l-1} K', extended to decay
  // (or to the requested count when n_ma_terms > 0)
  red.model.ma.clear();
  red.model.ma.push_back(Mat::Identity(ntg, ntg));
  Mat pow = gain;  // A^{l-1} K'
  while (true) {
    if (n_ma_terms > 0 &&
        static_cast<int>(red.model.ma.size()) >= n_ma_terms)
      break;
    Mat term = cx * pow;
    red.model.ma.push_back(term);
    if (n_ma_terms <= 0 && term.cwiseAbs().maxCoeff() < detail::kMaTruncRel)
      break;
    if (red.model.ma.size() >= detail::kMaTruncCap)
      throw TruncationError("reduce_model: MA term cap hit before decay");
    pow = ss.transition * pow;
  }
  return red;
}

}  // namespace ctgc
