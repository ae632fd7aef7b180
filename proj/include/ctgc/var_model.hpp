#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "ctgc/errors.hpp"

namespace ctgc {

using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXd;

namespace detail {

inline bool is_symmetric(const Mat& m, double rtol = 1e-12) {
  double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= rtol * scale;
}

inline double min_eigenvalue_sym(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.transpose()),
                                        Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// companion matrix of a VAR coefficient list; its spectral radius < 1 iff
// every root of det(I - sum A_l z^l) lies outside the unit disc
inline Mat companion(const std::vector<Mat>& coeffs) {
  const int p = static_cast<int>(coeffs.size());
  const int n = p > 0 ? static_cast<int>(coeffs[0].rows()) : 0;
  Mat comp = Mat::Zero(n * p, n * p);
  for (int l = 0; l < p; ++l) comp.block(0, l * n, n, n) = coeffs[l];
  if (p > 1)
    comp.block(n, 0, n * (p - 1), n * (p - 1)) =
        Mat::Identity(n * (p - 1), n * (p - 1));
  return comp;
}

inline double spectral_radius(const Mat& m) {
  if (m.rows() == 0) return 0.0;
  return m.eigenvalues().cwiseAbs().maxCoeff();
}

// determinant of a (symmetrized) matrix via LU with partial pivoting.
// Values in (-1e-12, 0] clamp to 0; anything more negative is an error.
inline double det_symmetrized(const Mat& m, const char* what) {
  Mat s = 0.5 * (m + m.transpose());
  double d = Eigen::PartialPivLU<Mat>(s).determinant();
  if (d < -1e-12)
    throw NumericalError(std::string(what) + ": negative determinant");
  return std::max(d, 0.0);
}

inline double log_det_ratio(const Mat& num, const Mat& den, const char* what) {
  double dn = det_symmetrized(num, what);
  double dd = det_symmetrized(den, what);
  if (dd <= 0.0 || dn <= 0.0)
    throw NumericalError(std::string(what) + ": singular matrix in log-det ratio");
  return std::log(dn / dd);
}

}  // namespace detail

// Discrete-time VAR(p): X_k = sum_{l=1..p} A_l X_{k-l} + e_k, with residual
// noise *intensity* sigma (units x^2/ms, so cov(e_k) = dt * sigma).
struct VarModel {
  std::vector<Mat> coeffs;  // A_1 .. A_p
  Mat sigma;
  double dt = 1.0;

  VarModel(std::vector<Mat> coeffs_, Mat sigma_, double dt_)
      : coeffs(std::move(coeffs_)), sigma(std::move(sigma_)), dt(dt_) {
    if (dt <= 0.0) throw InputError("VarModel: dt must be positive");
    if (coeffs.empty()) throw InputError("VarModel: order must be >= 1");
    const int n = dim();
    for (const auto& a : coeffs)
      if (a.rows() != n || a.cols() != n)
        throw InputError("VarModel: coefficient size mismatch");
    if (sigma.rows() != n || sigma.cols() != n)
      throw InputError("VarModel: sigma size mismatch");
    if (!detail::is_symmetric(sigma))
      throw InputError("VarModel: sigma not symmetric");
    if (detail::min_eigenvalue_sym(sigma) <= 0.0)
      throw InputError("VarModel: sigma not positive-definite");
    if (spectral_radius() >= 1.0)
      throw StabilityError("VarModel: unstable (AR root on or inside unit disc)");
  }

  int order() const { return static_cast<int>(coeffs.size()); }
  int dim() const { return static_cast<int>(coeffs[0].rows()); }
  double spectral_radius() const {
    return detail::spectral_radius(detail::companion(coeffs));
  }
};

// Moving-average representation: X_k = sum_{l>=0} B_l e_{k-l}, B_0 = I.
struct MaSequence {
  std::vector<Mat> terms;  // B_0 .. B_K
  double dt = 1.0;

  int dim() const { return static_cast<int>(terms.at(0).rows()); }
};

// Lagged covariances Gamma_0 .. Gamma_K; Gamma_{-k} = Gamma_k^T implicitly.
struct AutocovSequence {
  std::vector<Mat> lags;
  double dt = 1.0;

  int dim() const { return static_cast<int>(lags.at(0).rows()); }
  int max_lag() const { return static_cast<int>(lags.size()) - 1; }
};

enum class SpectralKind { cpsd, transfer };

// Per-frequency complex matrices over an ordinary-frequency grid (kHz).
struct SpectralGrid {
  std::vector<double> freqs;
  std::vector<CMat> values;
  SpectralKind kind = SpectralKind::cpsd;
};

struct MsPredictionError {
  int horizon = 1;
  Mat matrix;  // n x n, symmetric PSD (x^2)
};

// Index sets into the joint variable ordering. Target and source must be
// disjoint and together exhaust the variables (unconditional measures only).
struct Partition {
  std::vector<int> target;
  std::vector<int> source;

  void validate(int n) const {
    std::vector<char> seen(n, 0);
    auto mark = [&](const std::vector<int>& idx) {
      for (int i : idx) {
        if (i < 0 || i >= n) throw InputError("Partition: index out of range");
        if (seen[i]) throw InputError("Partition: overlapping indices");
        seen[i] = 1;
      }
    };
    mark(target);
    mark(source);
    if (target.empty() || source.empty())
      throw InputError("Partition: target and source must be nonempty");
    for (int i = 0; i < n; ++i)
      if (!seen[i])
        throw InputError("Partition: target and source must exhaust all variables");
  }
};

struct GcValue {
  double value = 0.0;  // nats
  Partition partition;
  int horizon = 1;
};

// Reduced (subprocess) model in innovations form: MA terms plus innovations
// intensity. Enough to evaluate multistep prediction errors of the subprocess.
struct SubprocessModel {
  std::vector<Mat> ma;  // B'_0 = I, B'_1, ...
  Mat sigma;            // innovations intensity (x^2/ms)
  double dt = 1.0;
};

namespace detail {

inline Mat submatrix(const Mat& m, const std::vector<int>& rows,
                     const std::vector<int>& cols) {
  Mat out(rows.size(), cols.size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
  return out;
}

inline CMat submatrix(const CMat& m, const std::vector<int>& rows,
                      const std::vector<int>& cols) {
  CMat out(rows.size(), cols.size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
  return out;
}

}  // namespace detail

// Uniform grid of n ordinary frequencies covering [-1/(2dt), 1/(2dt)).
// A plain average of a periodic integrand over this grid is its trapezoid
// integral scaled by dt, which for smooth spectra converges spectrally.
inline std::vector<double> nyquist_grid(double dt, int n = 1024) {
  if (dt <= 0.0 || n < 2) throw InputError("nyquist_grid: bad arguments");
  std::vector<double> freqs(n);
  for (int j = 0; j < n; ++j) freqs[j] = (-0.5 + double(j) / n) / dt;
  return freqs;
}

}  // namespace ctgc
