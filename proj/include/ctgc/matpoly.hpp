#pragma once

#include <complex>
#include <numbers>
#include <vector>

#include "ctgc/var_model.hpp"

namespace ctgc {

namespace detail {

constexpr int kMaxPolyDegree = 64;

// roots of c_0 + c_1 z + ... + c_d z^d via companion-matrix eigenvalues
inline std::vector<std::complex<double>> poly_roots(std::vector<double> c) {
  // strip negligible leading coefficients
  double scale = 0.0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) throw InputError("poly_roots: zero polynomial");
  while (c.size() > 1 && std::abs(c.back()) < 1e-14 * scale) c.pop_back();
  const int d = static_cast<int>(c.size()) - 1;
  if (d == 0) return {};
  Mat comp = Mat::Zero(d, d);
  for (int j = 0; j < d; ++j) comp(0, j) = -c[d - 1 - j] / c[d];
  if (d > 1) comp.block(1, 0, d - 1, d - 1) = Mat::Identity(d - 1, d - 1);
  Eigen::EigenSolver<Mat> es(comp, /*computeEigenvectors=*/false);
  std::vector<std::complex<double>> roots(d);
  for (int j = 0; j < d; ++j) roots[j] = es.eigenvalues()(j);
  return roots;
}

// det B(z) of a matrix polynomial B(z) = sum B_k z^k, expanded as a scalar
// polynomial by evaluation at roots of unity and inverse DFT
inline std::vector<double> det_polynomial(const std::vector<Mat>& terms) {
  if (terms.empty()) throw InputError("det_polynomial: empty polynomial");
  const int n = static_cast<int>(terms[0].rows());
  const int deg = n * (static_cast<int>(terms.size()) - 1);
  if (deg > kMaxPolyDegree)
    throw InputError("det_polynomial: degree exceeds limit of 64");
  const int m = deg + 1;
  std::vector<std::complex<double>> vals(m);
  for (int j = 0; j < m; ++j) {
    const std::complex<double> z =
        std::exp(std::complex<double>(0.0, 2.0 * std::numbers::pi * j / m));
    CMat b = CMat::Zero(n, n);
    std::complex<double> zk = 1.0;
    for (const auto& t : terms) {
      b += t.cast<std::complex<double>>() * zk;
      zk *= z;
    }
    vals[j] = Eigen::PartialPivLU<CMat>(b).determinant();
  }
  std::vector<double> coeffs(m);
  for (int k = 0; k < m; ++k) {
    std::complex<double> s = 0.0;
    for (int j = 0; j < m; ++j) {
      const std::complex<double> w = std::exp(
          std::complex<double>(0.0, -2.0 * std::numbers::pi * j * k / m));
      s += vals[j] * w;
    }
    coeffs[k] = s.real() / m;
  }
  return coeffs;
}

}  // namespace detail

struct MinimumPhaseResult {
  bool minimum_phase = true;
  std::vector<std::complex<double>> offending_roots;
};

// True iff every root of det B(z) lies strictly outside the unit disc
// (margin 1e-9). B_0 need not be the identity but must be nonsingular.
inline MinimumPhaseResult minimum_phase_check(const std::vector<Mat>& ma_terms) {
  auto coeffs = detail::det_polynomial(ma_terms);
  double scale = 0.0;
  for (double v : coeffs) scale = std::max(scale, std::abs(v));
  if (scale == 0.0 || std::abs(coeffs[0]) < 1e-14 * scale)
    throw InputError("minimum_phase_check: degenerate determinant polynomial");
  MinimumPhaseResult res;
  for (const auto& r : detail::poly_roots(coeffs)) {
    if (std::abs(r) <= 1.0 + 1e-9) {
      res.minimum_phase = false;
      res.offending_roots.push_back(r);
    }
  }
  return res;
}

}  // namespace ctgc
