#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "ctgc/errors.hpp"

namespace ctgc {

namespace detail {

// regularized lower incomplete gamma P(a, x), series for x < a + 1 and
// continued fraction otherwise
inline double regularized_gamma_p(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw InputError("regularized_gamma_p: bad arguments");
  if (x == 0.0) return 0.0;
  const double lg = std::lgamma(a);
  if (x < a + 1.0) {
    double ap = a, sum = 1.0 / a, del = sum;
    for (int i = 0; i < 1000; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - lg);
  }
  // Lentz continued fraction for Q(a, x)
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  const double q = std::exp(-x + a * std::log(x) - lg) * h;
  return 1.0 - q;
}

}  // namespace detail

// Chi-squared distribution handle, central or noncentral. The noncentral CDF
// is the Poisson mixture of central CDFs, truncated once terms fall below
// 1e-14 of the running sum.
class Chi2 {
 public:
  Chi2(int d, double noncentrality = 0.0) : d_(d), nc_(noncentrality) {
    if (d < 1) throw InputError("Chi2: degrees of freedom must be >= 1");
    if (noncentrality < 0.0) throw InputError("Chi2: negative noncentrality");
  }

  int dof() const { return d_; }
  double noncentrality() const { return nc_; }

  double cdf(double u) const {
    if (u <= 0.0) return 0.0;
    if (nc_ == 0.0) return detail::regularized_gamma_p(0.5 * d_, 0.5 * u);
    const double half_nc = 0.5 * nc_;
    // start at the modal Poisson index and sweep outward
    const int j0 = std::max(0, static_cast<int>(half_nc));
    double logw0 = -half_nc + j0 * std::log(std::max(half_nc, 1e-300)) -
                   std::lgamma(j0 + 1.0);
    double sum = 0.0;
    double w = std::exp(logw0);
    // upward
    double wj = w;
    for (int j = j0;; ++j) {
      const double term = wj * detail::regularized_gamma_p(0.5 * d_ + j, 0.5 * u);
      sum += term;
      wj *= half_nc / (j + 1.0);
      if (term < 1e-14 * std::max(sum, 1e-300) && j > j0 + 4) break;
      if (j > j0 + 100000) break;
    }
    // downward
    wj = w;
    for (int j = j0 - 1; j >= 0; --j) {
      wj *= (j + 1.0) / half_nc;
      const double term = wj * detail::regularized_gamma_p(0.5 * d_ + j, 0.5 * u);
      sum += term;
      if (term < 1e-14 * std::max(sum, 1e-300)) break;
    }
    return std::min(sum, 1.0);
  }

  // monotone bisection refined to |cdf(quantile) - q| <= 1e-12
  double quantile(double q) const {
    if (q < 0.0 || q >= 1.0) throw InputError("Chi2::quantile: q must be in [0, 1)");
    if (q == 0.0) return 0.0;
    double lo = 0.0, hi = d_ + nc_ + 10.0;
    while (cdf(hi) < q) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (cdf(mid) < q)
        lo = mid;
      else
        hi = mid;
      if (hi - lo < 1e-13 * std::max(1.0, hi)) break;
    }
    return 0.5 * (lo + hi);
  }

 private:
  int d_;
  double nc_;
};

inline Chi2 noncentral_chi2(int d, double noncentrality) {
  return Chi2(d, noncentrality);
}

// Kolmogorov-Smirnov test of a sample against U(0,1); returns the asymptotic
// p-value with the Stephens small-sample correction
inline double ks_uniform_pvalue(std::vector<double> sample) {
  if (sample.empty()) throw InputError("ks_uniform_pvalue: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double cdf = std::clamp(sample[i], 0.0, 1.0);
    d = std::max(d, std::abs((i + 1.0) / n - cdf));
    d = std::max(d, std::abs(cdf - i / n));
  }
  const double lam = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
  double p = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = 2.0 * (j % 2 == 1 ? 1.0 : -1.0) *
                        std::exp(-2.0 * j * j * lam * lam);
    p += term;
    if (std::abs(term) < 1e-12) break;
  }
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace ctgc
