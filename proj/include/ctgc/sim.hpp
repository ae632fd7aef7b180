#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "ctgc/ctvar.hpp"
#include "ctgc/rng.hpp"
#include "ctgc/timeseries.hpp"
#include "ctgc/var_model.hpp"

namespace ctgc {

struct SimConfig {
  double step = 0.01;     // integration increment (ms)
  double duration = 0.0;  // retained length (ms)
  double burnin = 0.0;    // discarded initial stretch (ms)
  std::uint64_t seed = 0;
};

struct Path {
  Mat samples;  // m x n at spacing dt
  double dt = 0.0;
};

// Bin the kernel over ((k-1)dt, k dt]: a point delay at tau lands in bin
// ceil(tau/dt), with tau = 0 assigned to bin 1. Coincident terms sum.
inline std::vector<std::pair<int, Mat>> discretize_kernel(
    const DelayKernel& kernel, double dt) {
  if (dt <= 0.0) throw InputError("discretize_kernel: dt must be positive");
  std::vector<std::pair<int, Mat>> bins;
  for (const auto& t : kernel.terms) {
    int k = std::max(1, static_cast<int>(std::ceil(t.delay / dt - 1e-9)));
    bool merged = false;
    for (auto& b : bins)
      if (b.first == k) {
        b.second += t.matrix;
        merged = true;
        break;
      }
    if (!merged) bins.emplace_back(k, t.matrix);
  }
  return bins;
}

// Euler-type recursion with delay bins:
//   x_k = x_{k-1} + dt * sum_l A_l[dt] x_{k-l} + eta_k,  eta ~ N(0, dt sigma).
// History over [-L dt, 0) starts at zero and the burn-in is discarded.
inline Path simulate_ctvar(const DelayKernel& kernel, const SimConfig& config) {
  if (config.duration <= 0.0 || config.step <= 0.0)
    throw InputError("simulate_ctvar: bad config");
  const double min_delay = kernel.min_positive_delay();
  if (min_delay > 0.0 && config.step > min_delay / 100.0 + 1e-12)
    throw InputError("simulate_ctvar: step must be <= min positive delay / 100");
  if (!kernel_stable(kernel))
    throw StabilityError("simulate_ctvar: kernel fails the stability screen");

  const int n = kernel.dim();
  const double dt = config.step;
  const auto bins = discretize_kernel(kernel, dt);
  int max_bin = 1;
  for (const auto& b : bins) max_bin = std::max(max_bin, b.first);

  const int n_burn = static_cast<int>(std::ceil(config.burnin / dt));
  const int n_keep = static_cast<int>(std::ceil(config.duration / dt));
  const int total = n_burn + n_keep;

  Eigen::LLT<Mat> chol(dt * kernel.sigma);
  if (chol.info() != Eigen::Success)
    throw NumericalError("simulate_ctvar: noise covariance not PD");
  const Mat noise_l = chol.matrixL();

  RandomStream rng(config.seed);
  Mat out(n_keep, n);
  std::vector<Vec> ring(max_bin + 1, Vec::Zero(n));  // ring[age]
  Vec x = Vec::Zero(n);
  Vec eta(n), draw(n);
  int head = 0;  // index of x_{k-1} within ring
  for (int k = 0; k < total; ++k) {
    for (int i = 0; i < n; ++i) draw(i) = rng.gaussian();
    eta = noise_l * draw;
    Vec next = ring[head];
    for (const auto& b : bins) {
      const int idx = (head + b.first - 1) % (max_bin + 1);
      next += dt * (b.second * ring[idx]);
    }
    next += eta;
    if (next.cwiseAbs().maxCoeff() > 1e8)
      throw StabilityError("simulate_ctvar: path divergence");
    head = (head - 1 + max_bin + 1) % (max_bin + 1);
    ring[head] = next;
    if (k >= n_burn) out.row(k - n_burn) = next.transpose();
  }
  return {std::move(out), dt};
}

// retain every (dt_out/dt)-th row, phase 0; dt_out must be an integer
// multiple of the path spacing
inline TimeSeriesData subsample_path(const Path& path, double dt_out) {
  const double ratio = dt_out / path.dt;
  const int stride = static_cast<int>(std::llround(ratio));
  if (stride < 1 || std::abs(ratio - stride) > 1e-9 * std::max(1.0, ratio))
    throw InputError("subsample_path: dt_out is not an integer multiple of the path step");
  const int m = (static_cast<int>(path.samples.rows()) + stride - 1) / stride;
  TimeSeriesData out;
  out.dt = dt_out;
  out.observations.resize(m, path.samples.cols());
  for (int i = 0; i < m; ++i)
    out.observations.row(i) = path.samples.row(i * stride);
  return out;
}

// Simulate a VAR with innovations N(0, dt sigma); 1000*p burn-in steps.
inline TimeSeriesData simulate_var(const VarModel& model, int m,
                                   std::uint64_t seed) {
  if (m < 1) throw InputError("simulate_var: m must be >= 1");
  const int n = model.dim();
  const int p = model.order();
  Eigen::LLT<Mat> chol(model.dt * model.sigma);
  if (chol.info() != Eigen::Success)
    throw NumericalError("simulate_var: noise covariance not PD");
  const Mat noise_l = chol.matrixL();
  RandomStream rng(seed);
  const int burn = 1000 * p;
  std::vector<Vec> ring(p, Vec::Zero(n));
  int head = 0;
  TimeSeriesData out;
  out.dt = model.dt;
  out.observations.resize(m, n);
  Vec draw(n);
  for (int k = 0; k < burn + m; ++k) {
    for (int i = 0; i < n; ++i) draw(i) = rng.gaussian();
    Vec next = noise_l * draw;
    for (int l = 1; l <= p; ++l)
      next += model.coeffs[l - 1] * ring[(head + l - 1) % p];
    if (next.cwiseAbs().maxCoeff() > 1e8)
      throw StabilityError("simulate_var: path divergence");
    head = (head - 1 + p) % p;
    ring[head] = next;
    if (k >= burn) out.observations.row(k - burn) = next.transpose();
  }
  return out;
}

}  // namespace ctgc
