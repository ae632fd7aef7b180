#pragma once

#include "ctgc/var_model.hpp"

namespace ctgc {

// Observed multivariate series: one row per observation, one column per
// variable. The mean is removed before any fit unless zero_mean is set.
struct TimeSeriesData {
  Mat observations;  // m x n
  double dt = 1.0;   // ms
  bool zero_mean = false;

  int n_obs() const { return static_cast<int>(observations.rows()); }
  int dim() const { return static_cast<int>(observations.cols()); }
};

}  // namespace ctgc
